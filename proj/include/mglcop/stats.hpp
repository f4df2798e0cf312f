#pragma once

#include <functional>
#include <vector>

namespace mglcop::stats {

double mean(const std::vector<double>& x);
// Sample variance with divisor n - 1.
double variance(const std::vector<double>& x);
double skewness(const std::vector<double>& x);
double pearson(const std::vector<double>& x, const std::vector<double>& y);
// Type-7 (linear interpolation) sample quantile.
double quantile(std::vector<double> x, double p);
double median(std::vector<double> x);

// Kendall's tau-a in O(n log n) (Knight's merge-sort algorithm). Ties count
// as neither concordant nor discordant.
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// One-sample goodness-of-fit statistics against a continuous cdf.
double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf);
double cvm_statistic(std::vector<double> x, const std::function<double(double)>& cdf);
double ad_statistic(std::vector<double> x, const std::function<double(double)>& cdf);
// KS distance of a sample from the uniform law on (0,1).
double ks_uniform(std::vector<double> u);

}  // namespace mglcop::stats
