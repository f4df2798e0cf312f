#pragma once

#include "mglcop/glmga.hpp"
#include "mglcop/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace mglcop::margins {

// u_ij = rank(y_ij) / (n + 1), ties get the average rank.
PseudoSample rank_pseudo_obs(const Eigen::MatrixXd& data);
// Gaussian-kernel smoothed empirical cdf evaluated at the data.
PseudoSample kernel_pseudo_obs(const Eigen::MatrixXd& data, double bandwidth = 0.2);

// Negative binomial with mean lambda. Quadratic: var = lambda + phi lambda^2.
// Linear: var = lambda (1 + phi).
enum class NbVariance { quadratic, linear };

struct CountPart {
    double lambda = 1.0;
    double phi = 1.0;
    NbVariance variance = NbVariance::quadratic;
};

// Generalized Pareto, cdf 1 - (1 + shape (y - mu) / scale)^(-1/shape).
struct TailPart {
    double mu = 0.0;
    double shape = 0.5;
    double scale = 1.0;
};

// Count model right-truncated at u for y <= u, GP above u.
struct SplicedMargin {
    double w = 0.5;
    int u = 1;
    CountPart count;
    TailPart tail;
};

double nb_log_pmf(int y, const CountPart& c);
// pmf and cdf of the count part renormalized on {0, ..., u}
double truncated_nb_pmf(int y, int u, const CountPart& c);
double truncated_nb_cdf(double y, int u, const CountPart& c);

double gp_pdf(double y, const TailPart& t);
double gp_cdf(double y, const TailPart& t);
double gp_quantile(double p, const TailPart& t);

void validate(const SplicedMargin& m);
double spliced_pdf(double y, const SplicedMargin& m);
double spliced_cdf(double y, const SplicedMargin& m);
double spliced_quantile(double p, const SplicedMargin& m);
std::vector<double> sample_spliced(const SplicedMargin& m, std::size_t n, std::uint64_t seed);

struct SplicedFit {
    SplicedMargin margin;
    // standard errors of lambda, phi, shape, scale
    double se_lambda = 0.0;
    double se_phi = 0.0;
    double se_shape = 0.0;
    double se_scale = 0.0;
    double loglik_count = 0.0;
    double loglik_tail = 0.0;
    std::size_t n_count = 0;
    std::size_t n_tail = 0;
};

// w = (n - n_c) / n with n_c the number of exceedances of u; truncated NB by
// ML on y <= u, GP by ML on y > u with location fixed at u.
SplicedFit spliced_fit(const std::vector<double>& data, int u, NbVariance variance = NbVariance::quadratic);

struct QuantileResiduals {
    std::vector<double> count;  // randomized, one per y <= u
    std::vector<double> tail;   // one per y > u
};
QuantileResiduals quantile_residuals(const std::vector<double>& data, const SplicedMargin& m, std::uint64_t seed);

struct FittedModel {
    std::function<double(double)> cdf;
    std::function<double(double)> quantile;
};
using Refit = std::function<FittedModel(const std::vector<double>&)>;

struct GofResult {
    double ks = 0.0;
    double cvm = 0.0;
    double ad = 0.0;
    double p_ks = 0.0;
    double p_cvm = 0.0;
    double p_ad = 0.0;
    int n_boot = 0;
    int refit_failures = 0;
};

// KS, CvM and AD against the fitted cdf, p-values by parametric bootstrap
// with a refit on every simulated sample. Throws NumericalError if more than
// 10% of the refits fail.
GofResult gof_tests(const std::vector<double>& data, const FittedModel& fitted, const Refit& refit, int n_boot,
                    std::uint64_t seed);

FittedModel glmga_model(const GlmgaParams& p);
Refit glmga_refit();

}  // namespace mglcop::margins
