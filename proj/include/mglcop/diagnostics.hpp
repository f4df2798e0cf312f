#pragma once

#include "mglcop/errors.hpp"
#include "mglcop/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace mglcop::diagnostics {

using CopulaCdf = std::function<double(double, double)>;

// Bivariate cdf of a fitted family at parameter delta.
CopulaCdf copula_cdf(Family family, double delta);

// C_emp(t) = (1/n) sum 1{u_i1 < t1} 1{u_i2 < t2}; t_j = 1 counts every point.
double empirical_copula(const PseudoSample& pseudo, const std::vector<double>& t);

struct Region {
    double a1 = 0.0, b1 = 1.0;
    double a2 = 0.0, b2 = 1.0;
};

// Root mean squared C - C_emp over a midpoint grid on the region.
double fit_error_eA(const PseudoSample& pseudo, const CopulaCdf& c, const Region& region, int grid = 50);

enum class Tail { upper, lower };

struct TailWeightConfig {
    int k = 6;
    double p = 0.5;
    Tail tail = Tail::upper;
};

// Weighted conditional correlation of a(1 - (1 - R)/p) over the points with
// both 1 - R below p (upper tail), or of a(1 - R/p) for R below p (lower).
double tw_dep_empirical(const PseudoSample& pseudo, const TailWeightConfig& cfg = {});

// Model version through the m_12, m_1, m_2, m_11, m_22 integrals. For the
// upper tail `c` is reflected first unless `reflected` is already the cdf
// of (1 - U1, 1 - U2).
double tw_dep_model(const CopulaCdf& c, const TailWeightConfig& cfg = {}, bool reflected = false);
double tw_dep_model(Family family, double delta, const TailWeightConfig& cfg = {});

struct BootstrapResult {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> values;  // successful replicates, in replicate order
    int failures = 0;
};

// Percentile interval of replicate(seed_b), b = 0..n_boot-1, with seeds derived
// from `seed`. A replicate signals a failed refit by throwing NumericalError;
// more than 10% failures abort with NumericalError.
BootstrapResult bootstrap_ci(const std::function<double(std::uint64_t)>& replicate, int n_boot, double level,
                             std::uint64_t seed);

// Parametric bootstrap of a statistic of an intercept-only copula fit:
// simulate n pairs at delta, refit delta, evaluate statistic(refit delta).
BootstrapResult bootstrap_copula(Family family, double delta, std::size_t n,
                                 const std::function<double(double)>& statistic, int n_boot, double level,
                                 std::uint64_t seed);

PseudoSample sample_family(Family family, double delta, std::size_t n, std::uint64_t seed);

enum class CovariateLaw { normal, time_trend };

struct Scenario {
    std::string name = "sim";
    std::vector<std::size_t> n_grid{100, 500, 1000};
    int d = 2;
    Eigen::VectorXd beta;
    CovariateLaw covariates = CovariateLaw::normal;
    int periods = 24;  // time_trend: x = (1, t), t = 1..periods cycling over rows
    int replicates = 200;
    int restarts = 0;
    Family family = Family::surv_mgl;
};

struct SimRow {
    std::size_t n = 0;
    int coef = 0;
    double truth = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double bias = 0.0;
    double variance = 0.0;  // divisor = successful replicates
    double mse = 0.0;
    double se_median = 0.0;  // Monte-Carlo s.e. of the median
    int replicates = 0;
    int failures = 0;
};

struct SimStudy {
    Scenario scenario;
    std::vector<SimRow> rows;
    std::vector<std::vector<Eigen::VectorXd>> estimates;  // per n, successful replicates
};

Eigen::MatrixXd scenario_design(const Scenario& s, std::size_t n, std::uint64_t seed);
SimStudy simstudy(const Scenario& scenario, std::uint64_t seed);
void write_simstudy_csv(std::ostream& os, const SimStudy& study);

}  // namespace mglcop::diagnostics
