#pragma once

#include "mglcop/types.hpp"

#include <cstdint>
#include <vector>

namespace mglcop::copula {

// Arguments are clamped to [kClampLo, kClampHi] before t(u) is formed.
constexpr double kClampLo = 1e-10;
constexpr double kClampHi = 1.0 - 1e-10;
double clamp_unit(double u);

// t(u; a) = w / (1 - w), w = I^{-1}_{1/2,a}(1 - u), with a = 1/delta.
double t_fn(double u, double delta);
double log_t_fn(double u, double delta);

double mgl_cdf(const std::vector<double>& u, double delta);
double mgl_pdf(const std::vector<double>& u, double delta);
double mgl_log_pdf(const std::vector<double>& u, double delta);

// Survival copula: law of 1 - U for U ~ MGL copula. The cdf uses
// inclusion-exclusion and is limited to d <= 6.
double surv_mgl_pdf(const std::vector<double>& u, double delta);
double surv_mgl_log_pdf(const std::vector<double>& u, double delta);
double surv_mgl_cdf(const std::vector<double>& u, double delta);

double mgb2_pdf(const std::vector<double>& u, const std::vector<double>& p, double q);
double mgb2_log_pdf(const std::vector<double>& u, const std::vector<double>& p, double q);

// The bivariate family is exchangeable, so h_{2|1}(v|u) and h_{1|2}(v|u)
// are the same function of (target, given); `Direction` only documents
// which partial derivative the caller means.
enum class Direction { two_given_one, one_given_two };

double h_forward(double u_target, double u_given, double delta, Direction dir = Direction::two_given_one);
double h_inverse(double w, double u_given, double delta, Direction dir = Direction::two_given_one);
double surv_h_forward(double u_target, double u_given, double delta, Direction dir = Direction::two_given_one);
double surv_h_inverse(double w, double u_given, double delta, Direction dir = Direction::two_given_one);

// Sequential construction: beta-ratio draws, cumulative products,
// final incomplete-beta transform. `survival` returns 1 - U*.
PseudoSample sample_mgl_copula(double delta, int d, std::size_t n, std::uint64_t seed, bool survival = false);
// One row per entry of `delta`.
PseudoSample sample_mgl_copula(const std::vector<double>& delta, int d, std::uint64_t seed, bool survival = false);

double kendall_tau(double delta);
double spearman_rho(double delta);

struct TailDependence {
    double lower;
    double upper;
};
TailDependence tail_dependence(double delta);           // MGL copula
TailDependence surv_tail_dependence(double delta);      // survival MGL copula

// Gumbel copula (delta >= 1), used for comparison fits.
double gumbel_cdf(double u1, double u2, double delta);
double gumbel_pdf(double u1, double u2, double delta);
double gumbel_log_pdf(double u1, double u2, double delta);
double gumbel_h(double u_target, double u_given, double delta);

}  // namespace mglcop::copula
