#pragma once

#include "mglcop/types.hpp"

#include <cstdint>
#include <vector>

// Extreme-value limit of the survival MGL copula.
namespace mglcop::ev {

// Pickands dependence function A_delta(w), w in [0,1].
double pickands_A(double w, double delta);

// Stable tail dependence function for any d. For d = 2 this is the
// closed form (u1 + u2) A(u1 / (u1 + u2)); for d > 2 it is evaluated as a
// one-dimensional integral over the gamma mixing variable.
double stable_tail_l(const std::vector<double>& u, double delta);

// Partial derivatives of l(z1, z2).
struct TailGradient {
    double l;
    double d1;
    double d2;
    double d12;
};
TailGradient stable_tail_l_derivs(double z1, double z2, double delta);

double ev_cdf(double u1, double u2, double delta);
double ev_pdf(double u1, double u2, double delta);
double ev_log_pdf(double u1, double u2, double delta);
// h_{2|1}(u_target | u_given); the copula is exchangeable.
double ev_h(double u_target, double u_given, double delta);
double ev_h_inverse(double w, double u_given, double delta);

// Limiting lower tail copula of the MGL copula.
double ev_lower_copula(double u1, double u2, double delta);

PseudoSample sample_ev(double delta, std::size_t n, std::uint64_t seed);

}  // namespace mglcop::ev
