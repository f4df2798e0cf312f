#pragma once

// Special functions used throughout the library: complementary error
// function, log-gamma/digamma, the regularized incomplete beta function,
// its inverse and the derivative of the inverse with respect to the
// second shape parameter.
//
// The incomplete-beta routines carry both tails explicitly. Callers that
// need 1 - I_x (or 1 - x for a quantile) should take it from the returned
// pair rather than subtracting, since most of the copula formulas are
// evaluated in the far tails.

namespace mglcop::specfun {

struct BetaShape {
    double m;  // first shape
    double n;  // second shape
};

// I_x(m, n) and 1 - I_x(m, n), both to full relative precision, plus their logs.
struct BetaTails {
    double lower;
    double upper;
    double log_lower;
    double log_upper;
};

// A point x in [0,1] together with 1 - x.
struct UnitPair {
    double x;
    double y;
};

double erfc(double x);

double log_gamma(double x);
double digamma(double x);
double log_beta(double a, double b);
// lgamma(a + h) - lgamma(a) and digamma(a + h) - digamma(a) without the
// cancellation of the direct differences at large a.
double log_gamma_ratio(double a, double h);
double digamma_diff(double a, double h);

double inc_beta(double x, BetaShape s);
double inc_beta_complement(double x, BetaShape s);
// x and y = 1 - x are passed separately so that points close to 1 keep
// their precision.
BetaTails inc_beta_tails(double x, double y, BetaShape s);

// log of the beta density at x (with y = 1 - x).
double log_beta_pdf(double x, double y, BetaShape s);
double beta_pdf(double x, BetaShape s);

// Solves I_x = p. `inv_inc_beta_pair` takes q = 1 - p as well and returns
// both x and 1 - x, which is what t(u) = x / (1 - x) style formulas need.
double inv_inc_beta(double p, BetaShape s);
UnitPair inv_inc_beta_pair(double p, double q, BetaShape s);

// Logit versions: z = log(x / (1 - x)). These stay meaningful when x or
// 1 - x is below the double range, which happens for small second shapes.
BetaTails inc_beta_tails_logit(double z, BetaShape s);
double inv_inc_beta_logit(double p, double q, BetaShape s);

// d/dn of inv_inc_beta(p, {1/2, n}).
double d_inv_inc_beta_dshape(double p, double n);
// Same derivative at an already solved root (x, 1 - x) of I_x(m, n) = p.
double d_inv_inc_beta_dshape_at(UnitPair root, BetaShape s);
// d/dn of the logit z of the root, evaluated at the root z itself.
double d_inv_inc_beta_logit_dshape(double z, BetaShape s);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace mglcop::specfun
