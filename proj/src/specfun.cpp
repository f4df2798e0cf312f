#include "mglcop/specfun.hpp"

#include "mglcop/errors.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mglcop::specfun {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_shape(BetaShape s, const char* fn) {
    if (!(s.m > 0.0) || !(s.n > 0.0) || !std::isfinite(s.m) || !std::isfinite(s.n)) {
        throw DomainError(std::string(fn) + ": beta shapes must be positive and finite");
    }
}

// log(1 + exp(v)) without overflow.
double softplus(double v) {
    return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr int max_iter = 100000;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 2.0 * kEps) break;
    }
    return h;
}

// Both tails of I_x(a, b) from x, y = 1 - x and their logs. The logs are
// taken as inputs so that arguments below the double range (x ~ e^-800)
// still give meaningful log-tails.
BetaTails tails_impl(double x, double y, double log_x, double log_y, double a, double b,
                     double lbeta) {
    if (log_x == -kInf) return {0.0, 1.0, -kInf, 0.0};
    if (log_y == -kInf) return {1.0, 0.0, 0.0, -kInf};
    BetaTails out{};
    if (b >= 1e6 && a <= 10.0) {
        // Gamma limit P(a, -N log(1 - x)), N = b + (a - 1)/2; relative error
        // O(b^-2). The continued fraction below cancels near the mean here.
        const double w = -(b + 0.5 * (a - 1.0)) * log_y;
        out.lower = boost::math::gamma_p(a, w);
        out.upper = boost::math::gamma_q(a, w);
        out.log_lower = std::log(out.lower);
        out.log_upper = out.upper > 0.0 ? std::log(out.upper) : (a - 1.0) * std::log(w) - w - boost::math::lgamma(a);
        return out;
    }
    if (x < (a + 1.0) / (a + b + 2.0)) {
        const double lfront = a * log_x + b * log_y - lbeta - std::log(a);
        out.log_lower = lfront + std::log(beta_cf(a, b, x));
        out.lower = std::exp(out.log_lower);
        out.upper = 1.0 - out.lower;
        out.log_upper = std::log1p(-out.lower);
    } else {
        const double lfront = a * log_x + b * log_y - lbeta - std::log(b);
        out.log_upper = lfront + std::log(beta_cf(b, a, y));
        out.upper = std::exp(out.log_upper);
        out.lower = 1.0 - out.upper;
        out.log_lower = std::log1p(-out.upper);
    }
    return out;
}

UnitPair logistic(double z) {
    if (z > 0.0) {
        const double e = std::exp(-z);
        return {1.0 / (1.0 + e), e / (1.0 + e)};
    }
    const double e = std::exp(z);
    return {e / (1.0 + e), 1.0 / (1.0 + e)};
}

// Starting logit for the Newton iteration. Normal approximation for shapes
// >= 1, otherwise the two power-law tail approximations.
double initial_logit(double p, double q, double a, double b, double lbeta) {
    if (a >= 1.0 && b >= 1.0) {
        const double pp = std::min(p, q);
        const double t = std::sqrt(-2.0 * std::log(pp));
        double xn = (2.30753 + t * 0.27061) / (1.0 + t * (0.99229 + t * 0.04481)) - t;
        if (p >= q) xn = -xn;
        const double al = (xn * xn - 3.0) / 6.0;
        const double h = 2.0 / (1.0 / (2.0 * a - 1.0) + 1.0 / (2.0 * b - 1.0));
        const double w = xn * std::sqrt(al + h) / h -
                         (1.0 / (2.0 * b - 1.0) - 1.0 / (2.0 * a - 1.0)) * (al + 5.0 / 6.0 - 2.0 / (3.0 * h));
        return std::log(a) - std::log(b) - 2.0 * w;
    }
    const double lna = std::log(a / (a + b));
    const double lnb = std::log(b / (a + b));
    const double t = std::exp(a * lna) / a;
    const double u = std::exp(b * lnb) / b;
    const double w = t + u;
    (void)lbeta;
    if (p < t / w) {
        const double lx = std::min((std::log(a * w) + std::log(p)) / a, -1e-12);
        return lx - std::log(-std::expm1(lx));
    }
    const double ly = std::min((std::log(b * w) + std::log(q)) / b, -1e-12);
    return std::log(-std::expm1(ly)) - ly;
}

}  // namespace

double erfc(double x) {
    if (std::isnan(x)) throw DomainError("erfc: NaN argument");
    return std::erfc(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: argument must be positive");
    if (x == kInf) return kInf;
    return boost::math::lgamma(x);
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: argument must be positive and finite");
    return boost::math::digamma(x);
}

double log_gamma_ratio(double a, double h) {
    if (!(a > 0.0) || !(h >= 0.0)) throw DomainError("log_gamma_ratio: need a > 0 and h >= 0");
    if (h == 0.0) return 0.0;
    const double r = boost::math::tgamma_delta_ratio(a, h);
    if (std::isnormal(r)) return -std::log(r);
    return boost::math::lgamma(a + h) - boost::math::lgamma(a);
}

double digamma_diff(double a, double h) {
    if (!(a > 0.0) || !(h >= 0.0) || !std::isfinite(a)) throw DomainError("digamma_diff: need finite a > 0 and h >= 0");
    if (a < 20.0) return boost::math::digamma(a + h) - boost::math::digamma(a);
    // asymptotic series, differenced term by term
    static constexpr double c[] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132};
    const double l = std::log1p(h / a);
    double out = l + h / (2.0 * a * (a + h));
    double ap = 1.0;
    for (int k = 1; k <= 5; ++k) {
        ap /= a * a;
        out -= c[k - 1] * ap * std::expm1(-2.0 * k * l);
    }
    return out;
}

double log_beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("log_beta: arguments must be positive");
    // Boost's beta avoids the cancellation in lgamma(a) + lgamma(b) - lgamma(a + b)
    // when one argument is large; fall back to lgamma when it leaves the double range.
    const double direct = boost::math::beta(a, b);
    if (std::isnormal(direct)) return std::log(direct);
    return boost::math::lgamma(a) + boost::math::lgamma(b) - boost::math::lgamma(a + b);
}

BetaTails inc_beta_tails(double x, double y, BetaShape s) {
    check_shape(s, "inc_beta");
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0)) {
        throw DomainError("inc_beta: argument outside [0,1]");
    }
    // log1p of the smaller side keeps b * log(1 - x) accurate for large b
    double lx = 0.0;
    double ly = 0.0;
    if (x <= y) {
        lx = x > 0.0 ? std::log(x) : -kInf;
        ly = std::log1p(-x);
    } else {
        ly = y > 0.0 ? std::log(y) : -kInf;
        lx = std::log1p(-y);
    }
    return tails_impl(x, y, lx, ly, s.m, s.n, log_beta(s.m, s.n));
}

double inc_beta(double x, BetaShape s) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("inc_beta: argument outside [0,1]");
    return inc_beta_tails(x, 1.0 - x, s).lower;
}

double inc_beta_complement(double x, BetaShape s) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("inc_beta: argument outside [0,1]");
    return inc_beta_tails(x, 1.0 - x, s).upper;
}

double log_beta_pdf(double x, double y, BetaShape s) {
    check_shape(s, "beta_pdf");
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("beta_pdf: argument outside [0,1]");
    return (s.m - 1.0) * std::log(x) + (s.n - 1.0) * std::log(y) - log_beta(s.m, s.n);
}

double beta_pdf(double x, BetaShape s) {
    return std::exp(log_beta_pdf(x, 1.0 - x, s));
}

BetaTails inc_beta_tails_logit(double z, BetaShape s) {
    check_shape(s, "inc_beta");
    if (std::isnan(z)) throw DomainError("inc_beta: NaN logit");
    const UnitPair xy = logistic(z);
    return tails_impl(xy.x, xy.y, -softplus(-z), -softplus(z), s.m, s.n, log_beta(s.m, s.n));
}

UnitPair inv_inc_beta_pair(double p, double q, BetaShape s) {
    check_shape(s, "inv_inc_beta");
    if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
        throw DomainError("inv_inc_beta: probability outside [0,1]");
    }
    if (p <= 0.0) return {0.0, 1.0};
    if (q <= 0.0) return {1.0, 0.0};
    return logistic(inv_inc_beta_logit(p, q, s));
}

double inv_inc_beta_logit(double p, double q, BetaShape s) {
    check_shape(s, "inv_inc_beta");
    if (!(p > 0.0 && p <= 1.0) || !(q > 0.0 && q <= 1.0)) {
        throw DomainError("inv_inc_beta_logit: probabilities must lie in (0,1]");
    }

    const double a = s.m;
    const double b = s.n;
    const double lbeta = log_beta(a, b);
    const bool use_lower = p <= q;
    const double target = use_lower ? std::log(p) : std::log(q);

    // Newton on g(z) = log I - log p (or log q - log(1 - I)) in the logit
    // z = log(x / (1 - x)). g is increasing and concave there, so after the
    // first step the iterates approach the root monotonically; a bracket
    // guards the remaining cases.
    auto eval = [&](double z, double& g, double& dg) {
        const UnitPair xy = logistic(z);
        const double lx = -softplus(-z);
        const double ly = -softplus(z);
        const BetaTails t = tails_impl(xy.x, xy.y, lx, ly, a, b, lbeta);
        const double log_density = a * lx + b * ly - lbeta;  // dI/dz
        if (use_lower) {
            g = t.log_lower - target;
            dg = std::exp(log_density - t.log_lower);
        } else {
            g = target - t.log_upper;
            dg = std::exp(log_density - t.log_upper);
        }
    };

    constexpr double z_limit = 2.0e4;
    double lo = -z_limit;
    double hi = z_limit;
    double z = std::clamp(initial_logit(p, q, a, b, lbeta), lo, hi);
    for (int iter = 0; iter < 200; ++iter) {
        double g = 0.0;
        double dg = 0.0;
        eval(z, g, dg);
        if (g == 0.0) break;
        if (g < 0.0) lo = std::max(lo, z);
        else hi = std::min(hi, z);
        double z_new = z - g / dg;
        if (!std::isfinite(z_new) || z_new <= lo || z_new >= hi) z_new = 0.5 * (lo + hi);
        const double dz = std::fabs(z_new - z);
        z = z_new;
        if (dz <= 4.0 * kEps * std::max(1.0, std::fabs(z)) || hi - lo <= 4.0 * kEps * std::max(1.0, std::fabs(z))) {
            break;
        }
    }
    return z;
}

double inv_inc_beta(double p, BetaShape s) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("inv_inc_beta: probability outside [0,1]");
    return inv_inc_beta_pair(p, 1.0 - p, s).x;
}

double d_inv_inc_beta_dshape_at(UnitPair root, BetaShape s) {
    check_shape(s, "d_inv_inc_beta_dshape");
    if (!(root.x > 0.0) || !(root.y > 0.0)) {
        throw DomainError("d_inv_inc_beta_dshape: root must lie strictly inside (0,1)");
    }
    const double lx = root.x <= root.y ? std::log(root.x) : std::log1p(-root.y);
    const double ly = root.x <= root.y ? std::log1p(-root.x) : std::log(root.y);
    const double h = s.n * 1e-5;
    const auto tails_at = [&](double n) { return tails_impl(root.x, root.y, lx, ly, s.m, n, log_beta(s.m, n)); };
    const BetaTails centre = tails_at(s.n);
    const BetaTails up = tails_at(s.n + h);
    const BetaTails down = tails_at(s.n - h);
    // Difference whichever tail is small, so the quotient keeps relative precision.
    const double di_dn = centre.lower <= centre.upper ? (up.lower - down.lower) / (2.0 * h)
                                                      : -(up.upper - down.upper) / (2.0 * h);
    const double log_density = (s.m - 1.0) * lx + (s.n - 1.0) * ly - log_beta(s.m, s.n);
    return -di_dn / std::exp(log_density);
}

double d_inv_inc_beta_logit_dshape(double z, BetaShape s) {
    check_shape(s, "d_inv_inc_beta_dshape");
    if (!std::isfinite(z)) throw DomainError("d_inv_inc_beta_logit_dshape: logit must be finite");
    const UnitPair xy = logistic(z);
    const double lx = -softplus(-z);
    const double ly = -softplus(z);
    const double h = s.n * 1e-5;
    const auto tails_at = [&](double n) { return tails_impl(xy.x, xy.y, lx, ly, s.m, n, log_beta(s.m, n)); };
    const BetaTails centre = tails_at(s.n);
    const BetaTails up = tails_at(s.n + h);
    const BetaTails down = tails_at(s.n - h);
    // dz/dn = -(dI/dn) / (dI/dz), both taken relative to the smaller tail
    const double log_dens_z = s.m * lx + s.n * ly - log_beta(s.m, s.n);
    if (centre.lower <= centre.upper) {
        const double dlog = (up.log_lower - down.log_lower) / (2.0 * h);
        return -std::exp(centre.log_lower - log_dens_z) * dlog;
    }
    const double dlog = (up.log_upper - down.log_upper) / (2.0 * h);
    return std::exp(centre.log_upper - log_dens_z) * dlog;
}

double d_inv_inc_beta_dshape(double p, double n) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("d_inv_inc_beta_dshape: p must lie in (0,1)");
    const BetaShape s{0.5, n};
    return d_inv_inc_beta_dshape_at(inv_inc_beta_pair(p, 1.0 - p, s), s);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p must lie in (0,1)");
    return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

}  // namespace mglcop::specfun
