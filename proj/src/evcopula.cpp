#include "mglcop/evcopula.hpp"

#include "mglcop/copula.hpp"
#include "mglcop/errors.hpp"
#include "mglcop/quadrature.hpp"
#include "mglcop/rng.hpp"
#include "mglcop/specfun.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mglcop::ev {

namespace sf = mglcop::specfun;

namespace {

double shape_of(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive and finite");
    return 1.0 / delta;
}

sf::BetaShape tail_shape(double delta) {
    return {0.5, shape_of(delta) + 0.5};
}

// Terms of l(z1, z2) = z1 I(x2) + z2 I(x1), x2 = 1 / (1 + (z2/z1)^delta),
// with the logit of x2 passed around instead of x2.
struct Terms {
    sf::BetaTails i2;  // I(x2) and 1 - I(x2)
    sf::BetaTails i1;
    double log_x1x2_f;  // log(x1 x2 f(x2)), f the beta density
};

Terms terms(double z1, double z2, double delta) {
    const sf::BetaShape s = tail_shape(delta);
    const double logit_x2 = -delta * (std::log(z2) - std::log(z1));
    Terms t;
    t.i2 = sf::inc_beta_tails_logit(logit_x2, s);
    t.i1 = sf::inc_beta_tails_logit(-logit_x2, s);
    // log x2 + log x1 = -softplus(z) - softplus(-z)
    const double ax = std::fabs(logit_x2);
    const double log_x1x2 = -ax - 2.0 * std::log1p(std::exp(-ax));
    const double log_x2 = -(std::max(-logit_x2, 0.0) + std::log1p(std::exp(-ax)));
    const double log_x1 = log_x1x2 - log_x2;
    const double log_f = (s.m - 1.0) * log_x2 + (s.n - 1.0) * log_x1 - sf::log_beta(s.m, s.n);
    t.log_x1x2_f = log_f + log_x1x2;
    return t;
}

double mixture_l(const std::vector<double>& u, double delta) {
    const double a = shape_of(delta);
    // l(u) = int x^{a-1} [1 - prod erf(sqrt(x c_j))] dx / int x^{a-1} erfc(sqrt(x)) dx,
    // c_j = u_j^{-delta}; coordinates at zero never trigger and drop out.
    std::vector<double> log_c;
    double single = 0.0;
    for (double v : u) {
        if (v > 0.0) {
            log_c.push_back(-delta * std::log(v));
            single = v;
        }
    }
    if (log_c.size() <= 1) return single;
    const auto [lo_it, hi_it] = std::minmax_element(log_c.begin(), log_c.end());
    const double log_c_min = *lo_it, log_c_max = *hi_it;
    // below y_lo every erf factor is < 1e-15, above y_hi every erfc is negligible
    const double y_lo = std::log(1e-30) - log_c_max;
    const double y_hi = std::log(60.0) - log_c_min;
    auto integrand = [&](double y) {
        double log_p = 0.0;
        for (double lc : log_c) {
            const double e = std::erfc(std::exp(0.5 * (y + lc)));
            log_p += std::log1p(-e);
        }
        return std::exp(a * y) * -std::expm1(log_p);
    };
    std::vector<double> breaks;
    for (double lc : log_c) breaks.push_back(-lc);
    std::sort(breaks.begin(), breaks.end());
    const double body = quad::adaptive(integrand, y_lo, y_hi, breaks, 1e-13, 0.0).value;
    const double head = std::exp(a * y_lo) / a;
    const double log_norm = std::lgamma(a + 0.5) - std::log(a) - 0.5 * std::log(M_PI);
    return (head + body) * std::exp(-log_norm);
}

}  // namespace

double pickands_A(double w, double delta) {
    shape_of(delta);
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError("pickands_A: w must lie in [0,1]");
    if (w == 0.0 || w == 1.0) return 1.0;
    const Terms t = terms(w, 1.0 - w, delta);
    return w * t.i2.lower + (1.0 - w) * t.i1.lower;
}

TailGradient stable_tail_l_derivs(double z1, double z2, double delta) {
    shape_of(delta);
    if (z1 < 0.0 || z2 < 0.0) throw DomainError("stable tail function needs nonnegative arguments");
    if (z1 == 0.0 || z2 == 0.0) return {z1 + z2, z2 == 0.0 ? 1.0 : 0.0, z1 == 0.0 ? 1.0 : 0.0, 0.0};
    const Terms t = terms(z1, z2, delta);
    TailGradient g;
    g.l = z1 * t.i2.lower + z2 * t.i1.lower;
    g.d1 = t.i2.lower;
    g.d2 = t.i1.lower;
    g.d12 = -delta * std::exp(t.log_x1x2_f) / z2;
    return g;
}

double stable_tail_l(const std::vector<double>& u, double delta) {
    shape_of(delta);
    for (double v : u)
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("stable tail function needs finite nonnegative arguments");
    if (u.size() == 2) return stable_tail_l_derivs(u[0], u[1], delta).l;
    return mixture_l(u, delta);
}

double ev_cdf(double u1, double u2, double delta) {
    shape_of(delta);
    if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
    const double z1 = -std::log(std::min(u1, 1.0));
    const double z2 = -std::log(std::min(u2, 1.0));
    return std::exp(-stable_tail_l_derivs(z1, z2, delta).l);
}

double ev_log_pdf(double u1, double u2, double delta) {
    const double z1 = -std::log(copula::clamp_unit(u1));
    const double z2 = -std::log(copula::clamp_unit(u2));
    const TailGradient g = stable_tail_l_derivs(z1, z2, delta);
    return -g.l + z1 + z2 + std::log(g.d1 * g.d2 - g.d12);
}

double ev_pdf(double u1, double u2, double delta) {
    return std::exp(ev_log_pdf(u1, u2, delta));
}

double ev_h(double u_target, double u_given, double delta) {
    shape_of(delta);
    if (u_target <= 0.0) return 0.0;
    if (u_target >= 1.0) return 1.0;
    const double z1 = -std::log(copula::clamp_unit(u_given));
    const double z2 = -std::log(u_target);
    const TailGradient g = stable_tail_l_derivs(z1, z2, delta);
    return std::exp(-g.l + z1) * g.d1;
}

double ev_h_inverse(double w, double u_given, double delta) {
    shape_of(delta);
    if (!(w > 0.0 && w < 1.0)) throw DomainError("ev_h_inverse: w must lie in (0,1)");
    // Newton on v with dh/dv = c(u, v), kept inside the bisection bracket
    const double z1 = -std::log(copula::clamp_unit(u_given));
    auto f = [&](double v) {
        const double z2 = -std::log(v);
        const TailGradient g = stable_tail_l_derivs(z1, z2, delta);
        const double c0 = std::exp(-g.l + z1);
        return std::make_pair(c0 * g.d1 - w, c0 / v * (g.d1 * g.d2 - g.d12));
    };
    boost::uintmax_t iters = 200;
    const double v = boost::math::tools::newton_raphson_iterate(f, w, 1e-300, 1.0, 40, iters);
    if (iters >= 200 || !(std::fabs(f(v).first) < 1e-9)) throw NumericalError("ev_h_inverse: root bracketing did not converge");
    return v;
}

double ev_lower_copula(double u1, double u2, double delta) {
    if (u1 < 0.0 || u2 < 0.0) throw DomainError("ev_lower_copula needs nonnegative arguments");
    const double denom = 2.0 * (1.0 - pickands_A(0.5, delta));
    if (!(denom > 0.0)) throw NumericalError("ev_lower_copula: A(1/2) = 1, the limit is degenerate");
    const double s = u1 + u2;
    if (s == 0.0) return 0.0;
    return s * (1.0 - pickands_A(u1 / s, delta)) / denom;
}

PseudoSample sample_ev(double delta, std::size_t n, std::uint64_t seed) {
    shape_of(delta);
    if (n < 1) throw ValidationError("sample_ev: n must be at least 1");
    Rng rng(seed);
    PseudoSample out;
    out.method = PseudoMethod::parametric;
    out.values.resize(static_cast<Eigen::Index>(n), 2);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const double w = rng.uniform();
        out.values(static_cast<Eigen::Index>(i), 0) = u;
        out.values(static_cast<Eigen::Index>(i), 1) = ev_h_inverse(w, u, delta);
    }
    return out;
}

}  // namespace mglcop::ev
