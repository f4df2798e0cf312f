#include "mglcop/copula.hpp"

#include "mglcop/errors.hpp"
#include "mglcop/quadrature.hpp"
#include "mglcop/rng.hpp"
#include "mglcop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mglcop::copula {
namespace {

namespace sf = specfun;

constexpr double kInf = std::numeric_limits<double>::infinity();

double shape_of(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("copula parameter delta must be positive and finite");
    return 1.0 / delta;
}

double softplus(double v) {
    return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
}

// log(1 + sum exp(v_k))
double log1p_sum_exp(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    if (m == 0.0) {
        double s = 0.0;
        for (double x : v) s += std::exp(x);
        return std::log1p(s);
    }
    double s = std::exp(-m);
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// log t at a clamped argument u, i.e. the logit of I^{-1}_{1/2,a}(1 - u).
double log_t_mgl(double u, double a) {
    const double c = clamp_unit(u);
    return sf::inv_inc_beta_logit(1.0 - c, c, {0.5, a});
}

// log t(1 - u) for the survival copula, without forming 1 - u.
double log_t_surv(double u, double a) {
    const double c = clamp_unit(u);
    return sf::inv_inc_beta_logit(c, 1.0 - c, {0.5, a});
}

double log_density_from_log_t(const std::vector<double>& lt, double a) {
    const double d = static_cast<double>(lt.size());
    double out = sf::log_gamma_ratio(a, 0.5 * d) - d * sf::log_gamma_ratio(a, 0.5);
    for (double z : lt) out += (a + 0.5) * softplus(z);
    return out - (a + 0.5 * d) * log1p_sum_exp(lt);
}

// E[prod_j erfc(sqrt(t_j Theta))], Theta ~ Gamma(a, 1), integrated over y = log Theta.
double cdf_from_log_t(const std::vector<double>& lt, double a) {
    if (lt.empty()) return 1.0;
    const double lga = sf::log_gamma(a);
    const double y_lo = (sf::log_gamma(a + 1.0) + std::log(1e-18)) / a;
    double lt_min = kInf;
    for (double z : lt) lt_min = std::min(lt_min, z);
    const double y_hi = std::min(std::log(a + 12.0 * std::sqrt(a) + 45.0), std::log(44.0) - lt_min);
    if (!(y_hi > y_lo)) return 0.0;
    auto integrand = [&](double y) {
        double prod = 1.0;
        for (double z : lt) {
            prod *= std::erfc(std::exp(0.5 * (z + y)));
            if (prod == 0.0) return 0.0;
        }
        return prod * std::exp(a * y - std::exp(y) - lga);
    };
    const double mode = std::log(a);
    const double sd = 1.0 / std::sqrt(a);
    std::vector<double> breaks{mode - 8.0 * sd, mode - 3.0 * sd, mode, mode + 3.0 * sd, mode + 8.0 * sd};
    for (double z : lt) breaks.push_back(-z);
    const quad::Result r = quad::adaptive(integrand, y_lo, y_hi, breaks, 1e-12, 1e-8);
    return std::clamp(r.value, 0.0, 1.0);
}

void check_unit(const std::vector<double>& u, const char* fn) {
    if (u.empty()) throw DimensionError(std::string(fn) + ": empty argument");
    for (double v : u) {
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(fn) + ": argument outside [0,1]");
    }
}

// Gaussian-Legendre nodes on (0,1) graded toward both ends.
struct GradedGrid {
    std::vector<double> u;
    std::vector<double> w;
};

GradedGrid graded_grid(int n) {
    const quad::Rule r = quad::gauss_legendre(n, 0.0, 1.0);
    GradedGrid g;
    for (int i = 0; i < n; ++i) {
        const double x = r.nodes[i];
        g.u.push_back(x * x * x * (10.0 - 15.0 * x + 6.0 * x * x));
        g.w.push_back(r.weights[i] * 30.0 * x * x * (1.0 - x) * (1.0 - x));
    }
    return g;
}

struct RankIntegrals {
    double tau;
    double rho;
};

RankIntegrals rank_integrals(double a, int n) {
    const GradedGrid g = graded_grid(n);
    std::vector<double> lt(n), sp(n);
    for (int i = 0; i < n; ++i) {
        lt[i] = log_t_mgl(g.u[i], a);
        sp[i] = softplus(lt[i]);
    }
    const sf::BetaShape s{0.5, a + 0.5};
    double hh = 0.0;
    double uh = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double h21 = sf::inc_beta_tails_logit(lt[j] - sp[i], s).upper;  // h(v_j | u_i)
            const double h12 = sf::inc_beta_tails_logit(lt[i] - sp[j], s).upper;  // h(u_i | v_j)
            const double w = g.w[i] * g.w[j];
            hh += w * h21 * h12;
            uh += w * h21 * g.u[i];
        }
    }
    return {1.0 - 4.0 * hh, 3.0 - 12.0 * uh};
}

RankIntegrals rank_integrals_checked(double delta) {
    const double a = shape_of(delta);
    RankIntegrals coarse = rank_integrals(a, 64);
    for (int n = 128; n <= 512; n *= 2) {
        const RankIntegrals fine = rank_integrals(a, n);
        if (std::fabs(fine.tau - coarse.tau) < 1e-7 && std::fabs(fine.rho - coarse.rho) < 1e-7) return fine;
        coarse = fine;
    }
    throw QuadratureError("rank correlation quadrature did not settle under node doubling");
}

}  // namespace

double clamp_unit(double u) {
    if (std::isnan(u)) throw DomainError("copula argument is NaN");
    return std::clamp(u, kClampLo, kClampHi);
}

double log_t_fn(double u, double delta) {
    return log_t_mgl(u, shape_of(delta));
}

double t_fn(double u, double delta) {
    return std::exp(log_t_fn(u, delta));
}

double mgl_cdf(const std::vector<double>& u, double delta) {
    const double a = shape_of(delta);
    check_unit(u, "mgl_cdf");
    std::vector<double> lt;
    for (double v : u) {
        if (v <= 0.0) return 0.0;
        if (v >= 1.0) continue;
        lt.push_back(log_t_mgl(v, a));
    }
    if (lt.size() == 1) {
        for (double v : u) {
            if (v < 1.0) return v;
        }
    }
    return cdf_from_log_t(lt, a);
}

double mgl_log_pdf(const std::vector<double>& u, double delta) {
    const double a = shape_of(delta);
    check_unit(u, "mgl_pdf");
    std::vector<double> lt;
    for (double v : u) lt.push_back(log_t_mgl(v, a));
    return log_density_from_log_t(lt, a);
}

double mgl_pdf(const std::vector<double>& u, double delta) {
    return std::exp(mgl_log_pdf(u, delta));
}

double surv_mgl_log_pdf(const std::vector<double>& u, double delta) {
    const double a = shape_of(delta);
    check_unit(u, "surv_mgl_pdf");
    std::vector<double> lt;
    for (double v : u) lt.push_back(log_t_surv(v, a));
    return log_density_from_log_t(lt, a);
}

double surv_mgl_pdf(const std::vector<double>& u, double delta) {
    return std::exp(surv_mgl_log_pdf(u, delta));
}

double surv_mgl_cdf(const std::vector<double>& u, double delta) {
    const double a = shape_of(delta);
    check_unit(u, "surv_mgl_cdf");
    const std::size_t d = u.size();
    if (d > 6) throw DimensionError("surv_mgl_cdf: inclusion-exclusion is limited to d <= 6");
    // P(U_j >= 1 - u_j for all j), U ~ MGL copula
    double total = 0.0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        std::vector<double> lt;
        bool zero = false;
        for (std::size_t j = 0; j < d; ++j) {
            if (!(mask & (1u << j))) continue;
            // C evaluated at 1 - u_j in coordinate j
            if (u[j] >= 1.0) {
                zero = true;
                break;
            }
            if (u[j] <= 0.0) continue;
            lt.push_back(log_t_surv(u[j], a));
        }
        if (zero) continue;
        double c = 0.0;
        if (lt.size() == 1) {
            for (std::size_t j = 0; j < d; ++j) {
                if ((mask & (1u << j)) && u[j] > 0.0) c = 1.0 - u[j];
            }
        } else {
            c = cdf_from_log_t(lt, a);
        }
        total += (__builtin_popcount(mask) % 2 ? -c : c);
    }
    return std::clamp(total, 0.0, 1.0);
}

double mgb2_log_pdf(const std::vector<double>& u, const std::vector<double>& p, double q) {
    check_unit(u, "mgb2_pdf");
    if (u.size() != p.size()) throw DimensionError("mgb2_pdf: argument and shape vectors differ in length");
    if (!(q > 0.0)) throw DomainError("mgb2_pdf: q must be positive");
    const double d = static_cast<double>(u.size());
    double psum = 0.0;
    double out = 0.0;
    std::vector<double> lx;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!(p[i] > 0.0)) throw DomainError("mgb2_pdf: shapes must be positive");
        const double c = clamp_unit(u[i]);
        const double z = sf::inv_inc_beta_logit(c, 1.0 - c, {p[i], q});
        lx.push_back(z);
        psum += p[i];
        out += (p[i] + q) * softplus(z) - sf::log_gamma_ratio(q, p[i]);
    }
    return out + sf::log_gamma_ratio(q, psum) - (psum + q) * log1p_sum_exp(lx);
}

double mgb2_pdf(const std::vector<double>& u, const std::vector<double>& p, double q) {
    return std::exp(mgb2_log_pdf(u, p, q));
}

double h_forward(double u_target, double u_given, double delta, Direction) {
    const double a = shape_of(delta);
    const double lv = log_t_mgl(u_target, a);
    const double lu = log_t_mgl(u_given, a);
    // x = t_v / (t_u + t_v + 1), logit x = log t_v - log(1 + t_u)
    return sf::inc_beta_tails_logit(lv - softplus(lu), {0.5, a + 0.5}).upper;
}

double h_inverse(double w, double u_given, double delta, Direction) {
    const double a = shape_of(delta);
    const double cw = clamp_unit(w);
    const double lu = log_t_mgl(u_given, a);
    const double lw = sf::inv_inc_beta_logit(1.0 - cw, cw, {0.5, a + 0.5});  // t(w; a + 1/2)
    return sf::inc_beta_tails_logit(softplus(lu) + lw, {0.5, a}).upper;
}

double surv_h_forward(double u_target, double u_given, double delta, Direction) {
    const double a = shape_of(delta);
    const double lv = log_t_surv(u_target, a);
    const double lu = log_t_surv(u_given, a);
    return sf::inc_beta_tails_logit(lv - softplus(lu), {0.5, a + 0.5}).lower;
}

double surv_h_inverse(double w, double u_given, double delta, Direction) {
    const double a = shape_of(delta);
    const double cw = clamp_unit(w);
    const double lu = log_t_surv(u_given, a);
    const double lw = sf::inv_inc_beta_logit(cw, 1.0 - cw, {0.5, a + 0.5});  // t(1 - w; a + 1/2)
    return sf::inc_beta_tails_logit(softplus(lu) + lw, {0.5, a}).lower;
}

namespace {
void sample_row(Rng& rng, double a, int d, bool survival, Eigen::MatrixXd& out, Eigen::Index i) {
    double big_l = 0.0;  // log(1 + sum_{k<j} M_k)
    for (int j = 0; j < d; ++j) {
        const double u = rng.uniform();
        const double log_z = sf::inv_inc_beta_logit(1.0 - u, u, {0.5, a + 0.5 * j});
        const double log_m = big_l + log_z;
        const sf::BetaTails tails = sf::inc_beta_tails_logit(log_m, {0.5, a});
        out(i, j) = survival ? tails.lower : tails.upper;
        big_l += softplus(log_z);
    }
}
}  // namespace

PseudoSample sample_mgl_copula(double delta, int d, std::size_t n, std::uint64_t seed, bool survival) {
    const double a = shape_of(delta);
    if (d < 2) throw DimensionError("sample_mgl_copula: d must be at least 2");
    if (n < 1) throw ValidationError("sample_mgl_copula: n must be at least 1");
    Rng rng(seed);
    PseudoSample out;
    out.method = PseudoMethod::parametric;
    out.values.resize(static_cast<Eigen::Index>(n), d);
    for (std::size_t i = 0; i < n; ++i) sample_row(rng, a, d, survival, out.values, static_cast<Eigen::Index>(i));
    return out;
}

PseudoSample sample_mgl_copula(const std::vector<double>& delta, int d, std::uint64_t seed, bool survival) {
    if (d < 2) throw DimensionError("sample_mgl_copula: d must be at least 2");
    if (delta.empty()) throw ValidationError("sample_mgl_copula: need at least one row");
    Rng rng(seed);
    PseudoSample out;
    out.method = PseudoMethod::parametric;
    out.values.resize(static_cast<Eigen::Index>(delta.size()), d);
    for (std::size_t i = 0; i < delta.size(); ++i)
        sample_row(rng, shape_of(delta[i]), d, survival, out.values, static_cast<Eigen::Index>(i));
    return out;
}

double kendall_tau(double delta) {
    return rank_integrals_checked(delta).tau;
}

double spearman_rho(double delta) {
    return rank_integrals_checked(delta).rho;
}

TailDependence tail_dependence(double delta) {
    const double a = shape_of(delta);
    // 2 - 2 I_{1/2, a+1/2}(1/2), taken from the upper tail
    return {2.0 * sf::inc_beta_tails(0.5, 0.5, {0.5, a + 0.5}).upper, 0.0};
}

TailDependence surv_tail_dependence(double delta) {
    const TailDependence t = tail_dependence(delta);
    return {t.upper, t.lower};
}

namespace {
void check_gumbel(double delta) {
    if (!(delta >= 1.0) || !std::isfinite(delta)) throw DomainError("Gumbel copula needs delta >= 1");
}
}  // namespace

double gumbel_cdf(double u1, double u2, double delta) {
    check_gumbel(delta);
    if (u1 <= 0.0 || u2 <= 0.0) return 0.0;
    const double x = -std::log(std::min(u1, 1.0));
    const double y = -std::log(std::min(u2, 1.0));
    return std::exp(-std::pow(std::pow(x, delta) + std::pow(y, delta), 1.0 / delta));
}

double gumbel_log_pdf(double u1, double u2, double delta) {
    check_gumbel(delta);
    const double c1 = clamp_unit(u1);
    const double c2 = clamp_unit(u2);
    const double x = -std::log(c1);
    const double y = -std::log(c2);
    const double lx = std::log(x), ly = std::log(y);
    // log A with A = x^delta + y^delta
    const double la = std::max(delta * lx, delta * ly) + std::log1p(std::exp(-std::fabs(delta * (lx - ly))));
    const double m = std::exp(la / delta);
    return -m + x + y + (delta - 1.0) * (lx + ly) + (1.0 / delta - 2.0) * la + std::log(m + delta - 1.0);
}

double gumbel_pdf(double u1, double u2, double delta) {
    return std::exp(gumbel_log_pdf(u1, u2, delta));
}

double gumbel_h(double u_target, double u_given, double delta) {
    check_gumbel(delta);
    const double cv = clamp_unit(u_target);
    const double cu = clamp_unit(u_given);
    const double x = -std::log(cu);
    const double y = -std::log(cv);
    const double lx = std::log(x), ly = std::log(y);
    const double la = std::max(delta * lx, delta * ly) + std::log1p(std::exp(-std::fabs(delta * (lx - ly))));
    const double m = std::exp(la / delta);
    // dC/du = C / u * x^{delta-1} A^{1/delta - 1}
    return std::exp(-m + x + (delta - 1.0) * lx + (1.0 / delta - 1.0) * la);
}

}  // namespace mglcop::copula
