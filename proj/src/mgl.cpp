#include "mglcop/mgl.hpp"

#include "mglcop/rng.hpp"
#include "mglcop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mglcop {
namespace {

namespace sf = specfun;

// log(1 + sum exp(v_k)) without overflow
double log1p_sum_exp(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    double s = std::exp(-m);
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

}  // namespace

void validate(const MglParams& p) {
    if (p.sigma.empty()) throw DimensionError("MGL parameters need at least one coordinate");
    if (p.sigma.size() != p.b.size()) throw DimensionError("MGL parameters: sigma and b differ in length");
    if (!(p.a > 0.0) || !std::isfinite(p.a)) throw DomainError("MGL parameter a must be positive");
    for (std::size_t j = 0; j < p.dim(); ++j) {
        if (!(p.sigma[j] > 0.0) || !(p.b[j] > 0.0) || !std::isfinite(p.sigma[j]) || !std::isfinite(p.b[j])) {
            throw DomainError("MGL parameters sigma_j and b_j must be positive");
        }
    }
}

double mgl_log_pdf(const std::vector<double>& y, const MglParams& p) {
    validate(p);
    const std::size_t d = p.dim();
    if (y.size() != d) throw DimensionError("mgl_pdf: point has " + std::to_string(y.size()) + " coordinates, expected " +
                                            std::to_string(d));
    std::vector<double> ls(d);
    double out = sf::log_gamma(p.a + 0.5 * d) - sf::log_gamma(p.a) - 0.5 * d * std::log(M_PI);
    for (std::size_t j = 0; j < d; ++j) {
        if (!(y[j] > 0.0)) throw DomainError("mgl_pdf: coordinates must be positive");
        const double ly = std::log(y[j]);
        // ((2 b_j)^{sigma_j} y_j)^{-1/sigma_j}
        ls[j] = -ly / p.sigma[j] - std::log(2.0 * p.b[j]);
        out += 0.5 * ls[j] - std::log(p.sigma[j]) - ly;
    }
    return out - (p.a + 0.5 * d) * log1p_sum_exp(ls);
}

double mgl_pdf(const std::vector<double>& y, const MglParams& p) {
    return std::exp(mgl_log_pdf(y, p));
}

MglMoments mgl_moments(const MglParams& p) {
    validate(p);
    const std::size_t d = p.dim();
    for (double s : p.sigma) {
        if (!(s < 0.25)) throw MomentUndefinedError("MGL covariance requires max sigma_j < 1/4");
    }
    MglMoments m;
    m.mean.resize(d);
    m.cov.resize(d, d);
    m.corr.resize(d, d);
    for (std::size_t j = 0; j < d; ++j) m.mean[j] = glmga_mean(p.margin(j));
    const double a = p.a;
    const double lga = sf::log_gamma(a);
    // Var/E^2 + 1 and Cov/(E E') + 1 as log ratios; expm1 keeps the a -> inf limit accurate.
    std::vector<double> rel_var(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double s = p.sigma[j];
        const double lr = sf::log_gamma(a + 2 * s) + lga - 2 * sf::log_gamma(a + s) + sf::log_gamma(0.5 - 2 * s) +
                          sf::log_gamma(0.5) - 2 * sf::log_gamma(0.5 - s);
        rel_var[j] = std::expm1(lr);
    }
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t k = 0; k < d; ++k) {
            double rel = 0.0;
            if (j == k) {
                rel = rel_var[j];
            } else {
                const double sj = p.sigma[j], sk = p.sigma[k];
                rel = std::expm1(sf::log_gamma(a + sj + sk) + lga - sf::log_gamma(a + sj) - sf::log_gamma(a + sk));
            }
            m.cov(j, k) = m.mean[j] * m.mean[k] * rel;
            m.corr(j, k) = j == k ? 1.0 : rel / std::sqrt(rel_var[j] * rel_var[k]);
        }
    }
    return m;
}

MglParams mgl_conditional(const MglParams& p, const std::vector<std::size_t>& observed,
                          const std::vector<double>& values) {
    validate(p);
    const std::size_t d = p.dim();
    if (observed.size() != values.size()) throw DimensionError("mgl_conditional: index and value lists differ in length");
    std::vector<bool> is_obs(d, false);
    std::vector<double> ls;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const std::size_t k = observed[i];
        if (k >= d) throw DimensionError("mgl_conditional: index out of range");
        if (is_obs[k]) throw DimensionError("mgl_conditional: repeated index");
        if (!(values[i] > 0.0)) throw DomainError("mgl_conditional: observed values must be positive");
        is_obs[k] = true;
        ls.push_back(-std::log(values[i]) / p.sigma[k] - std::log(2.0 * p.b[k]));
    }
    if (observed.size() >= d) throw DimensionError("mgl_conditional: observed set must be a proper subset");
    const double shift = log1p_sum_exp(ls);
    MglParams out;
    out.a = p.a + 0.5 * observed.size();
    for (std::size_t j = 0; j < d; ++j) {
        if (is_obs[j]) continue;
        out.sigma.push_back(p.sigma[j]);
        out.b.push_back(p.b[j] * std::exp(shift));
    }
    return out;
}

Eigen::MatrixXd mgl_sample(const MglParams& p, std::size_t n, std::uint64_t seed) {
    validate(p);
    if (n < 1) throw ValidationError("mgl_sample: n must be at least 1");
    const std::size_t d = p.dim();
    Rng rng(seed);
    Eigen::MatrixXd out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        // L = log(1 + sum_{k<j} y_k^{-1/sigma_k} / (2 b_k)), so that b*_j = b_j e^L
        double big_l = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double u = rng.uniform();
            const sf::UnitPair w = sf::inv_inc_beta_pair(1.0 - u, u, {0.5, p.a + 0.5 * j});
            const double log_t = std::log(w.x) - std::log(w.y);
            out(i, j) = std::exp(-p.sigma[j] * (std::log(2.0 * p.b[j]) + big_l + log_t));
            big_l -= std::log(w.y);  // log(1 + t) = -log(1 - w)
        }
    }
    return out;
}

Eigen::MatrixXd mgl_sample_mixture(const MglParams& p, std::size_t n, std::uint64_t seed) {
    validate(p);
    const std::size_t d = p.dim();
    Rng rng(seed);
    Eigen::MatrixXd out(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = rng.gamma(p.a, 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            const double g = rng.gamma(0.5, 1.0);
            out(i, j) = std::exp(p.sigma[j] * (std::log(theta / p.b[j]) - std::log(2.0 * g)));
        }
    }
    return out;
}

}  // namespace mglcop
