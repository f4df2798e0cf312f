#include "mglcop/margins.hpp"

#include "mglcop/errors.hpp"
#include "mglcop/optim.hpp"
#include "mglcop/parallel.hpp"
#include "mglcop/rng.hpp"
#include "mglcop/specfun.hpp"
#include "mglcop/stats.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numeric>

namespace mglcop::margins {

namespace sf = mglcop::specfun;

PseudoSample rank_pseudo_obs(const Eigen::MatrixXd& data) {
    const Eigen::Index n = data.rows();
    if (n < 2) throw ValidationError("rank_pseudo_obs: need at least 2 rows");
    PseudoSample out;
    out.method = PseudoMethod::rank;
    out.values.resize(n, data.cols());
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return data(a, j) < data(b, j); });
        for (Eigen::Index i = 0; i < n;) {
            Eigen::Index k = i;
            while (k + 1 < n && data(order[k + 1], j) == data(order[i], j)) ++k;
            const double rank = 0.5 * static_cast<double>(i + k) + 1.0;
            for (Eigen::Index m = i; m <= k; ++m) out.values(order[m], j) = rank / static_cast<double>(n + 1);
            i = k + 1;
        }
    }
    return out;
}

PseudoSample kernel_pseudo_obs(const Eigen::MatrixXd& data, double bandwidth) {
    if (!(bandwidth > 0.0)) throw ValidationError("kernel_pseudo_obs: bandwidth must be positive");
    const Eigen::Index n = data.rows();
    if (n < 2) throw ValidationError("kernel_pseudo_obs: need at least 2 rows");
    PseudoSample out;
    out.method = PseudoMethod::kernel;
    out.values.resize(n, data.cols());
    for (Eigen::Index j = 0; j < data.cols(); ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            double s = 0.0;
            for (Eigen::Index k = 0; k < n; ++k) s += sf::normal_cdf((data(i, j) - data(k, j)) / bandwidth);
            out.values(i, j) = s / static_cast<double>(n);
        }
    }
    return out;
}

namespace {

void check_count(const CountPart& c) {
    if (!(c.lambda > 0.0) || !(c.phi > 0.0) || !std::isfinite(c.lambda) || !std::isfinite(c.phi))
        throw DomainError("negative binomial needs lambda > 0 and phi > 0");
}

void check_tail(const TailPart& t) {
    if (!(t.shape > 0.0) || !(t.scale > 0.0) || !std::isfinite(t.mu)) throw DomainError("GP needs shape > 0 and scale > 0");
}

// log of sum_{y<=u} pmf(y)
double log_norm_const(int u, const CountPart& c) {
    double m = -INFINITY;
    std::vector<double> lp(static_cast<std::size_t>(u) + 1);
    for (int y = 0; y <= u; ++y) {
        lp[y] = nb_log_pmf(y, c);
        m = std::max(m, lp[y]);
    }
    double s = 0.0;
    for (double v : lp) s += std::exp(v - m);
    return m + std::log(s);
}

bool is_count(double y) {
    return y >= 0.0 && std::floor(y) == y;
}

}  // namespace

double nb_log_pmf(int y, const CountPart& c) {
    check_count(c);
    if (y < 0) return -INFINITY;
    const double r = c.variance == NbVariance::quadratic ? 1.0 / c.phi : c.lambda / c.phi;
    const double log_rl = std::log(r + c.lambda);
    return std::lgamma(y + r) - std::lgamma(r) - std::lgamma(y + 1.0) + r * (std::log(r) - log_rl) +
           y * (std::log(c.lambda) - log_rl);
}

double truncated_nb_pmf(int y, int u, const CountPart& c) {
    if (y < 0 || y > u) return 0.0;
    return std::exp(nb_log_pmf(y, c) - log_norm_const(u, c));
}

double truncated_nb_cdf(double y, int u, const CountPart& c) {
    if (y < 0.0) return 0.0;
    if (y >= u) return 1.0;
    const int k = static_cast<int>(std::floor(y));
    const double lz = log_norm_const(u, c);
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += std::exp(nb_log_pmf(j, c) - lz);
    return std::min(s, 1.0);
}

double gp_pdf(double y, const TailPart& t) {
    check_tail(t);
    if (y < t.mu) return 0.0;
    const double z = (y - t.mu) / t.scale;
    return std::exp(-std::log(t.scale) - (1.0 + 1.0 / t.shape) * std::log1p(t.shape * z));
}

double gp_cdf(double y, const TailPart& t) {
    check_tail(t);
    if (y <= t.mu) return 0.0;
    const double z = (y - t.mu) / t.scale;
    return -std::expm1(-std::log1p(t.shape * z) / t.shape);
}

double gp_quantile(double p, const TailPart& t) {
    check_tail(t);
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("gp_quantile: p must lie in [0,1)");
    return t.mu + t.scale * std::expm1(-t.shape * std::log1p(-p)) / t.shape;
}

void validate(const SplicedMargin& m) {
    if (!(m.w > 0.0 && m.w < 1.0)) throw DomainError("spliced margin needs w in (0,1)");
    if (m.u < 0) throw DomainError("spliced margin needs a nonnegative threshold");
    check_count(m.count);
    check_tail(m.tail);
}

double spliced_pdf(double y, const SplicedMargin& m) {
    validate(m);
    if (y < 0.0) return 0.0;
    if (y <= m.u) return is_count(y) ? m.w * truncated_nb_pmf(static_cast<int>(y), m.u, m.count) : 0.0;
    return (1.0 - m.w) * gp_pdf(y, m.tail);
}

double spliced_cdf(double y, const SplicedMargin& m) {
    validate(m);
    if (y < 0.0) return 0.0;
    if (y <= m.u) return m.w * truncated_nb_cdf(y, m.u, m.count);
    return m.w + (1.0 - m.w) * gp_cdf(y, m.tail);
}

double spliced_quantile(double p, const SplicedMargin& m) {
    validate(m);
    if (!(p >= 0.0 && p < 1.0)) throw DomainError("spliced_quantile: p must lie in [0,1)");
    if (p > m.w) return gp_quantile((p - m.w) / (1.0 - m.w), m.tail);
    const double lz = log_norm_const(m.u, m.count);
    double s = 0.0;
    for (int k = 0; k < m.u; ++k) {
        s += std::exp(nb_log_pmf(k, m.count) - lz);
        if (m.w * s >= p) return k;
    }
    return m.u;
}

std::vector<double> sample_spliced(const SplicedMargin& m, std::size_t n, std::uint64_t seed) {
    validate(m);
    Rng rng(seed);
    std::vector<double> out(n);
    for (auto& y : out) y = spliced_quantile(rng.uniform(), m);
    return out;
}

SplicedFit spliced_fit(const std::vector<double>& data, int u, NbVariance variance) {
    if (u < 0) throw ValidationError("spliced_fit: threshold must be nonnegative");
    std::vector<double> counts(static_cast<std::size_t>(u) + 1, 0.0);
    std::vector<double> excess;
    for (double y : data) {
        if (!(y >= 0.0) || !std::isfinite(y)) throw ValidationError("spliced_fit: data must be finite and nonnegative");
        if (y > u) {
            excess.push_back(y - u);
        } else {
            if (!is_count(y)) throw ValidationError("spliced_fit: values at or below the threshold must be integers");
            counts[static_cast<std::size_t>(y)] += 1.0;
        }
    }
    const double n_count = data.size() - excess.size();
    if (n_count == 0 || excess.empty()) throw ValidationError("spliced_fit: both sides of the threshold need observations");

    SplicedFit fit;
    fit.n_count = static_cast<std::size_t>(n_count);
    fit.n_tail = excess.size();
    fit.margin.u = u;
    fit.margin.w = n_count / static_cast<double>(data.size());

    // truncated NB in (log lambda, log phi)
    const optim::ScalarFn count_nll = [&](const Eigen::VectorXd& th) {
        const CountPart c{std::exp(th[0]), std::exp(th[1]), variance};
        const double lz = log_norm_const(u, c);
        double ll = 0.0;
        for (int y = 0; y <= u; ++y)
            if (counts[y] > 0.0) ll += counts[y] * (nb_log_pmf(y, c) - lz);
        return -ll;
    };
    double mean_count = 0.0;
    for (int y = 0; y <= u; ++y) mean_count += y * counts[y];
    mean_count = std::max(mean_count / n_count, 0.5);
    Eigen::VectorXd best_start(2);
    double best = INFINITY;
    for (double lam : {mean_count, 2.0 * mean_count, 5.0 * mean_count, 20.0 * mean_count}) {
        for (double phi : {0.1, 1.0, 5.0}) {
            Eigen::VectorXd th(2);
            th << std::log(lam), std::log(phi);
            const double v = count_nll(th);
            if (v < best) {
                best = v;
                best_start = th;
            }
        }
    }
    const optim::Objective count_obj = optim::with_fd_gradient(count_nll);
    optim::Options opt;
    opt.grad_tol = 1e-6;
    const optim::Result rc = optim::minimize(count_obj, best_start, opt);
    fit.margin.count = {std::exp(rc.x[0]), std::exp(rc.x[1]), variance};
    fit.loglik_count = -rc.value;
    const optim::Covariance cc = optim::invert_hessian(optim::hessian(count_obj, rc.x, false));
    fit.se_lambda = fit.margin.count.lambda * std::sqrt(std::max(0.0, cc.cov(0, 0)));
    fit.se_phi = fit.margin.count.phi * std::sqrt(std::max(0.0, cc.cov(1, 1)));

    // GP on the excesses in (log shape, log scale)
    const optim::Objective tail_obj = [&](const Eigen::VectorXd& th, Eigen::VectorXd* g) {
        const double xi = std::exp(th[0]), s = std::exp(th[1]);
        double ll = 0.0, d_xi = 0.0, d_s = 0.0;
        for (double e : excess) {
            const double z = xi * e / s;
            const double l1 = std::log1p(z);
            ll += -th[1] - (1.0 + 1.0 / xi) * l1;
            if (g) {
                d_xi += l1 / (xi * xi) - (1.0 + 1.0 / xi) * (e / s) / (1.0 + z);
                d_s += -1.0 / s + (1.0 + 1.0 / xi) * z / (s * (1.0 + z));
            }
        }
        if (g) {
            g->resize(2);
            (*g)[0] = -d_xi * xi;
            (*g)[1] = -d_s * s;
        }
        return -ll;
    };
    const double med = stats::median(excess);
    best = INFINITY;
    for (double xi : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        Eigen::VectorXd th(2);
        th << std::log(xi), std::log(med * xi / std::expm1(xi * std::log(2.0)));
        const double v = tail_obj(th, nullptr);
        if (v < best) {
            best = v;
            best_start = th;
        }
    }
    const optim::Result rt = optim::minimize(tail_obj, best_start, opt);
    fit.margin.tail = {static_cast<double>(u), std::exp(rt.x[0]), std::exp(rt.x[1])};
    fit.loglik_tail = -rt.value;
    const optim::Covariance ct = optim::invert_hessian(optim::hessian(tail_obj, rt.x, true));
    fit.se_shape = fit.margin.tail.shape * std::sqrt(std::max(0.0, ct.cov(0, 0)));
    fit.se_scale = fit.margin.tail.scale * std::sqrt(std::max(0.0, ct.cov(1, 1)));
    return fit;
}

QuantileResiduals quantile_residuals(const std::vector<double>& data, const SplicedMargin& m, std::uint64_t seed) {
    validate(m);
    Rng rng(seed);
    QuantileResiduals r;
    const double lz = log_norm_const(m.u, m.count);
    std::vector<double> cdf(static_cast<std::size_t>(m.u) + 1);
    double s = 0.0;
    for (int k = 0; k <= m.u; ++k) {
        s += std::exp(nb_log_pmf(k, m.count) - lz);
        cdf[k] = std::min(s, 1.0);
    }
    for (double y : data) {
        if (y > m.u) {
            r.tail.push_back(sf::normal_quantile(gp_cdf(y, m.tail)));
        } else {
            if (!is_count(y)) throw ValidationError("quantile_residuals: values at or below the threshold must be integers");
            const int k = static_cast<int>(y);
            const double lo = k == 0 ? 0.0 : cdf[k - 1];
            const double v = lo + rng.uniform() * (cdf[k] - lo);
            r.count.push_back(sf::normal_quantile(std::clamp(v, 1e-300, 1.0 - 1e-16)));
        }
    }
    return r;
}

GofResult gof_tests(const std::vector<double>& data, const FittedModel& fitted, const Refit& refit, int n_boot,
                    std::uint64_t seed) {
    if (data.size() < 10) throw ValidationError("gof_tests: need at least 10 observations");
    if (n_boot < 99) throw ValidationError("gof_tests: n_boot must be at least 99");
    GofResult res;
    res.n_boot = n_boot;
    res.ks = stats::ks_statistic(data, fitted.cdf);
    res.cvm = stats::cvm_statistic(data, fitted.cdf);
    res.ad = stats::ad_statistic(data, fitted.cdf);

    std::vector<std::array<double, 3>> boot(static_cast<std::size_t>(n_boot));
    std::vector<char> ok(static_cast<std::size_t>(n_boot), 0);
    parallel_for(static_cast<std::size_t>(n_boot), [&](std::size_t b) {
        Rng rng(derive_seed(seed, b));
        std::vector<double> sim(data.size());
        for (auto& y : sim) y = fitted.quantile(rng.uniform());
        try {
            const FittedModel m = refit(sim);
            boot[b] = {stats::ks_statistic(sim, m.cdf), stats::cvm_statistic(sim, m.cdf), stats::ad_statistic(sim, m.cdf)};
            ok[b] = std::isfinite(boot[b][0]) && std::isfinite(boot[b][1]) && std::isfinite(boot[b][2]);
        } catch (const std::exception&) {
            ok[b] = 0;
        }
    });
    int done = 0;
    std::array<int, 3> exceed{0, 0, 0};
    const std::array<double, 3> obs{res.ks, res.cvm, res.ad};
    for (int b = 0; b < n_boot; ++b) {
        if (!ok[b]) continue;
        ++done;
        for (int k = 0; k < 3; ++k)
            if (boot[b][k] >= obs[k]) ++exceed[k];
    }
    res.refit_failures = n_boot - done;
    if (res.refit_failures * 10 > n_boot)
        throw NumericalError("gof_tests: " + std::to_string(res.refit_failures) + " of " + std::to_string(n_boot) +
                             " bootstrap refits failed");
    res.p_ks = (1.0 + exceed[0]) / (done + 1.0);
    res.p_cvm = (1.0 + exceed[1]) / (done + 1.0);
    res.p_ad = (1.0 + exceed[2]) / (done + 1.0);
    return res;
}

FittedModel glmga_model(const GlmgaParams& p) {
    validate(p);
    return {[p](double y) { return glmga_cdf(y, p); }, [p](double q) { return glmga_quantile(q, p); }};
}

Refit glmga_refit() {
    return [](const std::vector<double>& x) { return glmga_model(glmga_fit(x).params); };
}

}  // namespace mglcop::margins
