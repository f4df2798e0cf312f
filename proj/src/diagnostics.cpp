#include "mglcop/diagnostics.hpp"

#include "mglcop/copula.hpp"
#include "mglcop/evcopula.hpp"
#include "mglcop/parallel.hpp"
#include "mglcop/quadrature.hpp"
#include "mglcop/regression.hpp"
#include "mglcop/rng.hpp"
#include "mglcop/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

namespace mglcop::diagnostics {

CopulaCdf copula_cdf(Family family, double delta) {
    switch (family) {
    case Family::mgl:
        return [delta](double u, double v) { return copula::mgl_cdf({u, v}, delta); };
    case Family::surv_mgl:
        return [delta](double u, double v) { return copula::surv_mgl_cdf({u, v}, delta); };
    case Family::surv_mgl_ev:
        return [delta](double u, double v) { return ev::ev_cdf(u, v, delta); };
    case Family::gumbel:
        return [delta](double u, double v) { return copula::gumbel_cdf(u, v, delta); };
    default:
        throw ValidationError("no bivariate cdf for family " + to_string(family));
    }
}

double empirical_copula(const PseudoSample& pseudo, const std::vector<double>& t) {
    if (static_cast<Eigen::Index>(t.size()) != pseudo.d()) throw DimensionError("empirical_copula: point dimension");
    for (double v : t)
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError("empirical_copula: point outside [0,1]");
    if (pseudo.n() == 0) throw ValidationError("empirical_copula: empty sample");
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < pseudo.n(); ++i) {
        bool in = true;
        for (Eigen::Index j = 0; j < pseudo.d() && in; ++j) in = t[j] >= 1.0 || pseudo.values(i, j) < t[j];
        count += in;
    }
    return static_cast<double>(count) / static_cast<double>(pseudo.n());
}

double fit_error_eA(const PseudoSample& pseudo, const CopulaCdf& c, const Region& r, int grid) {
    if (pseudo.d() != 2) throw DimensionError("fit_error_eA is bivariate");
    if (!(r.a1 >= 0.0 && r.b1 <= 1.0 && r.a2 >= 0.0 && r.b2 <= 1.0)) throw DomainError("region outside the unit square");
    if (!(r.b1 > r.a1 && r.b2 > r.a2)) throw ValidationError("fit_error_eA: empty region");
    if (grid < 1) throw ValidationError("fit_error_eA: grid must be positive");
    const double h1 = (r.b1 - r.a1) / grid;
    const double h2 = (r.b2 - r.a2) / grid;
    double sum = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double t1 = r.a1 + (i + 0.5) * h1;
        for (int j = 0; j < grid; ++j) {
            const double t2 = r.a2 + (j + 0.5) * h2;
            const double diff = c(t1, t2) - empirical_copula(pseudo, {t1, t2});
            sum += diff * diff;
        }
    }
    return std::sqrt(sum / (static_cast<double>(grid) * grid));
}

namespace {

void check_config(const TailWeightConfig& cfg) {
    if (cfg.k < 1) throw ValidationError("tail weight power k must be positive");
    if (!(cfg.p > 0.0 && cfg.p < 1.0)) throw ValidationError("truncation level p must be in (0,1)");
}

double tw_corr(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double s1 = 0.0, s2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s1 += a[i];
        s2 += b[i];
        s11 += a[i] * a[i];
        s22 += b[i] * b[i];
        s12 += a[i] * b[i];
    }
    return (s12 - s1 * s2 / n) / std::sqrt((s11 - s1 * s1 / n) * (s22 - s2 * s2 / n));
}

}  // namespace

double tw_dep_empirical(const PseudoSample& pseudo, const TailWeightConfig& cfg) {
    check_config(cfg);
    if (pseudo.d() != 2) throw DimensionError("tail-weighted dependence is bivariate");
    std::vector<double> w1, w2;
    for (Eigen::Index i = 0; i < pseudo.n(); ++i) {
        double v1 = pseudo.values(i, 0), v2 = pseudo.values(i, 1);
        if (cfg.tail == Tail::upper) {
            v1 = 1.0 - v1;
            v2 = 1.0 - v2;
        }
        if (v1 < cfg.p && v2 < cfg.p) {
            w1.push_back(std::pow(1.0 - v1 / cfg.p, cfg.k));
            w2.push_back(std::pow(1.0 - v2 / cfg.p, cfg.k));
        }
    }
    if (w1.size() < 30) throw ValidationError("tail-weighted dependence needs at least 30 points in the tail region");
    return tw_corr(w1, w2);
}

namespace {

struct TwMoments {
    double cpp, m12, m1, m2, m11, m22;
};

// Gauss-Legendre in x on (0,1) with u = p x^2 to resolve the corner at 0.
TwMoments tw_moments(const CopulaCdf& c, const TailWeightConfig& cfg, int n) {
    const quad::Rule r = quad::gauss_legendre(n, 0.0, 1.0);
    const double p = cfg.p;
    const int k = cfg.k;
    std::vector<double> u(n), w(n), ad(n), a(n), cu(n), cv(n);
    for (int i = 0; i < n; ++i) {
        const double x = r.nodes[i];
        u[i] = p * x * x;
        w[i] = r.weights[i] * 2.0 * p * x;
        const double s = 1.0 - u[i] / p;
        ad[i] = k * std::pow(s, k - 1);
        a[i] = std::pow(s, k);
        cu[i] = c(u[i], p);
        cv[i] = c(p, u[i]);
    }
    TwMoments m{c(p, p), 0.0, 0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        m.m1 += w[i] * ad[i] * cu[i];
        m.m2 += w[i] * ad[i] * cv[i];
        m.m11 += w[i] * 2.0 * a[i] * ad[i] * cu[i];
        m.m22 += w[i] * 2.0 * a[i] * ad[i] * cv[i];
        for (int j = 0; j < n; ++j) m.m12 += w[i] * w[j] * ad[i] * ad[j] * c(u[i], u[j]);
    }
    m.m1 /= p;
    m.m2 /= p;
    m.m11 /= p;
    m.m22 /= p;
    m.m12 /= p * p;
    return m;
}

double tw_from_moments(const TwMoments& m) {
    const double num = m.cpp * m.m12 - m.m1 * m.m2;
    const double den = (m.cpp * m.m11 - m.m1 * m.m1) * (m.cpp * m.m22 - m.m2 * m.m2);
    return num / std::sqrt(den);
}

}  // namespace

double tw_dep_model(const CopulaCdf& c, const TailWeightConfig& cfg, bool reflected) {
    check_config(cfg);
    CopulaCdf cc = c;
    if (cfg.tail == Tail::upper && !reflected) {
        cc = [c](double u, double v) { return std::max(0.0, u + v - 1.0 + c(1.0 - u, 1.0 - v)); };
    }
    double prev = tw_from_moments(tw_moments(cc, cfg, 24));
    for (int n = 48; n <= 192; n *= 2) {
        const double cur = tw_from_moments(tw_moments(cc, cfg, n));
        if (std::fabs(cur - prev) < 1e-7) return cur;
        prev = cur;
    }
    throw QuadratureError("tail-weighted dependence integrals did not converge");
}

double tw_dep_model(Family family, double delta, const TailWeightConfig& cfg) {
    // The reflection of the survival MGL copula is the MGL copula and vice versa.
    if (cfg.tail == Tail::upper && family == Family::surv_mgl) return tw_dep_model(copula_cdf(Family::mgl, delta), cfg, true);
    if (cfg.tail == Tail::upper && family == Family::mgl) return tw_dep_model(copula_cdf(Family::surv_mgl, delta), cfg, true);
    return tw_dep_model(copula_cdf(family, delta), cfg, false);
}

BootstrapResult bootstrap_ci(const std::function<double(std::uint64_t)>& replicate, int n_boot, double level,
                             std::uint64_t seed) {
    if (n_boot < 100) throw ValidationError("bootstrap needs n_boot >= 100");
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("confidence level must be in (0,1)");
    std::vector<std::optional<double>> out(static_cast<std::size_t>(n_boot));
    std::atomic<int> failures{0};
    const int limit = n_boot / 10;
    parallel_for(out.size(), [&](std::size_t b) {
        if (failures.load() > limit) return;
        try {
            const double v = replicate(derive_seed(seed, b));
            if (!std::isfinite(v)) throw NumericalError("non-finite bootstrap statistic");
            out[b] = v;
        } catch (const NumericalError&) {
            ++failures;
        }
    });
    if (failures.load() > limit)
        throw NumericalError("bootstrap aborted: " + std::to_string(failures.load()) + " failed refits out of " +
                             std::to_string(n_boot));
    BootstrapResult res;
    res.failures = failures.load();
    for (const auto& v : out)
        if (v) res.values.push_back(*v);
    const double alpha = 0.5 * (1.0 - level);
    res.lo = stats::quantile(res.values, alpha);
    res.hi = stats::quantile(res.values, 1.0 - alpha);
    return res;
}

PseudoSample sample_family(Family family, double delta, std::size_t n, std::uint64_t seed) {
    switch (family) {
    case Family::mgl:
        return copula::sample_mgl_copula(delta, 2, n, seed, false);
    case Family::surv_mgl:
        return copula::sample_mgl_copula(delta, 2, n, seed, true);
    case Family::surv_mgl_ev:
        return ev::sample_ev(delta, n, seed);
    default:
        throw ValidationError("no sampler for family " + to_string(family));
    }
}

BootstrapResult bootstrap_copula(Family family, double delta, std::size_t n,
                                 const std::function<double(double)>& statistic, int n_boot, double level,
                                 std::uint64_t seed) {
    return bootstrap_ci(
        [&](std::uint64_t s) {
            const PseudoSample ps = sample_family(family, delta, n, s);
            regression::RegOptions opt;
            opt.restarts = 0;
            opt.covariance = false;
            opt.init = Eigen::VectorXd::Constant(1, family == Family::gumbel ? std::log(delta - 1.0) : std::log(delta));
            const regression::RegressionFit fit = regression::fit_copula_reg(ps, regression::intercept_design(n), family, opt);
            return statistic(fit.fitted_delta[0]);
        },
        n_boot, level, seed);
}

Eigen::MatrixXd scenario_design(const Scenario& s, std::size_t n, std::uint64_t seed) {
    const Eigen::Index k = s.beta.size();
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), k);
    if (s.covariates == CovariateLaw::time_trend) {
        if (k != 2) throw ValidationError("time-trend scenario needs beta of length 2");
        if (s.periods < 2) throw ValidationError("time-trend scenario needs at least two periods");
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            x(i, 0) = 1.0;
            x(i, 1) = static_cast<double>(i % s.periods + 1);
        }
        return x;
    }
    Rng rng(seed);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        x(i, 0) = 1.0;
        for (Eigen::Index j = 1; j < k; ++j) x(i, j) = rng.normal();
    }
    return x;
}

SimStudy simstudy(const Scenario& sc, std::uint64_t seed) {
    if (sc.replicates < 1) throw ValidationError("simulation study needs at least one replicate");
    if (sc.n_grid.empty()) throw ValidationError("simulation study needs a sample-size grid");
    if (sc.beta.size() < 1) throw ValidationError("simulation study needs beta");
    if (sc.d < 2) throw ValidationError("simulation study needs d >= 2");
    if (sc.family != Family::surv_mgl && sc.family != Family::mgl)
        throw ValidationError("simulation study supports the mgl and surv-mgl families");
    SimStudy study;
    study.scenario = sc;
    const Eigen::Index k = sc.beta.size();
    for (std::size_t ni = 0; ni < sc.n_grid.size(); ++ni) {
        const std::size_t n = sc.n_grid[ni];
        std::vector<std::optional<Eigen::VectorXd>> est(static_cast<std::size_t>(sc.replicates));
        parallel_for(est.size(), [&](std::size_t r) {
            const std::uint64_t rs = derive_seed(derive_seed(seed, n), r);
            const Eigen::MatrixXd x = scenario_design(sc, n, derive_seed(rs, 1));
            const Eigen::VectorXd delta = regression::fitted_delta(sc.family, x, sc.beta);
            const PseudoSample ps = copula::sample_mgl_copula(std::vector<double>(delta.data(), delta.data() + delta.size()),
                                                              sc.d, derive_seed(rs, 2), sc.family == Family::surv_mgl);
            regression::RegOptions opt;
            opt.restarts = sc.restarts;
            opt.covariance = false;
            opt.seed = derive_seed(rs, 3);
            try {
                est[r] = regression::fit_copula_reg(ps, x, sc.family, opt).beta;
            } catch (const NumericalError&) {
            }
        });
        std::vector<Eigen::VectorXd> ok;
        for (auto& e : est)
            if (e) ok.push_back(*e);
        const int failures = sc.replicates - static_cast<int>(ok.size());
        for (Eigen::Index j = 0; j < k; ++j) {
            SimRow row;
            row.n = n;
            row.coef = static_cast<int>(j);
            row.truth = sc.beta[j];
            row.replicates = static_cast<int>(ok.size());
            row.failures = failures;
            if (ok.empty()) {
                row.mean = row.median = row.bias = row.variance = row.mse = row.se_median =
                    std::numeric_limits<double>::quiet_NaN();
            } else {
                std::vector<double> v;
                for (const auto& e : ok) v.push_back(e[j]);
                const double m = static_cast<double>(v.size());
                row.mean = stats::mean(v);
                row.median = stats::median(v);
                row.bias = row.mean - row.truth;
                double ss = 0.0, se2 = 0.0;
                for (double b : v) {
                    ss += (b - row.mean) * (b - row.mean);
                    se2 += (b - row.truth) * (b - row.truth);
                }
                row.variance = ss / m;
                row.mse = se2 / m;
                // asymptotic s.e. of a sample median from the Gaussian spread
                row.se_median = std::sqrt(M_PI / 2.0) * std::sqrt(row.variance / m);
            }
            study.rows.push_back(row);
        }
        study.estimates.push_back(std::move(ok));
    }
    return study;
}

void write_simstudy_csv(std::ostream& os, const SimStudy& study) {
    const auto old = os.precision(17);
    os << "scenario,n,coef,truth,mean,median,bias,variance,mse,se_median,replicates,failures\n";
    for (const SimRow& r : study.rows) {
        os << study.scenario.name << ',' << r.n << ",beta" << r.coef << ',' << r.truth << ',' << r.mean << ',' << r.median
           << ',' << r.bias << ',' << r.variance << ',' << r.mse << ',' << r.se_median << ',' << r.replicates << ','
           << r.failures << '\n';
    }
    os.precision(old);
}

}  // namespace mglcop::diagnostics
