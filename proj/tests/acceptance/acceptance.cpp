// Acceptance suite: one PASS/FAIL/SKIP line per criterion.
// Exit status is nonzero when any criterion fails; skipped data-gated
// criteria do not count as failures.

#include "mglcop/copula.hpp"
#include "mglcop/diagnostics.hpp"
#include "mglcop/errors.hpp"
#include "mglcop/evcopula.hpp"
#include "mglcop/glmga.hpp"
#include "mglcop/io.hpp"
#include "mglcop/margins.hpp"
#include "mglcop/mgl.hpp"
#include "mglcop/regression.hpp"
#include "mglcop/rng.hpp"
#include "mglcop/specfun.hpp"
#include "mglcop/spline.hpp"
#include "mglcop/stats.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mglcop;
namespace fs = std::filesystem;

namespace {

enum class Status { pass, fail, skip };

struct Outcome {
    Status status = Status::pass;
    std::string detail;
};

// collects failed checks with a short description of the worst offender
struct Checker {
    bool ok = true;
    std::ostringstream notes;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) notes << "failed: ";
            else notes << "; ";
            notes << what;
            ok = false;
        }
    }
    Outcome done(const std::string& summary) const {
        return {ok ? Status::pass : Status::fail, ok ? summary : summary + " | " + notes.str()};
    }
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index j) {
    return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome special_functions() {
    using namespace specfun;
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> pu(0.0, 1.0), lm(std::log(0.1), std::log(10.0)),
        ln(std::log(0.5), std::log(1e3));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BetaShape s{i % 2 == 0 ? 0.5 : std::exp(lm(gen)), std::exp(ln(gen))};
        const double p = 1e-6 + (1.0 - 2e-6) * pu(gen);
        const double x = inv_inc_beta(p, s);
        worst = std::max(worst, std::fabs(inc_beta(x, s) - p));
    }
    c.check(worst < 1e-10, "roundtrip gap " + fmt("%.3g", worst));

    double worst_cf = 0.0;
    for (int i = 1; i < 1000; ++i) {
        const double x = i / 1000.0;
        const double half_one = std::sqrt(x);
        const double half_threehalves = (2.0 / M_PI) * (std::asin(std::sqrt(x)) + std::sqrt(x * (1.0 - x)));
        worst_cf = std::max(worst_cf, std::fabs(inc_beta(x, {0.5, 1.0}) - half_one));
        worst_cf = std::max(worst_cf, std::fabs(inc_beta(x, {0.5, 1.5}) - half_threehalves));
    }
    c.check(worst_cf < 1e-12, "closed-form gap " + fmt("%.3g", worst_cf));
    const double secs = seconds_since(t0);
    c.check(secs < 1.0, "runtime " + fmt("%.2f s", secs));
    return c.done("roundtrip max " + fmt("%.2e", worst) + ", closed forms max " + fmt("%.2e", worst_cf) + ", " +
                  fmt("%.3f s", secs));
}

Outcome tail_dependence() {
    Checker c;
    // 2 - 2 A(1/2) with A(1/2) = 1/2 + 1/pi at delta = 1
    const double closed = 1.0 - 2.0 / M_PI;
    const double l1 = copula::tail_dependence(1.0).lower;
    const double lsmall = copula::tail_dependence(1e-4).lower;
    const double lbig = copula::tail_dependence(1e6).lower;
    c.check(std::fabs(l1 - closed) < 1e-6, "lambda_l(1) = " + fmt("%.10f", l1));
    c.check(lsmall < 1e-3, "lambda_l(1e-4) = " + fmt("%.3g", lsmall));
    c.check(lbig > 0.999, "lambda_l(1e6) = " + fmt("%.6f", lbig));
    return c.done("lambda_l(1)=" + fmt("%.10f", l1) + " (1-2/pi=" + fmt("%.10f", closed) + "), lambda_l(1e-4)=" +
                  fmt("%.2e", lsmall) + ", lambda_l(1e6)=" + fmt("%.6f", lbig));
}

Outcome copula_calculus() {
    Checker c;
    std::mt19937_64 gen(303);
    std::uniform_real_distribution<double> pu(0.02, 0.98), ps(0.2, 2.0), pd(0.05, 10.0);

    // density against the MGL joint density over its GLMGA margins
    double worst_sklar = 0.0;
    for (int rep = 0; rep < 60; ++rep) {
        const int d = 2 + rep % 3;
        MglParams p;
        p.a = ps(gen);
        for (int j = 0; j < d; ++j) {
            p.sigma.push_back(ps(gen));
            p.b.push_back(ps(gen));
        }
        std::vector<double> u, y;
        double log_marg = 0.0;
        for (int j = 0; j < d; ++j) {
            u.push_back(pu(gen));
            y.push_back(glmga_quantile(u.back(), p.margin(j)));
            log_marg += glmga_log_pdf(y.back(), p.margin(j));
        }
        const double ratio = std::exp(mgl_log_pdf(y, p) - log_marg);
        worst_sklar = std::max(worst_sklar, std::fabs(copula::mgl_pdf(u, 1.0 / p.a) / ratio - 1.0));
    }
    c.check(worst_sklar < 1e-8, "density/joint ratio gap " + fmt("%.3g", worst_sklar));

    // h-functions against central differences of the cdf
    const double step = 1e-5;
    double worst_h = 0.0;
    for (double delta : {0.3, 1.0, 3.0}) {
        for (int i = 1; i <= 5; ++i)
            for (int j = 1; j <= 5; ++j) {
                const double u = i / 6.0, v = j / 6.0;
                const double fd = (copula::mgl_cdf({u + step, v}, delta) - copula::mgl_cdf({u - step, v}, delta)) / (2 * step);
                const double sfd =
                    (copula::surv_mgl_cdf({u + step, v}, delta) - copula::surv_mgl_cdf({u - step, v}, delta)) / (2 * step);
                worst_h = std::max(worst_h, std::fabs(copula::h_forward(v, u, delta) - fd));
                worst_h = std::max(worst_h, std::fabs(copula::surv_h_forward(v, u, delta) - sfd));
            }
    }
    c.check(worst_h < 1e-5, "h vs numeric derivative gap " + fmt("%.3g", worst_h));

    double worst_inv = 0.0;
    for (double delta : {0.1, 1.0, 5.0})
        for (int i = 1; i <= 20; ++i)
            for (int j = 1; j <= 20; ++j) {
                const double u = i / 21.0, w = j / 21.0;
                worst_inv = std::max(worst_inv, std::fabs(copula::h_forward(copula::h_inverse(w, u, delta), u, delta) - w));
                worst_inv = std::max(
                    worst_inv, std::fabs(copula::surv_h_forward(copula::surv_h_inverse(w, u, delta), u, delta) - w));
            }
    c.check(worst_inv < 1e-8, "h(h^-1) gap " + fmt("%.3g", worst_inv));

    // survival MGL against MGB2 with p_i = 1/2: q = 1/delta in general, the
    // printed q = delta where both agree (delta = 1)
    double worst_mgb2 = 0.0;
    std::uniform_real_distribution<double> pw(0.001, 0.999);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + rep % 4;
        const double delta = pd(gen);
        std::vector<double> u;
        for (int j = 0; j < d; ++j) u.push_back(pw(gen));
        const double a = copula::surv_mgl_pdf(u, delta);
        const double b = copula::mgb2_pdf(u, std::vector<double>(d, 0.5), 1.0 / delta);
        worst_mgb2 = std::max(worst_mgb2, std::fabs(a / b - 1.0));
    }
    for (int rep = 0; rep < 50; ++rep) {
        const std::vector<double> u{pw(gen), pw(gen)};
        const double a = copula::surv_mgl_pdf(u, 1.0);
        worst_mgb2 = std::max(worst_mgb2, std::fabs(a / copula::mgb2_pdf(u, {0.5, 0.5}, 1.0) - 1.0));
    }
    c.check(worst_mgb2 < 1e-10, "survival MGL vs MGB2 gap " + fmt("%.3g", worst_mgb2));
    return c.done("density " + fmt("%.1e", worst_sklar) + ", h " + fmt("%.1e", worst_h) + ", h(h^-1) " +
                  fmt("%.1e", worst_inv) + ", MGB2 " + fmt("%.1e", worst_mgb2));
}

Outcome sampler() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    std::ostringstream sum;
    for (double delta : {0.1, 1.0, 5.0}) {
        const PseudoSample s = copula::sample_mgl_copula(delta, 2, 100000, 4000 + static_cast<int>(10 * delta));
        const auto u = column(s.values, 0), v = column(s.values, 1);
        const double ks = std::max(stats::ks_uniform(u), stats::ks_uniform(v));
        const double tau = stats::kendall_tau(u, v), tq = copula::kendall_tau(delta);
        c.check(ks < 0.005, "KS " + fmt("%.4f", ks) + " at delta " + fmt("%g", delta));
        c.check(std::fabs(tau - tq) < 0.01, "tau gap " + fmt("%.4f", tau - tq) + " at delta " + fmt("%g", delta));
        sum << "delta=" << delta << ": KS " << fmt("%.4f", ks) << ", tau " << fmt("%.4f", tau) << " vs "
            << fmt("%.4f", tq) << "; ";
    }
    const double secs = seconds_since(t0);
    c.check(secs < 30.0, "runtime " + fmt("%.1f s", secs));
    sum << fmt("%.1f s", secs);
    return c.done(sum.str());
}

Outcome ev_limit() {
    Checker c;
    const double s = 1e-5;
    const std::vector<std::pair<double, double>> grid{{1.0, 1.0}, {0.3, 2.0}, {1.5, 0.6}, {0.5, 0.5}, {2.0, 0.1}};
    double worst_lim = 0.0;
    for (double delta : {0.5, 1.0, 2.0})
        for (auto [u1, u2] : grid) {
            const double lim = (1.0 - copula::surv_mgl_cdf({1.0 - s * u1, 1.0 - s * u2}, delta)) / s;
            worst_lim = std::max(worst_lim, std::fabs(lim - ev::stable_tail_l({u1, u2}, delta)));
        }
    c.check(worst_lim < 1e-3, "limit gap " + fmt("%.3g", worst_lim));

    double worst_ms = 0.0;
    for (double delta : {0.3, 1.0, 3.0})
        for (double t : {2.0, 5.0, 0.5})
            for (auto [u1, u2] : {std::pair{0.2, 0.7}, std::pair{0.9, 0.4}, std::pair{0.01, 0.5}, std::pair{0.6, 0.6}}) {
                const double lhs = ev::ev_cdf(std::pow(u1, t), std::pow(u2, t), delta);
                worst_ms = std::max(worst_ms, std::fabs(lhs - std::pow(ev::ev_cdf(u1, u2, delta), t)));
            }
    c.check(worst_ms < 1e-8, "max-stability gap " + fmt("%.3g", worst_ms));

    std::mt19937_64 gen(505);
    std::uniform_real_distribution<double> pu(0.0, 1.0), pd(0.05, 10.0);
    int bound_bad = 0, convex_bad = 0;
    for (int rep = 0; rep < 1000; ++rep) {
        const double delta = pd(gen), w = pu(gen), w1 = pu(gen), w2 = pu(gen);
        const double a = ev::pickands_A(w, delta);
        if (a < std::max(w, 1.0 - w) - 1e-15 || a > 1.0 + 1e-15) ++bound_bad;
        if (ev::pickands_A(0.5 * (w1 + w2), delta) > 0.5 * (ev::pickands_A(w1, delta) + ev::pickands_A(w2, delta)) + 1e-14)
            ++convex_bad;
    }
    c.check(bound_bad == 0, std::to_string(bound_bad) + " Pickands bound violations");
    c.check(convex_bad == 0, std::to_string(convex_bad) + " convexity violations");
    return c.done("limit max gap " + fmt("%.2e", worst_lim) + ", max-stability " + fmt("%.1e", worst_ms) +
                  ", Pickands bounds/convexity clean on 1000 points");
}

Outcome gradient() {
    Checker c;
    double worst = 0.0;
    for (int d : {2, 10}) {
        for (int rep = 0; rep < 5; ++rep) {
            const std::uint64_t seed = 600 + 10 * d + rep;
            Rng rng(seed);
            const int n = 200;
            Eigen::MatrixXd x(n, 3);
            for (int i = 0; i < n; ++i) x.row(i) << 1.0, rng.normal(), rng.normal();
            Eigen::VectorXd beta(3);
            beta << -2.0 + 3.5 * rng.uniform(), 0.3 * rng.normal(), 0.3 * rng.normal();
            const Eigen::VectorXd delta = regression::fitted_delta(Family::surv_mgl, x, beta);
            const PseudoSample ps = copula::sample_mgl_copula(std::vector<double>(delta.data(), delta.data() + n), d,
                                                              derive_seed(seed, 1), true);
            const Eigen::VectorXd g = regression::grad_surv_mgl_reg(ps, x, beta);
            for (int j = 0; j < 3; ++j) {
                const double h = 1e-5 * std::max(1.0, std::fabs(beta[j]));
                Eigen::VectorXd bp = beta, bm = beta;
                bp[j] += h;
                bm[j] -= h;
                const double fd = (regression::loglik_surv_mgl_reg(ps, x, bp) - regression::loglik_surv_mgl_reg(ps, x, bm)) / (2 * h);
                worst = std::max(worst, std::fabs(g[j] - fd) / std::max(1.0, std::fabs(fd)));
            }
        }
    }
    c.check(worst < 1e-5, "relative gap " + fmt("%.3g", worst));
    return c.done("max relative gap " + fmt("%.2e", worst) + " over d in {2,10}, 5 random beta each, n=200");
}

Outcome simulation_study() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker c;
    diagnostics::Scenario sc;
    sc.name = "sim_d2";
    sc.beta = Eigen::Vector3d(-0.6, 0.5, 0.2);
    const diagnostics::SimStudy st = diagnostics::simstudy(sc, 20240601);
    std::ostringstream sum;
    for (int k = 0; k < 3; ++k) {
        const diagnostics::SimRow *small = nullptr, *large = nullptr;
        for (const auto& r : st.rows) {
            if (r.coef != k) continue;
            if (r.n == 100) small = &r;
            if (r.n == 1000) large = &r;
            const double z = std::fabs(r.median - r.truth) / r.se_median;
            c.check(z <= 2.0, "beta" + std::to_string(k) + " median off by " + fmt("%.2f", z) + " s.e. at n=" +
                                  std::to_string(r.n));
        }
        c.check(small && large && large->mse < small->mse, "MSE not decreasing for beta" + std::to_string(k));
        if (small && large)
            sum << "beta" << k << " MSE " << fmt("%.4f", small->mse) << " -> " << fmt("%.5f", large->mse) << "; ";
    }
    int fails = 0;
    for (const auto& r : st.rows)
        if (r.coef == 0) fails += r.failures;
    const double secs = seconds_since(t0);
    c.check(secs < 600.0, "runtime " + fmt("%.0f s", secs));
    sum << fails << " failed fits of " << 3 * sc.replicates << ", " << fmt("%.0f s", secs);
    return c.done(sum.str());
}

// data-gated criteria

fs::path data_dir() {
    if (const char* env = std::getenv("MGL_DATA_DIR")) return env;
    return fs::path(MGLCOP_SOURCE_DIR) / "data";
}

bool near(double x, double target, double tol) { return std::fabs(x - target) <= tol; }

Outcome danish() {
    const fs::path file = data_dir() / "danish.csv";
    if (!fs::exists(file)) return {Status::skip, "data absent: " + file.string()};
    Checker c;
    const io::Table t = io::read_csv(file.string());
    const auto building = t.numeric("Building"), contents = t.numeric("Contents"), year = t.numeric("Year");
    std::vector<double> yr;
    Eigen::MatrixXd logs(static_cast<Eigen::Index>(building.size()), 2);
    Eigen::Index n = 0;
    for (std::size_t i = 0; i < building.size(); ++i) {
        if (!(building[i] > 0.0 && contents[i] > 0.0)) continue;
        logs(n, 0) = std::log(building[i]);
        logs(n, 1) = std::log(contents[i]);
        yr.push_back(year[i]);
        ++n;
    }
    logs.conservativeResize(n, 2);
    const PseudoSample ps = margins::kernel_pseudo_obs(logs, 0.2);

    const auto surv = regression::fit_copula_reg(ps, regression::intercept_design(n), Family::surv_mgl);
    const auto evf = regression::fit_copula_reg(ps, regression::intercept_design(n), Family::surv_mgl_ev);
    const Eigen::MatrixXd xs = regression::ns_basis(yr, regression::quantile_knots(yr, {0.5}));
    const auto spl = regression::fit_copula_reg(ps, xs, Family::surv_mgl);
    diagnostics::TailWeightConfig cfg;
    cfg.k = 6;
    cfg.p = 0.5;
    const double rho = diagnostics::tw_dep_model(Family::surv_mgl, surv.fitted_delta[0], cfg);

    const double d1 = surv.fitted_delta[0], d2 = evf.fitted_delta[0];
    c.check(near(d1, 0.892, 0.02), "survival MGL delta " + fmt("%.4f", d1));
    c.check(near(surv.loglik, 115.97, 0.5), "survival MGL LL " + fmt("%.2f", surv.loglik));
    c.check(near(d2, 0.655, 0.02), "MGL-EV delta " + fmt("%.4f", d2));
    c.check(near(spl.loglik, 116.69, 0.5), "spline LL " + fmt("%.2f", spl.loglik));
    c.check(near(rho, 0.429, 0.02), "rho_U " + fmt("%.4f", rho));
    return c.done("n=" + std::to_string(n) + ", delta " + fmt("%.4f", d1) + ", LL " + fmt("%.2f", surv.loglik) +
                  ", EV delta " + fmt("%.4f", d2) + ", spline LL " + fmt("%.2f", spl.loglik) + ", rho_U " +
                  fmt("%.4f", rho));
}

Outcome earthquake() {
    const fs::path file = data_dir() / "earthquake.csv";
    if (!fs::exists(file)) return {Status::skip, "data absent: " + file.string()};
    Checker c;
    const io::Table t = io::read_csv(file.string());
    const auto year = t.numeric("Year"), loss = t.numeric("Loss"), cas = t.numeric("Casualties");
    const std::size_t n = loss.size();

    const auto ifm = regression::ifm_fit(loss, cas, 20, regression::intercept_design(n), Family::surv_mgl, {},
                                         margins::NbVariance::linear);
    const Eigen::MatrixXd xs = regression::ns_basis(year, regression::quantile_knots(year, {0.333, 0.667}));
    const auto spl = regression::fit_mixed_reg(loss, cas, ifm.margin1.params, ifm.margin2.margin, xs, Family::surv_mgl);

    const double sigma = ifm.margin1.params.sigma, ll1 = ifm.margin1.loglik;
    const double lambda = ifm.margin2.margin.count.lambda, phi = ifm.margin2.margin.count.phi;
    const double delta = ifm.copula.fitted_delta[0], ll = ifm.copula.loglik;
    c.check(near(sigma, 0.820, 0.02), "GLMGA sigma " + fmt("%.4f", sigma));
    c.check(near(ll1, -1871.01, 0.5), "GLMGA LL " + fmt("%.2f", ll1));
    c.check(near(lambda, 37.42, 0.5), "lambda " + fmt("%.3f", lambda));
    c.check(near(phi, 5.45, 0.3), "phi " + fmt("%.3f", phi));
    c.check(near(delta, 2.763, 0.05), "joint delta " + fmt("%.4f", delta));
    c.check(near(ll, -3009.46, 1.0), "joint LL " + fmt("%.2f", ll));
    c.check(near(spl.loglik, -3002.22, 1.0), "spline LL " + fmt("%.2f", spl.loglik));
    return c.done("sigma " + fmt("%.4f", sigma) + ", LL " + fmt("%.2f", ll1) + ", lambda " + fmt("%.3f", lambda) +
                  ", phi " + fmt("%.3f", phi) + ", delta " + fmt("%.4f", delta) + ", joint LL " + fmt("%.2f", ll) +
                  ", spline LL " + fmt("%.2f", spl.loglik));
}

// cheap structural properties run alongside criteria 1-7
Outcome invariants() {
    Checker c;
    std::mt19937_64 gen(1010);
    std::uniform_real_distribution<double> pu(0.01, 0.99), pd(0.05, 10.0);
    int bad = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const double delta = pd(gen), u = pu(gen), v = pu(gen);
        const double cuv = copula::mgl_cdf({u, v}, delta);
        if (cuv < std::max(0.0, u + v - 1.0) - 1e-12 || cuv > std::min(u, v) + 1e-12) ++bad;
        if (std::fabs(cuv - copula::mgl_cdf({v, u}, delta)) > 1e-12) ++bad;
        const double sv = copula::surv_mgl_cdf({u, v}, delta);
        if (std::fabs(sv - (u + v - 1.0 + copula::mgl_cdf({1.0 - u, 1.0 - v}, delta))) > 1e-10) ++bad;
        const double h = copula::h_forward(v, u, delta);
        if (!(h >= 0.0 && h <= 1.0)) ++bad;
    }
    c.check(bad == 0, std::to_string(bad) + " copula invariant violations");
    diagnostics::TailWeightConfig cfg;
    const double indep = diagnostics::tw_dep_model(Family::surv_mgl, 1e-6, cfg);
    c.check(std::fabs(indep) < 1e-3, "tail-weighted measure near independence " + fmt("%.3g", indep));
    const auto ns = regression::ns_basis({1, 2, 3, 4, 5, 6, 7, 8}, {4.5});
    c.check(ns.cols() == 3, "natural spline basis width");
    return c.done("Frechet bounds, exchangeability, reflection, h range, spline width");
}

struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Criterion> core{
        {1, "special functions", special_functions}, {2, "tail dependence", tail_dependence},
        {3, "copula calculus", copula_calculus},     {4, "sampler validity", sampler},
        {5, "EV limit", ev_limit},                   {6, "gradient correctness", gradient},
        {7, "simulation study", simulation_study},
    };
    int failed = 0;
    bool core_ok = true;
    auto report = [&](int id, const std::string& name, const Outcome& o, double secs) {
        const char* tag = o.status == Status::pass ? "PASS" : o.status == Status::fail ? "FAIL" : "SKIP";
        std::printf("[%s] %2d %-24s %s (%.1f s)\n", tag, id, name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        if (o.status == Status::fail) ++failed;
    };
    auto guarded = [](const std::function<Outcome()>& f) {
        try {
            return f();
        } catch (const std::exception& e) {
            return Outcome{Status::fail, std::string("exception: ") + e.what()};
        }
    };
    for (const auto& cr : core) {
        const auto t0 = std::chrono::steady_clock::now();
        const Outcome o = guarded(cr.run);
        report(cr.id, cr.name, o, seconds_since(t0));
        core_ok = core_ok && o.status == Status::pass;
    }
    const auto core_secs = seconds_since(start);

    for (const auto& cr : std::vector<Criterion>{{8, "Danish reproduction", danish}, {9, "earthquake reproduction", earthquake}}) {
        const auto t0 = std::chrono::steady_clock::now();
        report(cr.id, cr.name, guarded(cr.run), seconds_since(t0));
    }

    const auto t0 = std::chrono::steady_clock::now();
    const Outcome inv = guarded(invariants);
    const double total = seconds_since(start);
    Outcome ten;
    ten.status = core_ok && inv.status == Status::pass && total < 900.0 ? Status::pass : Status::fail;
    ten.detail = std::string("criteria 1-7 ") + (core_ok ? "pass" : "did not all pass") + ", invariants: " + inv.detail +
                 ", 1-7 in " + fmt("%.0f s", core_secs) + ", total " + fmt("%.0f s", total) + " of 900 s";
    report(10, "zero-data property run", ten, seconds_since(t0));
    return failed == 0 ? 0 : 1;
}
