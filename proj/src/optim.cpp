#include "mglcop/optim.hpp"

#include "mglcop/rng.hpp"

#include <cmath>
#include <limits>

namespace mglcop::optim {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Objective evaluation where domain or non-finite failures read as +inf, so
// the line search simply backs off.
double safe_eval(const Objective& f, const Eigen::VectorXd& x, Eigen::VectorXd* g) {
    try {
        const double v = f(x, g);
        if (!std::isfinite(v)) return kInf;
        if (g && !g->allFinite()) return kInf;
        return v;
    } catch (const DomainError&) {
        return kInf;
    } catch (const NumericalError&) {
        return kInf;
    }
}

struct Run {
    Result result;
    bool converged = false;
};

Run bfgs(const Objective& f, const Eigen::VectorXd& x0, const Options& opt) {
    const Eigen::Index k = x0.size();
    Run run;
    Result& r = run.result;
    r.x = x0;
    r.grad = Eigen::VectorXd::Zero(k);
    r.value = safe_eval(f, r.x, &r.grad);
    if (!std::isfinite(r.value)) return run;

    Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(k, k);
    bool scaled = false;
    int stalls = 0;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const double gnorm = r.grad.lpNorm<Eigen::Infinity>();
        r.trace.push_back({it - 1, r.value, gnorm, 0.0});
        if (gnorm < opt.grad_tol) {
            run.converged = true;
            break;
        }
        Eigen::VectorXd dir = -hinv * r.grad;
        double slope = dir.dot(r.grad);
        if (!(slope < 0.0)) {
            hinv.setIdentity();
            dir = -r.grad;
            slope = dir.dot(r.grad);
        }
        double t = 1.0;
        const double dmax = dir.lpNorm<Eigen::Infinity>();
        if (dmax > opt.max_step) t = opt.max_step / dmax;

        Eigen::VectorXd x_new(k), g_new(k);
        double f_new = kInf;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            x_new = r.x + t * dir;
            f_new = safe_eval(f, x_new, &g_new);
            if (f_new <= r.value + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) {
            // Backtracking exhausted: either at the optimum to rounding or the
            // curvature model is bad. Retry once along steepest descent.
            if (!hinv.isIdentity()) {
                hinv.setIdentity();
                continue;
            }
            run.converged = gnorm < 1e3 * opt.grad_tol;
            break;
        }
        const Eigen::VectorXd s = x_new - r.x;
        const Eigen::VectorXd y = g_new - r.grad;
        const double f_old = r.value;
        r.x = x_new;
        r.value = f_new;
        r.grad = g_new;
        r.iterations = it;
        r.trace.back().step = s.lpNorm<Eigen::Infinity>();

        const double sy = s.dot(y);
        if (sy > 1e-12 * s.norm() * y.norm()) {
            if (!scaled) {
                hinv *= sy / y.dot(y);
                scaled = true;
            }
            const double rho = 1.0 / sy;
            const Eigen::MatrixXd v = Eigen::MatrixXd::Identity(k, k) - rho * s * y.transpose();
            hinv = v * hinv * v.transpose() + rho * s * s.transpose();
        }
        if (std::fabs(f_old - f_new) <= opt.rel_f_tol * std::max(1.0, std::fabs(f_new))) {
            if (++stalls >= 3) {
                run.converged = r.grad.lpNorm<Eigen::Infinity>() < 1e3 * opt.grad_tol;
                break;
            }
        } else {
            stalls = 0;
        }
    }
    if (!run.converged && r.grad.lpNorm<Eigen::Infinity>() < opt.grad_tol) run.converged = true;
    return run;
}

}  // namespace

Result minimize(const Objective& f, const Eigen::VectorXd& x0, const Options& opt) {
    Run best = bfgs(f, x0, opt);
    Rng rng(opt.seed);
    for (int rs = 0; rs < opt.restarts; ++rs) {
        Eigen::VectorXd start = x0;
        for (Eigen::Index i = 0; i < start.size(); ++i) start[i] += opt.jitter * rng.normal();
        Run run = bfgs(f, start, opt);
        const bool better = run.converged && (!best.converged || run.result.value < best.result.value - 1e-10);
        if (better) best = std::move(run);
    }
    if (!best.converged) {
        throw ConvergenceError("quasi-Newton optimizer did not converge", best.result.trace);
    }
    return best.result;
}

Eigen::VectorXd fd_gradient(const ScalarFn& f, const Eigen::VectorXd& x, double rel_step) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = rel_step * std::max(1.0, std::fabs(x[i]));
        xp[i] = x[i] + h;
        const double fp = f(xp);
        xp[i] = x[i] - h;
        const double fm = f(xp);
        xp[i] = x[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

Objective with_fd_gradient(ScalarFn f, double rel_step) {
    return [f = std::move(f), rel_step](const Eigen::VectorXd& x, Eigen::VectorXd* g) {
        const double v = f(x);
        if (g && std::isfinite(v)) *g = fd_gradient(f, x, rel_step);
        return v;
    };
}

Eigen::MatrixXd hessian(const Objective& f, const Eigen::VectorXd& x, bool use_gradient) {
    const Eigen::Index k = x.size();
    Eigen::MatrixXd h(k, k);
    Eigen::VectorXd step(k);
    for (Eigen::Index i = 0; i < k; ++i) step[i] = std::max(1e-5, 1e-4 * std::fabs(x[i]));
    if (use_gradient) {
        Eigen::VectorXd gp(k), gm(k);
        Eigen::VectorXd xp = x;
        for (Eigen::Index i = 0; i < k; ++i) {
            xp[i] = x[i] + step[i];
            f(xp, &gp);
            xp[i] = x[i] - step[i];
            f(xp, &gm);
            xp[i] = x[i];
            h.col(i) = (gp - gm) / (2.0 * step[i]);
        }
        return 0.5 * (h + h.transpose());
    }
    const double f0 = f(x, nullptr);
    Eigen::VectorXd xp = x;
    for (Eigen::Index i = 0; i < k; ++i) {
        xp[i] = x[i] + step[i];
        const double fp = f(xp, nullptr);
        xp[i] = x[i] - step[i];
        const double fm = f(xp, nullptr);
        xp[i] = x[i];
        h(i, i) = (fp - 2.0 * f0 + fm) / (step[i] * step[i]);
        for (Eigen::Index j = 0; j < i; ++j) {
            auto at = [&](double si, double sj) {
                Eigen::VectorXd z = x;
                z[i] += si * step[i];
                z[j] += sj * step[j];
                return f(z, nullptr);
            };
            h(i, j) = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * step[i] * step[j]);
            h(j, i) = h(i, j);
        }
    }
    return h;
}

Covariance invert_hessian(const Eigen::MatrixXd& h) {
    Covariance out;
    Eigen::LLT<Eigen::MatrixXd> llt(h);
    if (llt.info() == Eigen::Success) {
        out.cov = llt.solve(Eigen::MatrixXd::Identity(h.rows(), h.cols()));
        return out;
    }
    out.singular = true;
    out.cov = h.completeOrthogonalDecomposition().pseudoInverse();
    return out;
}

}  // namespace mglcop::optim
