#include "mglcop/regression.hpp"

#include "mglcop/copula.hpp"
#include "mglcop/evcopula.hpp"
#include "mglcop/optim.hpp"
#include "mglcop/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mglcop::regression {

namespace sf = mglcop::specfun;

namespace {

double softplus(double z) {
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void check_dims(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    if (x.rows() != pseudo.n()) throw DimensionError("design matrix rows do not match the pseudo-sample");
    if (x.cols() != beta.size()) throw DimensionError("design matrix columns do not match beta");
    if (pseudo.d() < 2) throw DimensionError("copula regression needs at least two columns");
}

void check_bivariate(const PseudoSample& pseudo) {
    if (pseudo.d() != 2) throw DimensionError("this copula regression is bivariate only");
}

// Row term of the survival MGL log-density and its derivative in a = 1/delta.
double surv_row(const double* u, Eigen::Index stride, int d, double a, bool reflect, double* d_da) {
    const sf::BetaShape s{0.5, a};
    double sum_sp = 0.0;
    double m = 0.0;  // running log-sum-exp of (0, z_1, ..., z_d)
    double zs[64];
    std::vector<double> z_heap;
    double* z = zs;
    if (d > 64) {
        z_heap.resize(d);
        z = z_heap.data();
    }
    for (int j = 0; j < d; ++j) {
        const double uj = copula::clamp_unit(u[j * stride]);
        z[j] = reflect ? sf::inv_inc_beta_logit(1.0 - uj, uj, s) : sf::inv_inc_beta_logit(uj, 1.0 - uj, s);
        sum_sp += softplus(z[j]);
        m = std::max(m, z[j]);
    }
    double lse;
    if (m == 0.0) {
        double acc = 0.0;
        for (int j = 0; j < d; ++j) acc += std::exp(z[j]);
        lse = std::log1p(acc);
    } else {
        double acc = std::exp(-m);
        for (int j = 0; j < d; ++j) acc += std::exp(z[j] - m);
        lse = m + std::log(acc);
    }
    const double hd = 0.5 * d;
    const double ll = sf::log_gamma_ratio(a, hd) - d * sf::log_gamma_ratio(a, 0.5) + (a + 0.5) * sum_sp - (a + hd) * lse;
    if (d_da) {
        double dz_terms = 0.0;
        for (int j = 0; j < d; ++j) {
            const double dz = sf::d_inv_inc_beta_logit_dshape(z[j], s);
            const double sig = 1.0 / (1.0 + std::exp(-z[j]));
            dz_terms += dz * ((a + 0.5) * sig - (a + hd) * std::exp(z[j] - lse));
        }
        *d_da = sf::digamma_diff(a, hd) - d * sf::digamma_diff(a, 0.5) + (sum_sp - lse) + dz_terms;
    }
    return ll;
}

double mgl_family_loglik(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                         Eigen::VectorXd* grad, bool reflect) {
    check_dims(pseudo, x, beta);
    const Eigen::VectorXd eta = x * beta;
    const int d = static_cast<int>(pseudo.d());
    double total = 0.0;
    if (grad) *grad = Eigen::VectorXd::Zero(beta.size());
    for (Eigen::Index i = 0; i < pseudo.n(); ++i) {
        const double a = std::exp(-eta[i]);
        if (!(a > 1e-200 && a < 1e200)) throw NonFiniteError("copula parameter out of range", i);
        double d_da = 0.0;
        const double li = surv_row(&pseudo.values(i, 0), pseudo.values.outerStride(), d, a, reflect, grad ? &d_da : nullptr);
        if (!std::isfinite(li) || (grad && !std::isfinite(d_da))) throw NonFiniteError("non-finite log-likelihood", i);
        total += li;
        // da/d beta = -a x_i
        if (grad) grad->noalias() -= (d_da * a) * x.row(i).transpose();
    }
    return total;
}

template <class RowFn>
double bivariate_loglik(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, Family family,
                        RowFn row) {
    check_dims(pseudo, x, beta);
    check_bivariate(pseudo);
    const Eigen::VectorXd eta = x * beta;
    double total = 0.0;
    for (Eigen::Index i = 0; i < pseudo.n(); ++i) {
        const double li = row(pseudo.values(i, 0), pseudo.values(i, 1), delta_from_eta(family, eta[i]));
        if (!std::isfinite(li)) throw NonFiniteError("non-finite log-likelihood", i);
        total += li;
    }
    return total;
}

}  // namespace

double delta_from_eta(Family family, double eta) {
    const double e = std::exp(eta);
    return family == Family::gumbel ? 1.0 + e : e;
}

Eigen::VectorXd fitted_delta(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    const Eigen::VectorXd eta = x * beta;
    Eigen::VectorXd out(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) out[i] = delta_from_eta(family, eta[i]);
    return out;
}

double loglik_surv_mgl_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                           Eigen::VectorXd* grad) {
    return mgl_family_loglik(pseudo, x, beta, grad, false);
}

Eigen::VectorXd grad_surv_mgl_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    Eigen::VectorXd g;
    mgl_family_loglik(pseudo, x, beta, &g, false);
    return g;
}

double loglik_surv_mgl_ev_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    return bivariate_loglik(pseudo, x, beta, Family::surv_mgl_ev,
                            [](double u1, double u2, double delta) { return ev::ev_log_pdf(u1, u2, delta); });
}

double loglik_gumbel_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
    return bivariate_loglik(pseudo, x, beta, Family::gumbel,
                            [](double u1, double u2, double delta) { return copula::gumbel_log_pdf(u1, u2, delta); });
}

double loglik_reg(Family family, const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                  Eigen::VectorXd* grad) {
    switch (family) {
    case Family::surv_mgl:
        return mgl_family_loglik(pseudo, x, beta, grad, false);
    case Family::mgl:
        return mgl_family_loglik(pseudo, x, beta, grad, true);
    case Family::surv_mgl_ev:
    case Family::gumbel: {
        const optim::ScalarFn f = [&](const Eigen::VectorXd& b) {
            return family == Family::gumbel ? loglik_gumbel_reg(pseudo, x, b) : loglik_surv_mgl_ev_reg(pseudo, x, b);
        };
        const double v = f(beta);
        if (grad) *grad = optim::fd_gradient(f, beta);
        return v;
    }
    default:
        throw ValidationError("copula regression supports mgl, surv-mgl, surv-mgl-ev and gumbel");
    }
}

Eigen::MatrixXd intercept_design(std::size_t n) {
    return Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), 1);
}

namespace {

void check_design(const Eigen::MatrixXd& x) {
    if (!x.allFinite()) throw ValidationError("design matrix has non-finite entries");
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < x.cols()) throw ValidationError("design matrix is not of full column rank");
}

RegressionFit finish_fit(const optim::Objective& nll, const optim::Result& res, const Eigen::MatrixXd& x, Family family,
                         std::size_t n, bool covariance, bool analytic) {
    RegressionFit fit;
    fit.family = family;
    fit.beta = res.x;
    fit.loglik = -res.value;
    fit.n = n;
    const double k = static_cast<double>(res.x.size());
    fit.aic = -2.0 * fit.loglik + 2.0 * k;
    fit.bic = -2.0 * fit.loglik + k * std::log(static_cast<double>(n));
    fit.fitted_delta = fitted_delta(family, x, res.x);
    fit.iterations = res.iterations;
    fit.se = Eigen::VectorXd::Constant(res.x.size(), std::numeric_limits<double>::quiet_NaN());
    if (covariance) {
        const optim::Covariance c = optim::invert_hessian(optim::hessian(nll, res.x, analytic));
        fit.cov = c.cov;
        fit.singular_hessian = c.singular;
        for (Eigen::Index j = 0; j < res.x.size(); ++j) fit.se[j] = std::sqrt(std::max(0.0, c.cov(j, j)));
    }
    return fit;
}

optim::Options optimizer_options(const RegOptions& opt) {
    optim::Options o;
    o.restarts = opt.restarts;
    o.jitter = opt.jitter;
    o.seed = opt.seed;
    o.grad_tol = 1e-6;
    return o;
}

}  // namespace

RegressionFit fit_copula_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, Family family, const RegOptions& opt) {
    if (family != Family::mgl && family != Family::surv_mgl && family != Family::surv_mgl_ev && family != Family::gumbel)
        throw ValidationError("fit_copula_reg: unsupported family " + to_string(family));
    if (x.rows() != pseudo.n()) throw DimensionError("design matrix rows do not match the pseudo-sample");
    if (family == Family::surv_mgl_ev || family == Family::gumbel) check_bivariate(pseudo);
    check_design(x);
    const Eigen::VectorXd b0 = opt.init ? *opt.init : Eigen::VectorXd::Zero(x.cols());
    if (b0.size() != x.cols()) throw DimensionError("initial beta has the wrong length");
    const bool analytic = family == Family::mgl || family == Family::surv_mgl;
    optim::Objective nll;
    if (analytic) {
        nll = [&](const Eigen::VectorXd& b, Eigen::VectorXd* g) {
            const double v = loglik_reg(family, pseudo, x, b, g);
            if (g) *g = -*g;
            return -v;
        };
    } else {
        nll = optim::with_fd_gradient([&](const Eigen::VectorXd& b) { return -loglik_reg(family, pseudo, x, b); });
    }
    const optim::Result res = optim::minimize(nll, b0, optimizer_options(opt));
    return finish_fit(nll, res, x, family, static_cast<std::size_t>(pseudo.n()), opt.covariance, analytic);
}

double family_log_pdf(Family family, double u1, double u2, double delta) {
    switch (family) {
    case Family::mgl:
        return copula::mgl_log_pdf({u1, u2}, delta);
    case Family::surv_mgl:
        return copula::surv_mgl_log_pdf({u1, u2}, delta);
    case Family::surv_mgl_ev:
        return ev::ev_log_pdf(u1, u2, delta);
    case Family::gumbel:
        return copula::gumbel_log_pdf(u1, u2, delta);
    default:
        throw ValidationError("unsupported family " + to_string(family));
    }
}

double family_h(Family family, double target, double given, double delta) {
    if (target <= 0.0) return 0.0;
    if (target >= 1.0) return 1.0;
    switch (family) {
    case Family::mgl:
        return copula::h_forward(target, given, delta);
    case Family::surv_mgl:
        return copula::surv_h_forward(target, given, delta);
    case Family::surv_mgl_ev:
        return ev::ev_h(target, given, delta);
    case Family::gumbel:
        return copula::gumbel_h(target, given, delta);
    default:
        throw ValidationError("unsupported family " + to_string(family));
    }
}

double mixed_loglik(const std::vector<double>& y1, const std::vector<double>& y2, const GlmgaParams& m1,
                    const margins::SplicedMargin& m2, Family family, const Eigen::VectorXd& delta) {
    if (y1.size() != y2.size() || static_cast<Eigen::Index>(y1.size()) != delta.size())
        throw DimensionError("mixed_loglik: response and parameter lengths differ");
    margins::validate(m2);
    double total = 0.0;
    for (std::size_t i = 0; i < y1.size(); ++i) {
        const double f1 = glmga_log_pdf(y1[i], m1);
        const double u1 = glmga_cdf(y1[i], m1);
        double term;
        if (y2[i] <= m2.u) {
            const double hi = family_h(family, margins::spliced_cdf(y2[i], m2), u1, delta[i]);
            const double lo = y2[i] >= 1.0 ? family_h(family, margins::spliced_cdf(y2[i] - 1.0, m2), u1, delta[i]) : 0.0;
            term = f1 + std::log(hi - lo);
        } else {
            const double u2 = margins::spliced_cdf(y2[i], m2);
            term = f1 + std::log(margins::spliced_pdf(y2[i], m2)) + family_log_pdf(family, u1, u2, delta[i]);
        }
        if (!std::isfinite(term)) throw NonFiniteError("non-finite mixed log-likelihood", static_cast<long>(i));
        total += term;
    }
    return total;
}

RegressionFit fit_mixed_reg(const std::vector<double>& y1, const std::vector<double>& y2, const GlmgaParams& m1,
                            const margins::SplicedMargin& m2, const Eigen::MatrixXd& x, Family family,
                            const RegOptions& opt) {
    if (family != Family::mgl && family != Family::surv_mgl && family != Family::surv_mgl_ev && family != Family::gumbel)
        throw ValidationError("fit_mixed_reg: unsupported family " + to_string(family));
    if (static_cast<std::size_t>(x.rows()) != y1.size()) throw DimensionError("design matrix rows do not match the data");
    check_design(x);
    const Eigen::VectorXd b0 = opt.init ? *opt.init : Eigen::VectorXd::Zero(x.cols());
    const optim::Objective nll = optim::with_fd_gradient(
        [&](const Eigen::VectorXd& b) { return -mixed_loglik(y1, y2, m1, m2, family, fitted_delta(family, x, b)); });
    const optim::Result res = optim::minimize(nll, b0, optimizer_options(opt));
    return finish_fit(nll, res, x, family, y1.size(), opt.covariance, false);
}

IfmResult ifm_fit(const std::vector<double>& y1, const std::vector<double>& y2, int u, const Eigen::MatrixXd& x,
                  Family family, const RegOptions& opt, margins::NbVariance variance) {
    IfmResult r;
    r.margin1 = glmga_fit(y1);
    r.margin2 = margins::spliced_fit(y2, u, variance);
    r.copula = fit_mixed_reg(y1, y2, r.margin1.params, r.margin2.margin, x, family, opt);
    return r;
}

}  // namespace mglcop::regression
