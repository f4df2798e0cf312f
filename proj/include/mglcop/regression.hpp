#pragma once

#include "mglcop/errors.hpp"
#include "mglcop/glmga.hpp"
#include "mglcop/margins.hpp"
#include "mglcop/spline.hpp"
#include "mglcop/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace mglcop::regression {

// delta_i from the linear predictor: exp(eta) for the MGL families,
// 1 + exp(eta) for Gumbel.
double delta_from_eta(Family family, double eta);
Eigen::VectorXd fitted_delta(Family family, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta);

// sum_i log c(u_i; delta_i) for the survival MGL copula with
// log delta_i = x_i' beta. Fills `grad` (d/d beta) when non-null.
double loglik_surv_mgl_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                           Eigen::VectorXd* grad = nullptr);
Eigen::VectorXd grad_surv_mgl_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta);

// Bivariate only.
double loglik_surv_mgl_ev_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta);
double loglik_gumbel_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta);

// Dispatch on family (mgl, surv_mgl, surv_mgl_ev, gumbel).
double loglik_reg(Family family, const PseudoSample& pseudo, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                  Eigen::VectorXd* grad = nullptr);

struct RegOptions {
    std::optional<Eigen::VectorXd> init;  // default beta = 0
    int restarts = 3;
    double jitter = 0.25;
    bool covariance = true;
    std::uint64_t seed = 20240101;
};

struct RegressionFit {
    Family family = Family::surv_mgl;
    Eigen::VectorXd beta;
    Eigen::MatrixXd cov;
    Eigen::VectorXd se;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    Eigen::VectorXd fitted_delta;
    bool singular_hessian = false;
    int iterations = 0;
    std::size_t n = 0;
};

RegressionFit fit_copula_reg(const PseudoSample& pseudo, const Eigen::MatrixXd& x, Family family,
                             const RegOptions& opt = {});

// Column of ones.
Eigen::MatrixXd intercept_design(std::size_t n);

// Copula log-density and h_{2|1}(target | given) for the regression families.
double family_log_pdf(Family family, double u1, double u2, double delta);
double family_h(Family family, double target, double given, double delta);

// Joint log-likelihood of a continuous GLMGA response y1 and a spliced
// response y2, with per-row copula parameters. Rows with y2 <= u use the
// h-function difference, rows above u the density product.
double mixed_loglik(const std::vector<double>& y1, const std::vector<double>& y2, const GlmgaParams& m1,
                    const margins::SplicedMargin& m2, Family family, const Eigen::VectorXd& delta);

RegressionFit fit_mixed_reg(const std::vector<double>& y1, const std::vector<double>& y2, const GlmgaParams& m1,
                            const margins::SplicedMargin& m2, const Eigen::MatrixXd& x, Family family,
                            const RegOptions& opt = {});

struct IfmResult {
    GlmgaFit margin1;
    margins::SplicedFit margin2;
    RegressionFit copula;
};

// Step 1 fits the GLMGA margin of y1 and the spliced margin of y2
// (threshold u) separately; step 2 maximizes the mixed likelihood over the
// copula regression coefficients with the margins held fixed.
IfmResult ifm_fit(const std::vector<double>& y1, const std::vector<double>& y2, int u, const Eigen::MatrixXd& x,
                  Family family, const RegOptions& opt = {},
                  margins::NbVariance variance = margins::NbVariance::quadratic);

}  // namespace mglcop::regression
