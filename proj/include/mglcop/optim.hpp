#pragma once

#include "mglcop/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace mglcop::optim {

// Objective to minimize. When `grad` is non-null the callee fills it.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd* grad)>;
using ScalarFn = std::function<double(const Eigen::VectorXd& x)>;

struct Options {
    int max_iter = 500;
    double grad_tol = 1e-7;     // on the infinity norm of the gradient
    double rel_f_tol = 1e-14;   // relative objective change regarded as stalled
    double max_step = 4.0;      // cap on the infinity norm of a trial step
    int restarts = 0;           // extra jittered starts; best optimum kept
    double jitter = 0.25;
    std::uint64_t seed = 20240101;
};

struct Result {
    Eigen::VectorXd x;
    double value = 0.0;
    Eigen::VectorXd grad;
    int iterations = 0;
    std::vector<IterationRecord> trace;
};

// Quasi-Newton (BFGS) with Armijo backtracking. Throws ConvergenceError
// carrying the iteration trace if no start converges.
Result minimize(const Objective& f, const Eigen::VectorXd& x0, const Options& opt = {});

// Wraps a value-only function so that gradients come from central differences.
Objective with_fd_gradient(ScalarFn f, double rel_step = 1e-6);

Eigen::VectorXd fd_gradient(const ScalarFn& f, const Eigen::VectorXd& x, double rel_step = 1e-6);

// Central-difference Hessian, step max(1e-5, 1e-4 |x_i|). Uses the gradient
// when the objective provides one, function values otherwise.
Eigen::MatrixXd hessian(const Objective& f, const Eigen::VectorXd& x, bool use_gradient);

struct Covariance {
    Eigen::MatrixXd cov;
    bool singular = false;
};
// Inverse of a (negative log-likelihood) Hessian; flags a non positive-definite matrix.
Covariance invert_hessian(const Eigen::MatrixXd& h);

}  // namespace mglcop::optim
