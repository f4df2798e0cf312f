#pragma once

#include <Eigen/Dense>

#include <vector>

namespace mglcop::regression {

// Natural cubic spline basis with intercept, the same column space as R's
// splines::ns(x, knots, intercept = TRUE). Linear beyond the boundary
// knots. Returns interior.size() + 2 columns.
Eigen::MatrixXd ns_basis(const std::vector<double>& x, const std::vector<double>& interior, double lo, double hi);
// Boundary knots at the range of x.
Eigen::MatrixXd ns_basis(const std::vector<double>& x, const std::vector<double>& interior);

// Type-7 sample quantiles of x at the given probabilities.
std::vector<double> quantile_knots(const std::vector<double>& x, const std::vector<double>& probs);

}  // namespace mglcop::regression
