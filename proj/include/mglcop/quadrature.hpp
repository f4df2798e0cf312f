#pragma once

#include <functional>
#include <vector>

namespace mglcop::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [lo, hi].
Rule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

struct Result {
    double value;
    double error;
};

// Adaptive Gauss-Kronrod on [lo, hi] split at the given interior points.
// Throws QuadratureError if the error estimate stays above `abs_tol`.
Result adaptive(const std::function<double(double)>& f, double lo, double hi,
                const std::vector<double>& breaks = {}, double rel_tol = 1e-12, double abs_tol = 1e-8);

// Integral over [lo, +inf) by the exp-sinh rule.
Result to_infinity(const std::function<double(double)>& f, double lo, double rel_tol = 1e-10);

// Tensor-product Gauss-Legendre on a rectangle.
double tensor2(const std::function<double(double, double)>& f, int n, double x0, double x1, double y0, double y1);

}  // namespace mglcop::quad
