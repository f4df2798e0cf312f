#include "mglcop/spline.hpp"

#include "mglcop/errors.hpp"
#include "mglcop/stats.hpp"

#include <algorithm>
#include <cmath>

namespace mglcop::regression {

namespace {

constexpr int kOrder = 4;

// All B-splines of order k on knot vector t at x, or their r-th derivatives.
// Intervals are half open except the last non-empty one.
std::vector<double> bsplines(const std::vector<double>& t, int k, double x, int r) {
    const int nb = static_cast<int>(t.size()) - k;
    if (r > 0) {
        const std::vector<double> lower = bsplines(t, k - 1, x, r - 1);
        std::vector<double> out(nb, 0.0);
        for (int i = 0; i < nb; ++i) {
            const double d1 = t[i + k - 1] - t[i];
            const double d2 = t[i + k] - t[i + 1];
            double v = 0.0;
            if (d1 > 0.0) v += lower[i] / d1;
            if (d2 > 0.0) v -= lower[i + 1] / d2;
            out[i] = (k - 1) * v;
        }
        return out;
    }
    const int n1 = static_cast<int>(t.size()) - 1;
    std::vector<double> b(n1, 0.0);
    int last = n1 - 1;
    while (last > 0 && !(t[last] < t[last + 1])) --last;
    for (int i = 0; i < n1; ++i) {
        if ((t[i] <= x && x < t[i + 1]) || (i == last && x == t[i + 1])) b[i] = 1.0;
    }
    for (int m = 2; m <= k; ++m) {
        std::vector<double> nb_m(n1 - m + 1, 0.0);
        for (int i = 0; i < n1 - m + 1; ++i) {
            const double d1 = t[i + m - 1] - t[i];
            const double d2 = t[i + m] - t[i + 1];
            double v = 0.0;
            if (d1 > 0.0) v += (x - t[i]) / d1 * b[i];
            if (d2 > 0.0) v += (t[i + m] - x) / d2 * b[i + 1];
            nb_m[i] = v;
        }
        b = std::move(nb_m);
    }
    b.resize(nb);
    return b;
}

}  // namespace

Eigen::MatrixXd ns_basis(const std::vector<double>& x, const std::vector<double>& interior, double lo, double hi) {
    if (!(lo < hi)) throw ValidationError("ns_basis: boundary knots must satisfy lo < hi");
    for (std::size_t i = 0; i < interior.size(); ++i) {
        if (!(interior[i] > lo && interior[i] < hi)) throw ValidationError("ns_basis: interior knots must lie strictly inside the boundary");
        if (i > 0 && !(interior[i] > interior[i - 1])) throw ValidationError("ns_basis: interior knots must be strictly increasing");
    }
    std::vector<double> t(kOrder, lo);
    t.insert(t.end(), interior.begin(), interior.end());
    t.insert(t.end(), kOrder, hi);
    const int nb = static_cast<int>(t.size()) - kOrder;

    Eigen::MatrixXd basis(static_cast<Eigen::Index>(x.size()), nb);
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::vector<double> row;
        if (x[i] < lo || x[i] > hi) {
            const double edge = x[i] < lo ? lo : hi;
            row = bsplines(t, kOrder, edge, 0);
            const std::vector<double> slope = bsplines(t, kOrder, edge, 1);
            for (int j = 0; j < nb; ++j) row[j] += (x[i] - edge) * slope[j];
        } else {
            row = bsplines(t, kOrder, x[i], 0);
        }
        for (int j = 0; j < nb; ++j) basis(static_cast<Eigen::Index>(i), j) = row[j];
    }

    // Project onto the null space of the second derivative at both boundaries.
    Eigen::MatrixXd constraint(nb, 2);
    const std::vector<double> c0 = bsplines(t, kOrder, lo, 2);
    const std::vector<double> c1 = bsplines(t, kOrder, hi, 2);
    for (int j = 0; j < nb; ++j) {
        constraint(j, 0) = c0[j];
        constraint(j, 1) = c1[j];
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(constraint);
    const Eigen::MatrixXd qty = qr.householderQ().transpose() * basis.transpose();
    return qty.bottomRows(nb - 2).transpose();
}

Eigen::MatrixXd ns_basis(const std::vector<double>& x, const std::vector<double>& interior) {
    if (x.size() < 2) throw ValidationError("ns_basis: need at least two points");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return ns_basis(x, interior, *lo, *hi);
}

std::vector<double> quantile_knots(const std::vector<double>& x, const std::vector<double>& probs) {
    std::vector<double> out;
    for (double p : probs) out.push_back(stats::quantile(x, p));
    return out;
}

}  // namespace mglcop::regression
