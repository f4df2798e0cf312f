#include "mglcop/quadrature.hpp"

#include "mglcop/errors.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace mglcop::quad {
namespace {

// Newton iteration on P_n from the Chebyshev-like initial guesses.
Rule legendre_unit(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0;
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::fabs(z - z1) < 1e-15) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[n - 1 - i] = r.weights[i];
    }
    return r;
}

}  // namespace

Rule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    static std::mutex mtx;
    static std::map<int, Rule> cache;
    Rule unit;
    {
        std::lock_guard<std::mutex> lock(mtx);
        auto it = cache.find(n);
        if (it == cache.end()) it = cache.emplace(n, legendre_unit(n)).first;
        unit = it->second;
    }
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (int i = 0; i < n; ++i) {
        unit.nodes[i] = mid + half * unit.nodes[i];
        unit.weights[i] *= half;
    }
    return unit;
}

Result adaptive(const std::function<double(double)>& f, double lo, double hi, const std::vector<double>& breaks,
                double rel_tol, double abs_tol) {
    using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
    struct Panel {
        double a, b, value, error;
        bool operator<(const Panel& o) const { return error < o.error; }
    };
    // Non-adaptive call: boost reports |K - G| for the rule mapped to [-1,1],
    // so the panel error is that times the half-width.
    auto eval = [&](double a, double b) {
        double err = 0.0;
        const double v = gk::integrate(f, a, b, 0, 0.0, &err);
        return Panel{a, b, v, err * 0.5 * (b - a)};
    };
    std::vector<double> pts{lo};
    for (double b : breaks) {
        if (b > lo && b < hi) pts.push_back(b);
    }
    pts.push_back(hi);
    std::sort(pts.begin(), pts.end());
    std::priority_queue<Panel> heap;
    double value = 0.0;
    double error = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        if (pts[k + 1] <= pts[k]) continue;
        Panel p = eval(pts[k], pts[k + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    const double floor_tol = 1e-3 * abs_tol;
    for (int split = 0; split < 4000 && !heap.empty(); ++split) {
        if (error <= std::max(rel_tol * std::fabs(value), floor_tol)) break;
        const Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = eval(worst.a, mid);
        const Panel right = eval(mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the running updates
    value = 0.0;
    error = 0.0;
    for (; !heap.empty(); heap.pop()) {
        value += heap.top().value;
        error += heap.top().error;
    }
    if (!std::isfinite(value)) throw QuadratureError("adaptive quadrature produced a non-finite value");
    if (error > std::max(abs_tol, rel_tol * std::fabs(value))) {
        throw QuadratureError("adaptive quadrature did not reach tolerance (error estimate " + std::to_string(error) +
                              ")");
    }
    return {value, error};
}

Result to_infinity(const std::function<double(double)>& f, double lo, double rel_tol) {
    boost::math::quadrature::exp_sinh<double> integrator;
    double err = 0.0;
    double l1 = 0.0;
    const double v = integrator.integrate([&](double x) { return f(lo + x); }, 0.0,
                                          std::numeric_limits<double>::infinity(), rel_tol, &err, &l1);
    if (!std::isfinite(v)) throw QuadratureError("exp-sinh quadrature produced a non-finite value");
    return {v, err};
}

double tensor2(const std::function<double(double, double)>& f, int n, double x0, double x1, double y0, double y1) {
    const Rule rx = gauss_legendre(n, x0, x1);
    const Rule ry = gauss_legendre(n, y0, y1);
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) row += ry.weights[j] * f(rx.nodes[i], ry.nodes[j]);
        s += rx.weights[i] * row;
    }
    return s;
}

}  // namespace mglcop::quad
