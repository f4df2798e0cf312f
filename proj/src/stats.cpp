#include "mglcop/stats.hpp"

#include "mglcop/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mglcop::stats {
namespace {

void need(std::size_t n, std::size_t min, const char* fn) {
    if (n < min) throw ValidationError(std::string(fn) + ": not enough observations");
}

// Counts swaps while merge-sorting v; returns the number of inversions.
long long merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    long long swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
    std::size_t i = lo, j = mid, k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += static_cast<long long>(mid - i);
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) buf[k++] = v[i++];
    while (j < hi) buf[k++] = v[j++];
    std::copy(buf.begin() + lo, buf.begin() + hi, v.begin() + lo);
    return swaps;
}

// Number of tied pairs in a sorted vector.
long long tied_pairs(const std::vector<double>& v) {
    long long t = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= v.size(); ++i) {
        if (i < v.size() && v[i] == v[i - 1]) {
            ++run;
        } else {
            t += static_cast<long long>(run) * (run - 1) / 2;
            run = 1;
        }
    }
    return t;
}

}  // namespace

double mean(const std::vector<double>& x) {
    need(x.size(), 1, "mean");
    return std::accumulate(x.begin(), x.end(), 0.0) / x.size();
}

double variance(const std::vector<double>& x) {
    need(x.size(), 2, "variance");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / (x.size() - 1);
}

double skewness(const std::vector<double>& x) {
    need(x.size(), 3, "skewness");
    const double m = mean(x);
    double m2 = 0.0, m3 = 0.0;
    for (double v : x) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    m2 /= x.size();
    m3 /= x.size();
    return m3 / std::pow(m2, 1.5);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("pearson: length mismatch");
    need(x.size(), 2, "pearson");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double quantile(std::vector<double> x, double p) {
    need(x.size(), 1, "quantile");
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("quantile: p outside [0,1]");
    std::sort(x.begin(), x.end());
    const double h = (x.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, x.size() - 1);
    return x[lo] + (h - lo) * (x[hi] - x[lo]);
}

double median(std::vector<double> x) {
    return quantile(std::move(x), 0.5);
}

double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DimensionError("kendall_tau: length mismatch");
    need(x.size(), 2, "kendall_tau");
    const std::size_t n = x.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = x[idx[i]];
        ys[i] = y[idx[i]];
    }
    const long long n0 = static_cast<long long>(n) * (n - 1) / 2;
    const long long tx = tied_pairs(xs);
    // pairs tied in both coordinates
    long long txy = 0;
    {
        std::size_t run = 1;
        for (std::size_t i = 1; i <= n; ++i) {
            if (i < n && xs[i] == xs[i - 1] && ys[i] == ys[i - 1]) {
                ++run;
            } else {
                txy += static_cast<long long>(run) * (run - 1) / 2;
                run = 1;
            }
        }
    }
    std::vector<double> buf(n);
    const long long discordant = merge_count(ys, buf, 0, n);
    const long long ty = tied_pairs(ys);
    const long long concordant = n0 - tx - ty + txy - discordant;
    return static_cast<double>(concordant - discordant) / static_cast<double>(n0);
}

double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
    need(x.size(), 1, "ks_statistic");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double f = cdf(x[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

double cvm_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
    need(x.size(), 1, "cvm_statistic");
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double s = 1.0 / (12.0 * n);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = cdf(x[i]) - (2.0 * i + 1.0) / (2.0 * n);
        s += d * d;
    }
    return s;
}

double ad_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
    need(x.size(), 1, "ad_statistic");
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    constexpr double lo = 1e-300;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double fi = std::clamp(cdf(x[i]), lo, 1.0 - 1e-16);
        const double fj = std::clamp(cdf(x[n - 1 - i]), lo, 1.0 - 1e-16);
        s += (2.0 * i + 1.0) * (std::log(fi) + std::log1p(-fj));
    }
    return -static_cast<double>(n) - s / n;
}

double ks_uniform(std::vector<double> u) {
    return ks_statistic(std::move(u), [](double v) { return std::clamp(v, 0.0, 1.0); });
}

}  // namespace mglcop::stats
