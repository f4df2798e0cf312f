#include <doctest.h>

#include "mglcop/copula.hpp"
#include "mglcop/errors.hpp"
#include "mglcop/mgl.hpp"
#include "mglcop/quadrature.hpp"
#include "mglcop/stats.hpp"

#include <cmath>
#include <random>

using namespace mglcop;
using namespace mglcop::copula;

namespace {

std::vector<double> column(const Eigen::MatrixXd& m, int j) {
    return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

// Gauss-Legendre on (0,1) with nodes graded toward both ends
quad::Rule graded(int n) {
    quad::Rule r = quad::gauss_legendre(n, 0.0, 1.0);
    for (int i = 0; i < n; ++i) {
        const double x = r.nodes[i];
        r.weights[i] *= 30.0 * x * x * (1.0 - x) * (1.0 - x);
        r.nodes[i] = x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
    }
    return r;
}

}  // namespace

TEST_SUITE("copula") {

TEST_CASE("t function") {
    CHECK(t_fn(1.0 - 1e-10, 1.0) < 1e-9);
    CHECK(t_fn(0.5, 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    for (double delta : {0.1, 1.0, 5.0}) {
        double prev = INFINITY;
        for (int i = 1; i <= 100; ++i) {
            const double t = t_fn(i / 101.0, delta);
            CHECK(t >= 0.0);
            CHECK(t < prev);
            prev = t;
        }
    }
}

TEST_CASE("cdf: margins, grounding and frozen values") {
    for (double delta : {0.2, 1.0, 4.0}) {
        for (double u : {0.1, 0.5, 0.9}) {
            CHECK(std::fabs(mgl_cdf({u, 1.0}, delta) - u) < 1e-8);
            CHECK(std::fabs(mgl_cdf({1.0, u}, delta) - u) < 1e-8);
            CHECK(std::fabs(mgl_cdf({u, 1.0 - 1e-12}, delta) - u) < 1e-8);
            CHECK(mgl_cdf({u, 0.0}, delta) == 0.0);
        }
    }
    // mpmath, 30 digits
    CHECK(mgl_cdf({0.5, 0.5}, 1.0) == doctest::Approx(0.295167235300866548).epsilon(1e-11));
    CHECK(mgl_cdf({0.3, 0.7}, 2.0) == doctest::Approx(0.265114785719883131).epsilon(1e-11));
    CHECK(mgl_cdf({0.2, 0.4, 0.6}, 0.5) == doctest::Approx(0.0769280203184254745).epsilon(1e-10));
    CHECK_THROWS_AS(mgl_cdf({0.5, 1.5}, 1.0), DomainError);
    CHECK_THROWS_AS(mgl_cdf({0.5, 0.5}, 0.0), DomainError);
}

TEST_CASE("cdf equals the integrated density") {
    auto inner = [](double u1) {
        return quad::adaptive([&](double u2) { return mgl_pdf({u1, u2}, 1.0); }, 0.0, 0.5, {1e-6, 1e-3, 0.05}, 1e-12).value;
    };
    const double c = quad::adaptive(inner, 0.0, 0.5, {1e-6, 1e-3, 0.05}, 1e-11).value;
    CHECK(std::fabs(c - mgl_cdf({0.5, 0.5}, 1.0)) < 1e-6);
}

TEST_CASE("density") {
    CHECK(mgl_pdf({0.3, 0.7}, 1e-4) == doctest::Approx(1.0).epsilon(1e-2));
    CHECK(mgl_pdf({0.5, 0.5}, 1.0) == doctest::Approx(256.0 / (75.0 * M_PI)).epsilon(1e-13));
    // Sklar factorization of the MGL density
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> pu(0.02, 0.98), ps(0.2, 2.0);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 2 + rep % 3;
        MglParams p;
        p.a = ps(gen);
        std::vector<double> u, y;
        double log_marg = 0.0;
        for (int j = 0; j < d; ++j) {
            p.sigma.push_back(ps(gen));
            p.b.push_back(ps(gen));
        }
        for (int j = 0; j < d; ++j) {
            u.push_back(pu(gen));
            y.push_back(glmga_quantile(u.back(), p.margin(j)));
            log_marg += glmga_log_pdf(y.back(), p.margin(j));
        }
        const double sklar = std::exp(mgl_log_pdf(y, p) - log_marg);
        CHECK(mgl_pdf(u, 1.0 / p.a) == doctest::Approx(sklar).epsilon(1e-8));
    }
}

TEST_CASE("density integrates to one") {
    const quad::Rule r = graded(128);
    double s2 = 0.0;
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j) s2 += r.weights[i] * r.weights[j] * mgl_pdf({r.nodes[i], r.nodes[j]}, 1.0);
    CHECK(s2 == doctest::Approx(1.0).epsilon(1e-4));
    const quad::Rule r3 = graded(40);
    double s3 = 0.0;
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j)
            for (int k = 0; k < 40; ++k)
                s3 += r3.weights[i] * r3.weights[j] * r3.weights[k] * mgl_pdf({r3.nodes[i], r3.nodes[j], r3.nodes[k]}, 0.5);
    CHECK(s3 == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("survival copula") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> pu(0.01, 0.99), pd(0.1, 4.0);
    for (int rep = 0; rep < 10; ++rep) {
        const double u1 = pu(gen), u2 = pu(gen), delta = pd(gen);
        const double bivariate = u1 + u2 - 1.0 + mgl_cdf({1.0 - u1, 1.0 - u2}, delta);
        CHECK(std::fabs(surv_mgl_cdf({u1, u2}, delta) - bivariate) < 1e-12);
        CHECK(surv_mgl_pdf({u1, u2}, delta) == doctest::Approx(mgl_pdf({1.0 - u1, 1.0 - u2}, delta)).epsilon(1e-10));
    }
    // d = 3 grounded margins
    CHECK(surv_mgl_cdf({0.3, 1.0, 1.0}, 1.0) == doctest::Approx(0.3).epsilon(1e-9));
    CHECK(surv_mgl_cdf({0.3, 0.6, 1.0}, 1.0) == doctest::Approx(surv_mgl_cdf({0.3, 0.6}, 1.0)).epsilon(1e-9));
    CHECK_THROWS_AS(surv_mgl_cdf(std::vector<double>(7, 0.5), 1.0), DimensionError);
    CHECK(surv_mgl_pdf(std::vector<double>(9, 0.5), 1.0) > 0.0);
}

TEST_CASE("survival MGL is the MGB2 density with p = 1/2") {
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> pu(0.001, 0.999), pd(0.05, 10.0);
    for (int rep = 0; rep < 200; ++rep) {
        const int d = 2 + rep % 4;
        const double delta = pd(gen);
        std::vector<double> u;
        for (int j = 0; j < d; ++j) u.push_back(pu(gen));
        // the MGB2 shape q is the MGL gamma shape a = 1/delta
        CHECK(surv_mgl_pdf(u, delta) == doctest::Approx(mgb2_pdf(u, std::vector<double>(d, 0.5), 1.0 / delta)).epsilon(1e-10));
    }
    // at delta = 1 the two parameterizations coincide
    CHECK(surv_mgl_pdf({0.3, 0.8}, 1.0) == doctest::Approx(mgb2_pdf({0.3, 0.8}, {0.5, 0.5}, 1.0)).epsilon(1e-10));
}

TEST_CASE("MGB2 density") {
    CHECK(mgb2_pdf({0.3, 0.7}, {0.8, 1.7}, 1e4) == doctest::Approx(1.0).epsilon(0.05));
    const double m = quad::adaptive([](double v) { return mgb2_pdf({0.4, v}, {0.8, 1.7}, 2.0); }, 0.0, 1.0,
                                    {1e-8, 1e-5, 1e-3, 0.05, 0.5, 0.95, 1 - 1e-3, 1 - 1e-5}, 1e-12)
                         .value;
    CHECK(m == doctest::Approx(1.0).epsilon(1e-5));
    CHECK_THROWS_AS(mgb2_pdf({0.3, 0.7}, {0.5}, 1.0), DimensionError);
}

TEST_CASE("h-functions") {
    CHECK(h_forward(1.0, 0.3, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(h_forward(0.5, 0.5, 1.0) - 0.450184855752100900) < 1e-14);
    CHECK(std::fabs(h_inverse(0.450184855752100900, 0.5, 1.0) - 0.5) < 1e-12);
    const double step = 1e-5;
    for (double delta : {0.3, 1.0, 3.0}) {
        for (int i = 1; i <= 5; ++i) {
            for (int j = 1; j <= 5; ++j) {
                const double u = i / 6.0, v = j / 6.0;
                const double fd21 = (mgl_cdf({u + step, v}, delta) - mgl_cdf({u - step, v}, delta)) / (2 * step);
                const double fd12 = (mgl_cdf({u, v + step}, delta) - mgl_cdf({u, v - step}, delta)) / (2 * step);
                CHECK(std::fabs(h_forward(v, u, delta, Direction::two_given_one) - fd21) < 1e-5);
                CHECK(std::fabs(h_forward(u, v, delta, Direction::one_given_two) - fd12) < 1e-5);
                const double sfd = (surv_mgl_cdf({u + step, v}, delta) - surv_mgl_cdf({u - step, v}, delta)) / (2 * step);
                CHECK(std::fabs(surv_h_forward(v, u, delta) - sfd) < 1e-5);
            }
        }
    }
}

TEST_CASE("inverse h-functions") {
    for (double delta : {0.1, 1.0, 5.0}) {
        for (int i = 1; i <= 20; ++i) {
            double prev = 0.0;
            for (int j = 1; j <= 20; ++j) {
                const double u = i / 21.0, w = j / 21.0;
                const double v = h_inverse(w, u, delta);
                CHECK(std::fabs(h_forward(v, u, delta) - w) < 1e-8);
                CHECK(v > prev);
                prev = v;
                CHECK(std::fabs(surv_h_forward(surv_h_inverse(w, u, delta), u, delta) - w) < 1e-8);
            }
        }
    }
}

TEST_CASE("sampler") {
    for (double delta : {0.1, 1.0, 5.0}) {
        const PseudoSample s = sample_mgl_copula(delta, 2, 100000, 1000 + static_cast<int>(10 * delta));
        CHECK(stats::ks_uniform(column(s.values, 0)) < 0.005);
        CHECK(stats::ks_uniform(column(s.values, 1)) < 0.005);
        CHECK(std::fabs(stats::kendall_tau(column(s.values, 0), column(s.values, 1)) - kendall_tau(delta)) < 0.01);
    }
    const PseudoSample s3 = sample_mgl_copula(2.0, 3, 50000, 4);
    for (int j = 0; j < 3; ++j) CHECK(stats::ks_uniform(column(s3.values, j)) < 0.01);
    const PseudoSample a = sample_mgl_copula(1.0, 2, 100, 77);
    const PseudoSample b = sample_mgl_copula(1.0, 2, 100, 77);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(sample_mgl_copula(1.0, 1, 10, 1), DimensionError);
}

TEST_CASE("tail clustering of samples") {
    const std::size_t n = 1000000;
    const PseudoSample surv = sample_mgl_copula(1.0, 2, n, 31, true);
    const PseudoSample plain = sample_mgl_copula(1.0, 2, n, 32, false);
    auto upper_ratio = [&](const PseudoSample& s, double u) {
        double both = 0.0, one = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (s.values(i, 0) > u) {
                one += 1.0;
                if (s.values(i, 1) > u) both += 1.0;
            }
        }
        return both / one;
    };
    CHECK(std::fabs(upper_ratio(surv, 0.999) - surv_tail_dependence(1.0).upper) < 0.05);
    CHECK(upper_ratio(plain, 0.9999) < 0.02);
}

TEST_CASE("rank correlations") {
    // mpmath double integrals of the delta = 1 closed forms
    CHECK(kendall_tau(1.0) == doctest::Approx(0.189430530861297828).epsilon(1e-8));
    CHECK(spearman_rho(1.0) == doctest::Approx(0.278874536821952234).epsilon(1e-8));
    CHECK(kendall_tau(1e-4) < 1e-3);
    double prev = 0.0;
    for (double delta : {0.1, 0.5, 1.0, 2.0, 5.0}) {
        const double tau = kendall_tau(delta);
        const double rho = spearman_rho(delta);
        CHECK(tau > prev);
        CHECK(tau < 1.0);
        CHECK(rho > 0.0);
        CHECK(rho < 1.0);
        prev = tau;
    }
    const PseudoSample s = sample_mgl_copula(1.0, 2, 1000000, 12);
    CHECK(std::fabs(stats::kendall_tau(column(s.values, 0), column(s.values, 1)) - kendall_tau(1.0)) < 0.005);
}

TEST_CASE("tail dependence") {
    CHECK(tail_dependence(1e-4).lower < 1e-3);
    CHECK(std::fabs(tail_dependence(1.0).lower - 0.363380227632418657) < 1e-12);
    CHECK(tail_dependence(1e6).lower > 0.999);
    CHECK(tail_dependence(1.0).upper == 0.0);
    CHECK(surv_tail_dependence(1.0).upper == tail_dependence(1.0).lower);
    // C(u,u)/u approaches lambda_l
    CHECK(mgl_cdf({1e-7, 1e-7}, 1.0) / 1e-7 == doctest::Approx(tail_dependence(1.0).lower).epsilon(1e-2));
}

TEST_CASE("Frechet bounds, 2-increasing, exchangeability") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> pu(0.0, 1.0);
    for (double delta : {0.05, 0.7, 3.0, 20.0}) {
        for (int i = 1; i < 10; ++i) {
            for (int j = 1; j < 10; ++j) {
                const double u = i / 10.0, v = j / 10.0;
                const double c = mgl_cdf({u, v}, delta);
                CHECK(c >= std::max(u + v - 1.0, 0.0) - 1e-12);
                CHECK(c <= std::min(u, v) + 1e-12);
                CHECK(std::fabs(c - mgl_cdf({v, u}, delta)) < 1e-10);
            }
        }
        for (int rep = 0; rep < 20; ++rep) {
            double a1 = pu(gen), b1 = pu(gen), a2 = pu(gen), b2 = pu(gen);
            if (a1 > b1) std::swap(a1, b1);
            if (a2 > b2) std::swap(a2, b2);
            const double vol = mgl_cdf({b1, b2}, delta) - mgl_cdf({a1, b2}, delta) - mgl_cdf({b1, a2}, delta) +
                               mgl_cdf({a1, a2}, delta);
            CHECK(vol >= -1e-12);
        }
    }
}

TEST_CASE("Gumbel copula") {
    CHECK(gumbel_pdf(0.3, 0.8, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(gumbel_pdf(0.05, 0.6, 1.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK_THROWS_AS(gumbel_pdf(0.3, 0.8, 0.9), DomainError);
    const quad::Rule r = graded(128);
    double s = 0.0;
    for (int i = 0; i < 128; ++i)
        for (int j = 0; j < 128; ++j) s += r.weights[i] * r.weights[j] * gumbel_pdf(r.nodes[i], r.nodes[j], 1.8);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-5));
    const double h = 1e-6;
    for (double u : {0.2, 0.5, 0.9}) {
        for (double v : {0.1, 0.6}) {
            const double fd = (gumbel_cdf(u + h, v, 1.8) - gumbel_cdf(u - h, v, 1.8)) / (2 * h);
            CHECK(gumbel_h(v, u, 1.8) == doctest::Approx(fd).epsilon(1e-7));
            const double fd2 = (gumbel_h(v + h, u, 1.8) - gumbel_h(v - h, u, 1.8)) / (2 * h);
            CHECK(gumbel_pdf(u, v, 1.8) == doctest::Approx(fd2).epsilon(1e-6));
        }
    }
}

}
