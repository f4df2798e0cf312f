#include <doctest.h>

#include "mglcop/mgl.hpp"
#include "mglcop/quadrature.hpp"
#include "mglcop/stats.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <random>

using namespace mglcop;

namespace {

std::vector<double> column(const Eigen::MatrixXd& m, int j) {
    return std::vector<double>(m.col(j).data(), m.col(j).data() + m.rows());
}

// smoothstep-type map clustering nodes toward both ends of (0,1)
double cluster(double x, double* jac) {
    *jac = 30.0 * x * x * (1.0 - x) * (1.0 - x);
    return x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

}  // namespace

TEST_SUITE("mgl") {

TEST_CASE("d = 1 reduces to GLMGA") {
    const MglParams p{{0.7}, 1.4, {0.3}};
    for (int i = 0; i < 20; ++i) {
        const double y = std::exp(-4.0 + 0.4 * i);
        CHECK(mgl_pdf({y}, p) == doctest::Approx(glmga_pdf(y, p.margin(0))).epsilon(1e-12));
    }
}

TEST_CASE("bivariate density normalizes on the PIT scale") {
    const MglParams p{{0.5, 1.0}, 2.0, {1.0, 0.5}};
    const quad::Rule r = quad::gauss_legendre(128, 0.0, 1.0);
    double total = 0.0;
    for (int i = 0; i < 128; ++i) {
        double j1 = 0.0;
        const double u1 = cluster(r.nodes[i], &j1);
        const double y1 = glmga_quantile(u1, p.margin(0));
        for (int k = 0; k < 128; ++k) {
            double j2 = 0.0;
            const double u2 = cluster(r.nodes[k], &j2);
            const double y2 = glmga_quantile(u2, p.margin(1));
            const double c = mgl_pdf({y1, y2}, p) / (glmga_pdf(y1, p.margin(0)) * glmga_pdf(y2, p.margin(1)));
            total += r.weights[i] * r.weights[k] * j1 * j2 * c;
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("marginalizing a coordinate gives the GLMGA density") {
    const MglParams p{{0.5, 1.0}, 2.0, {1.0, 0.5}};
    for (double y1 : {0.5, 1.0, 2.0}) {
        auto f = [&](double x) { return mgl_pdf({y1, std::exp(x)}, p) * std::exp(x); };
        const double m = quad::adaptive(f, -60.0, 120.0, {-10.0, -3.0, 0.0, 3.0, 10.0, 30.0}, 1e-12).value;
        CHECK(m == doctest::Approx(glmga_pdf(y1, p.margin(0))).epsilon(1e-8));
    }
}

TEST_CASE("errors") {
    const MglParams p{{0.5, 1.0}, 2.0, {1.0, 0.5}};
    CHECK_THROWS_AS(mgl_pdf({1.0}, p), DimensionError);
    CHECK_THROWS_AS(mgl_pdf({1.0, -1.0}, p), DomainError);
    CHECK_THROWS_AS(mgl_pdf({1.0, 1.0}, MglParams{{0.5}, 2.0, {1.0, 0.5}}), DimensionError);
    CHECK_THROWS_AS(mgl_moments(p), MomentUndefinedError);
    CHECK_THROWS_AS(mgl_conditional(p, {0, 1}, {1.0, 1.0}), DimensionError);
    CHECK_THROWS_AS(mgl_conditional(p, {0}, {-1.0}), DomainError);
}

TEST_CASE("moments: equal-sigma reduction and a -> inf") {
    const double s = 0.1, a = 2.0;
    const MglMoments m = mgl_moments({{s, s}, a, {1.0, 3.0}});
    using boost::math::beta;
    const double r = beta(a + 2 * s, a) / beta(a + s, a + s);
    const double q = beta(0.5 - 2 * s, 0.5) / beta(0.5 - s, 0.5 - s);
    CHECK(m.corr(0, 1) == doctest::Approx((r - 1.0) / (r * q - 1.0)).epsilon(1e-10));
    CHECK(m.corr(1, 0) == m.corr(0, 1));
    CHECK(m.cov(0, 0) == doctest::Approx(glmga_mean_var({s, a, 1.0}).variance).epsilon(1e-12));
    CHECK(std::fabs(mgl_moments({{0.1, 0.1}, 1e6, {1.0, 1.0}}).corr(0, 1)) < 1e-4);

    const MglMoments m3 = mgl_moments({{0.1, 0.2, 0.05}, 0.7, {1.0, 0.2, 5.0}});
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m3.corr);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    CHECK((m3.corr - m3.corr.transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("moments agree with Monte Carlo") {
    const MglParams p{{0.1, 0.15}, 2.0, {1.0, 2.0}};
    const MglMoments m = mgl_moments(p);
    const Eigen::MatrixXd ys = mgl_sample_mixture(p, 1000000, 3);
    CHECK(std::fabs(stats::pearson(column(ys, 0), column(ys, 1)) - m.corr(0, 1)) < 0.01);
    CHECK(stats::mean(column(ys, 1)) == doctest::Approx(m.mean[1]).epsilon(0.01));
}

TEST_CASE("conditional distributions") {
    const MglParams p{{0.5, 1.0}, 2.0, {1.0, 0.5}};
    const MglParams same = mgl_conditional(p, {}, {});
    CHECK(same.a == p.a);
    CHECK(same.sigma == p.sigma);
    CHECK(same.b == p.b);

    const MglParams c = mgl_conditional(p, {1}, {0.7});
    CHECK(c.a == doctest::Approx(p.a + 0.5));
    for (double y1 : {0.2, 1.0, 5.0}) {
        for (double y2 : {0.3, 1.0, 8.0}) {
            const MglParams cy = mgl_conditional(p, {1}, {y2});
            const double lhs = mgl_pdf({y1, y2}, p) / glmga_pdf(y2, p.margin(1));
            CHECK(glmga_pdf(y1, cy.margin(0)) == doctest::Approx(lhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("chain rule and order independence") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> u(0.2, 1.5), ly(-2.0, 2.0);
    for (std::size_t d = 2; d <= 4; ++d) {
        for (int rep = 0; rep < 10; ++rep) {
            MglParams p;
            p.a = u(gen);
            std::vector<double> y;
            for (std::size_t j = 0; j < d; ++j) {
                p.sigma.push_back(u(gen));
                p.b.push_back(u(gen));
                y.push_back(std::exp(ly(gen)));
            }
            // f(y) = f(y_d) f(y_{d-1} | y_d) ... f(y_1 | y_2..y_d)
            double log_chain = glmga_log_pdf(y[d - 1], p.margin(d - 1));
            std::vector<std::size_t> obs{d - 1};
            std::vector<double> vals{y[d - 1]};
            for (std::size_t j = d - 1; j-- > 0;) {
                const MglParams c = mgl_conditional(p, obs, vals);
                // unobserved coordinates keep their order, so j is at position j
                log_chain += glmga_log_pdf(y[j], c.margin(j));
                obs.push_back(j);
                vals.push_back(y[j]);
            }
            CHECK(std::exp(log_chain - mgl_log_pdf(y, p)) == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
    const MglParams p{{0.5, 1.0, 0.3, 0.8}, 1.5, {1.0, 0.5, 2.0, 0.1}};
    const MglParams step = mgl_conditional(mgl_conditional(p, {1}, {0.6}), {1}, {2.0});
    const MglParams direct = mgl_conditional(p, {1, 2}, {0.6, 2.0});
    CHECK(step.a == doctest::Approx(direct.a));
    for (std::size_t j = 0; j < 2; ++j) {
        CHECK(step.b[j] == doctest::Approx(direct.b[j]).epsilon(1e-14));
        CHECK(step.sigma[j] == direct.sigma[j]);
    }
}

TEST_CASE("chain sampler") {
    const MglParams p{{0.1, 0.1}, 2.0, {1.0, 2.0}};
    const Eigen::MatrixXd ys = mgl_sample(p, 100000, 21);
    const double ks = stats::ks_statistic(column(ys, 0), [&](double y) { return glmga_cdf(y, p.margin(0)); });
    CHECK(ks < 0.01);
    const double ks2 = stats::ks_statistic(column(ys, 1), [&](double y) { return glmga_cdf(y, p.margin(1)); });
    CHECK(ks2 < 0.01);
    CHECK(std::fabs(stats::pearson(column(ys, 0), column(ys, 1)) - mgl_moments(p).corr(0, 1)) < 0.02);
    const Eigen::MatrixXd again = mgl_sample(p, 1000, 21);
    CHECK((again - ys.topRows(1000)).cwiseAbs().maxCoeff() == 0.0);
    // the chain and the mixture representation give the same dependence
    const Eigen::MatrixXd mix = mgl_sample_mixture(p, 100000, 22);
    CHECK(std::fabs(stats::kendall_tau(column(ys, 0), column(ys, 1)) -
                    stats::kendall_tau(column(mix, 0), column(mix, 1))) < 0.01);
}

}
