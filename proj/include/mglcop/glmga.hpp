#pragma once

#include "mglcop/errors.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mglcop {

struct GlmgaParams {
    double sigma;
    double a;
    double b;
};

struct GlogmParams {
    double theta;
    double sigma;
};

void validate(const GlmgaParams& p);

double glmga_pdf(double y, const GlmgaParams& p);
double glmga_log_pdf(double y, const GlmgaParams& p);
double glmga_cdf(double y, const GlmgaParams& p);
double glmga_sf(double y, const GlmgaParams& p);  // 1 - cdf without cancellation
double glmga_quantile(double p, const GlmgaParams& prm);
// Same quantile from the upper-tail probability q = 1 - p.
double glmga_quantile_upper(double q, const GlmgaParams& prm);

// Gradient of log f(y) with respect to (sigma, a, b).
std::array<double, 3> glmga_log_pdf_grad(double y, const GlmgaParams& p);

// Pareto tail constant C of 1 - F(y) ~ C y^{-1/(2 sigma)}.
double glmga_tail_constant(const GlmgaParams& p);

double glmga_mean(const GlmgaParams& p);  // needs sigma < 1/2
struct MeanVar {
    double mean;
    double variance;
};
MeanVar glmga_mean_var(const GlmgaParams& p);  // needs sigma < 1/4

// Draws by the gamma-mixture representation Y = (Theta / (2 G))^sigma,
// Theta ~ Gamma(a, b), G ~ Gamma(1/2, 1).
std::vector<double> glmga_sample(const GlmgaParams& p, std::size_t n, std::uint64_t seed);

// Density of the four-parameter generalized beta of the second kind.
double gb2_pdf(double y, double tau, double mu, double nu, double p);

double glogm_pdf(double y, const GlogmParams& p);
double glogm_cdf(double y, const GlogmParams& p);

struct GlmgaFit {
    GlmgaParams params;
    std::array<double, 3> se;  // sigma, a, b
    double loglik;
    double aic;
    double bic;
    std::size_t n;
    bool singular_hessian;
    int iterations;
};

double glmga_loglik(const std::vector<double>& data, const GlmgaParams& p);
GlmgaFit glmga_fit(const std::vector<double>& data);

}  // namespace mglcop
