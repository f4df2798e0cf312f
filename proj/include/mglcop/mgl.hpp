#pragma once

#include "mglcop/glmga.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace mglcop {

struct MglParams {
    std::vector<double> sigma;
    double a;
    std::vector<double> b;

    std::size_t dim() const { return sigma.size(); }
    GlmgaParams margin(std::size_t j) const { return {sigma.at(j), a, b.at(j)}; }
};

void validate(const MglParams& p);

double mgl_log_pdf(const std::vector<double>& y, const MglParams& p);
double mgl_pdf(const std::vector<double>& y, const MglParams& p);

struct MglMoments {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    Eigen::MatrixXd corr;
};
// Requires max sigma_j < 1/4.
MglMoments mgl_moments(const MglParams& p);

// Law of the unobserved coordinates given Y_k = values[i] for k = observed[i].
// The result keeps the unobserved coordinates in their original order.
MglParams mgl_conditional(const MglParams& p, const std::vector<std::size_t>& observed,
                          const std::vector<double>& values);

// n x d draws by the sequential conditional-quantile chain.
Eigen::MatrixXd mgl_sample(const MglParams& p, std::size_t n, std::uint64_t seed);

// n x d draws through the common gamma mixing variable (independent route,
// used as an oracle for the chain sampler).
Eigen::MatrixXd mgl_sample_mixture(const MglParams& p, std::size_t n, std::uint64_t seed);

}  // namespace mglcop
