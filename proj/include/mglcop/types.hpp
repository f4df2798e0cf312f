#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mglcop {

enum class PseudoMethod { rank, kernel, parametric };

// n x d matrix of values strictly inside (0,1).
struct PseudoSample {
    Eigen::MatrixXd values;
    PseudoMethod method = PseudoMethod::parametric;

    Eigen::Index n() const { return values.rows(); }
    Eigen::Index d() const { return values.cols(); }
};

enum class Family { mgl, surv_mgl, mgl_ev, surv_mgl_ev, mgb2, gumbel };

struct CopulaSpec {
    Family family;
    std::vector<double> params;
};

std::string to_string(Family f);
std::string to_string(PseudoMethod m);
// Accepts the CLI spellings (mgl, surv-mgl, mgl-ev, surv-mgl-ev, mgb2, gumbel).
Family parse_family(const std::string& s);

}  // namespace mglcop
