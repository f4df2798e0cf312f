#include "mglcop/types.hpp"

#include "mglcop/errors.hpp"

namespace mglcop {

std::string to_string(Family f) {
    switch (f) {
        case Family::mgl: return "mgl";
        case Family::surv_mgl: return "surv-mgl";
        case Family::mgl_ev: return "mgl-ev";
        case Family::surv_mgl_ev: return "surv-mgl-ev";
        case Family::mgb2: return "mgb2";
        case Family::gumbel: return "gumbel";
    }
    return "unknown";
}

std::string to_string(PseudoMethod m) {
    switch (m) {
        case PseudoMethod::rank: return "rank";
        case PseudoMethod::kernel: return "kernel";
        case PseudoMethod::parametric: return "parametric";
    }
    return "unknown";
}

Family parse_family(const std::string& s) {
    if (s == "mgl") return Family::mgl;
    if (s == "surv-mgl" || s == "survival-mgl") return Family::surv_mgl;
    if (s == "mgl-ev") return Family::mgl_ev;
    if (s == "surv-mgl-ev" || s == "survival-mgl-ev") return Family::surv_mgl_ev;
    if (s == "mgb2") return Family::mgb2;
    if (s == "gumbel") return Family::gumbel;
    throw ValidationError("unknown copula family '" + s + "'");
}

}  // namespace mglcop
