#pragma once

// The Reynolds-number-dependent scaling law for the inner intermediate
// region and its exact inverse, the psi transform:
//
//   U+  = (ln Re / sqrt(3) + 5/2) * (y+)^(3 / (2 ln Re))
//   psi = (1/alpha) ln(2 alpha U+ / (sqrt(3) + 5 alpha)),  alpha = 3/(2 ln Re)
//
// For data generated exactly by the law, psi == ln y+.

#include <cmath>
#include <numbers>
#include <optional>

#include "wallfit/errors.hpp"

namespace wallfit {

inline double scaling_law_alpha(double ln_re) {
    if (!(ln_re > 0.0)) throw domain_error("scaling_law_alpha: ln Re must be > 0");
    return 3.0 / (2.0 * ln_re);
}

inline double scaling_law_prefactor(double ln_re) {
    if (!(ln_re > 0.0)) throw domain_error("scaling_law_prefactor: ln Re must be > 0");
    return ln_re / std::numbers::sqrt3 + 2.5;
}

inline double predict_scaling_law(double y_plus, double ln_re) {
    if (!(y_plus > 0.0)) throw domain_error("predict_scaling_law: y+ must be > 0");
    return scaling_law_prefactor(ln_re) * std::pow(y_plus, scaling_law_alpha(ln_re));
}

// nullopt when the log argument is non-positive (only reachable for
// non-positive U+; valid profiles always yield a defined value).
inline std::optional<double> try_psi_transform(double u_plus, double alpha) {
    if (!(alpha > 0.0)) throw domain_error("psi_transform: alpha must be > 0");
    double arg = 2.0 * alpha * u_plus / (std::numbers::sqrt3 + 5.0 * alpha);
    if (!(arg > 0.0)) return std::nullopt;
    return std::log(arg) / alpha;
}

inline double psi_transform(double u_plus, double alpha) {
    if (!(u_plus > 0.0)) throw domain_error("psi_transform: U+ must be > 0");
    return *try_psi_transform(u_plus, alpha);
}

}  // namespace wallfit
