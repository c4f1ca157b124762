#pragma once

// Inversion of a region-1 power-law fit into the two ln Re estimates, the
// effective Reynolds number (their geometric mean), the associated length
// scale Lambda = Re * nu / U, and the psi-collapse diagnostic.

#include <cmath>
#include <numbers>
#include <optional>

#include "wallfit/fitting.hpp"
#include "wallfit/scaling_law.hpp"
#include "wallfit/types.hpp"

namespace wallfit {

struct LnRePair {
    double ln_re1 = 0.0;
    double ln_re2 = 0.0;
};

// Solves the two independent equations the scaling law implies for the
// fitted (exponent, prefactor): prefactor determines ln Re1, exponent
// determines ln Re2. The two agree only if the law actually holds.
inline LnRePair solve_ln_re(const PowerLawFit& fit) {
    if (!(fit.exponent > 0.0)) throw domain_error("solve_ln_re: exponent must be > 0");
    if (!(fit.prefactor > 2.5))
        throw nonphysical_prefactor("solve_ln_re: prefactor " + std::to_string(fit.prefactor) +
                                    " <= 5/2 makes ln Re1 non-positive");
    return LnRePair{std::numbers::sqrt3 * (fit.prefactor - 2.5), 3.0 / (2.0 * fit.exponent)};
}

inline EffectiveReynolds effective_reynolds(double ln_re1, double ln_re2) {
    if (!(ln_re1 > 0.0) || !(ln_re2 > 0.0))
        throw domain_error("effective_reynolds: ln Re1 and ln Re2 must be > 0");
    EffectiveReynolds eff;
    eff.ln_re1 = ln_re1;
    eff.ln_re2 = ln_re2;
    eff.ln_re = (ln_re1 + ln_re2) / 2.0;
    eff.delta = std::abs(ln_re2 - ln_re1) / eff.ln_re;
    return eff;
}

// Lambda = Re * nu / U: the length scale playing the role the diameter
// plays for pipe flow.
inline double length_scale(double ln_re, double u_inf, double nu) {
    if (!(ln_re > 0.0)) throw domain_error("length_scale: ln Re must be > 0");
    if (!(u_inf > 0.0)) throw domain_error("length_scale: u_inf must be > 0");
    if (!(nu > 0.0)) throw domain_error("length_scale: nu must be > 0");
    return std::exp(ln_re) * nu / u_inf;
}

// Same, pulling U and nu from the profile metadata.
inline double length_scale_for(const VelocityProfile& p, const EffectiveReynolds& eff) {
    if (!p.u_inf || !p.nu)
        throw metadata_missing("run '" + p.run_id +
                               "': length scale requires u_inf and nu metadata");
    return length_scale(eff.ln_re, *p.u_inf, *p.nu);
}

// Maps the in-window samples through psi with alpha = 3/(2 ln Re). On
// scaling-law data with the right ln Re the points land on psi = ln y+;
// rms_off_bisectrix measures the departure. Samples whose transform is
// undefined are excluded and counted, not errors.
inline CollapseResult collapse_profile(const VelocityProfile& p, const FitWindow& window,
                                       double ln_re) {
    validate_window(window);
    const double alpha = scaling_law_alpha(ln_re);

    CollapseResult out;
    double sum_sq = 0.0;
    for (const Sample& s : p.samples) {
        if (!window.contains(s.y_plus)) continue;
        const std::optional<double> psi = try_psi_transform(s.u_plus, alpha);
        if (!psi) {
            ++out.n_excluded;
            continue;
        }
        const double ln_y = std::log(s.y_plus);
        out.points.push_back(CollapsePoint{ln_y, *psi});
        const double off = *psi - ln_y;
        sum_sq += off * off;
    }
    if (out.points.empty())
        throw domain_error("run '" + p.run_id + "': psi undefined for every in-window sample");
    out.rms_off_bisectrix = std::sqrt(sum_sq / static_cast<double>(out.points.size()));
    return out;
}

}  // namespace wallfit
