#pragma once

// Ground-truth synthetic profiles: region 1 follows the scaling law for the
// requested ln Re, region 2 a power law joined continuously at the
// breakpoint, with optional viscous-sublayer blend and multiplicative
// lognormal noise. Deterministic for a fixed seed.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wallfit/scaling_law.hpp"
#include "wallfit/types.hpp"

namespace wallfit {

struct SynthSpec {
    double ln_re = 11.0;
    double breakpoint_y_plus = 300.0;
    double beta = 0.2;              // region-2 exponent
    double y_plus_min = 30.0;
    double y_plus_max = 3.0e4;
    int n_points = 200;             // log-uniform grid, >= 20
    double noise_rel_sigma = 0.0;   // multiplicative lognormal sigma on U+
    std::uint64_t seed = 0;
    bool include_sublayer = false;  // U+ = y+ below y+ = 5, blended up to 30
    double re_theta = 0.0;          // 0 -> exp(ln_re) stand-in for sorting/flagging
};

inline void validate_spec(const SynthSpec& s) {
    if (!(s.ln_re > 0.0)) throw validation_error("SynthSpec: ln_re must be > 0");
    if (!(s.y_plus_min > 0.0)) throw validation_error("SynthSpec: y+ min must be > 0");
    if (!(s.y_plus_min < s.breakpoint_y_plus && s.breakpoint_y_plus < s.y_plus_max))
        throw validation_error("SynthSpec: need y+ min < breakpoint < y+ max");
    if (!(s.beta > 0.0 && s.beta < 1.0)) throw validation_error("SynthSpec: beta must be in (0, 1)");
    if (s.n_points < 20) throw validation_error("SynthSpec: need n_points >= 20");
    if (!(s.noise_rel_sigma >= 0.0)) throw validation_error("SynthSpec: noise must be >= 0");
    if (s.include_sublayer && s.breakpoint_y_plus < 30.0)
        throw validation_error("SynthSpec: sublayer blend needs breakpoint >= 30");
}

namespace detail {

// Noiseless U+ at y+: sublayer / blend / region 1 / region 2. The blend is
// linear in (ln y+, ln U+) over y+ in [5, 30] — test scaffolding, not
// physics: it only keeps low-y+ grids valid.
inline double synth_u_plus(const SynthSpec& s, double y_plus) {
    const double alpha = scaling_law_alpha(s.ln_re);
    const double a_coef = scaling_law_prefactor(s.ln_re);
    auto region_law = [&](double y) {
        if (y <= s.breakpoint_y_plus) return predict_scaling_law(y, s.ln_re);
        const double b_coef = a_coef * std::pow(s.breakpoint_y_plus, alpha - s.beta);
        return b_coef * std::pow(y, s.beta);
    };
    if (!s.include_sublayer || y_plus >= 30.0) return region_law(y_plus);
    if (y_plus <= 5.0) return y_plus;
    const double t = (std::log(y_plus) - std::log(5.0)) / (std::log(30.0) - std::log(5.0));
    return std::exp((1.0 - t) * std::log(y_plus) + t * std::log(region_law(y_plus)));
}

}  // namespace detail

inline VelocityProfile generate_profile(const SynthSpec& spec, std::string run_id = "synth") {
    validate_spec(spec);
    VelocityProfile p;
    p.run_id = std::move(run_id);
    p.re_theta = spec.re_theta > 0.0 ? spec.re_theta : std::exp(spec.ln_re);

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double ln_lo = std::log(spec.y_plus_min);
    const double ln_hi = std::log(spec.y_plus_max);
    p.samples.reserve(spec.n_points);
    for (int i = 0; i < spec.n_points; ++i) {
        const double y = std::exp(ln_lo + (ln_hi - ln_lo) * i / (spec.n_points - 1));
        double u = detail::synth_u_plus(spec, y);
        if (spec.noise_rel_sigma > 0.0) u *= std::exp(spec.noise_rel_sigma * gauss(rng));
        p.samples.push_back(Sample{y, u});
    }
    validate_profile(p);
    return p;
}

inline std::vector<VelocityProfile> generate_ensemble(std::span<const SynthSpec> specs) {
    std::vector<VelocityProfile> out;
    out.reserve(specs.size());
    int i = 0;
    for (const SynthSpec& s : specs) {
        char id[32];
        std::snprintf(id, sizeof(id), "synth-%03d", i++);
        out.push_back(generate_profile(s, id));
    }
    return out;
}

}  // namespace wallfit
