#pragma once

// Domain value types shared by all modules. Everything is an immutable value
// after construction; operations are free functions in the other headers.
//
// Conventions: y+ is the wall distance and U+ the mean velocity in wall
// units (y+ = y*u_tau/nu, U+ = U/u_tau). All fits work on natural-log
// internals; base-10 is a presentation concern of the report layer.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wallfit/errors.hpp"

namespace wallfit {

struct Sample {
    double y_plus = 0.0;
    double u_plus = 0.0;
};

// One experimental (or synthetic) run.
struct VelocityProfile {
    std::string run_id;
    double re_theta = 0.0;  // momentum-thickness Reynolds number
    std::optional<double> u_inf;  // free-stream velocity [m/s]
    std::optional<double> u_tau;  // friction velocity [m/s]
    std::optional<double> nu;     // kinematic viscosity [m^2/s]
    std::vector<Sample> samples;  // ordered by y_plus, strictly increasing
};

// Free-stream ceiling slack: max(U+) may exceed u_inf/u_tau by at most 2%.
inline constexpr double kFreeStreamSlack = 0.02;

// Checks the profile invariants; throws validation_error naming the run.
inline void validate_profile(const VelocityProfile& p) {
    auto fail = [&](const std::string& msg) {
        throw validation_error("profile '" + p.run_id + "': " + msg);
    };
    if (p.samples.empty()) fail("samples nonempty violated");
    if (!(p.re_theta > 0.0)) fail("re_theta must be > 0");
    double prev = 0.0;
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
        const Sample& s = p.samples[i];
        if (!(s.y_plus > 0.0)) fail("y+ must be > 0 at sample " + std::to_string(i));
        if (!(s.u_plus > 0.0)) fail("U+ must be > 0 at sample " + std::to_string(i));
        if (i > 0 && !(s.y_plus > prev))
            fail("y+ not strictly increasing at sample " + std::to_string(i));
        prev = s.y_plus;
    }
    if (p.u_inf && p.u_tau) {
        double ceiling = (*p.u_inf / *p.u_tau) * (1.0 + kFreeStreamSlack);
        for (const Sample& s : p.samples)
            if (s.u_plus > ceiling) fail("U+ exceeds free-stream ceiling");
    }
}

// Closed y+ interval a fit is restricted to.
struct FitWindow {
    double lo_y_plus = 0.0;
    double hi_y_plus = 0.0;

    bool contains(double y_plus) const {
        return y_plus >= lo_y_plus && y_plus <= hi_y_plus;
    }
};

inline void validate_window(const FitWindow& w) {
    if (!(w.lo_y_plus > 0.0) || !(w.lo_y_plus < w.hi_y_plus))
        throw validation_error("fit window requires 0 < lo < hi");
}

// U+ = prefactor * (y+)^exponent fitted over `window`.
struct PowerLawFit {
    double exponent = 0.0;            // alpha or beta, in (0, 1)
    double prefactor = 0.0;           // A or B, > 0
    double exponent_stderr = 0.0;
    double prefactor_rel_stderr = 0.0;  // stderr of ln(prefactor)
    double rms_log_residual = 0.0;
    int n_points = 0;
    FitWindow window;

    double evaluate(double y_plus) const {
        return prefactor * std::pow(y_plus, exponent);
    }
};

// Two independent power-law fits split at a breakpoint.
struct TwoLayerFit {
    PowerLawFit region1;        // adjacent to the viscous sublayer
    PowerLawFit region2;        // adjacent to the free stream
    double breakpoint_y_plus = 0.0;   // y+ of the last region-1 sample
    double total_sse_log = 0.0;       // combined SSE in ln U+ units
};

// Effective Reynolds number from the two region-1 inversions.
struct EffectiveReynolds {
    double ln_re1 = 0.0;   // sqrt(3) * (prefactor - 5/2)
    double ln_re2 = 0.0;   // 3 / (2 * exponent)
    double ln_re = 0.0;    // (ln_re1 + ln_re2) / 2, i.e. Re = sqrt(Re1*Re2)
    double delta = 0.0;    // |ln_re2 - ln_re1| / ln_re  (absolute convention)
    std::optional<double> lambda_scale;  // Re * nu / U [m], when metadata known
};

// U+ = (1/kappa) ln(y+) + b_const fitted over y+ >= m1, y <= m0 * delta95.
struct LogLawFit {
    double kappa = 0.0;
    double b_const = 0.0;
    double kappa_stderr = 0.0;
    double m1 = 0.0;   // lower y+ limit
    double m0 = 0.0;   // outer-fraction limit relative to delta95
    double rms_residual = 0.0;
    int n_points = 0;

    double evaluate(double y_plus) const {
        return std::log(y_plus) / kappa + b_const;
    }
};

struct CollapsePoint {
    double ln_y_plus = 0.0;
    double psi = 0.0;
};

// Result of mapping a profile through the psi transform; on the scaling law
// the points fall on the bisectrix psi = ln y+.
struct CollapseResult {
    std::vector<CollapsePoint> points;  // only samples where psi is defined
    double rms_off_bisectrix = 0.0;
    int n_excluded = 0;
};

struct GammaPoint {
    double y_plus = 0.0;
    double gamma = 0.0;
};

// Logarithmic slope Gamma = (y+/U+) dU+/dy+ = d ln U+ / d ln y+ along a
// profile. `points` holds the interior centered-difference values (profile
// length minus the two endpoints consumed by the stencil); the one-sided
// endpoint estimates are kept apart and excluded from constancy checks.
struct GammaSeries {
    std::vector<GammaPoint> points;
    GammaPoint first_one_sided;
    GammaPoint last_one_sided;
};

}  // namespace wallfit
