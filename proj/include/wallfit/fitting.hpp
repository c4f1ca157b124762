#pragma once

// Least-squares machinery: intermediate-window selection, single power-law
// fits, the two-layer breakpoint fit, and the log-law fit.
//
// Power laws are fitted by OLS of ln U+ on ln y+; the log law by OLS of U+
// on ln y+. The two-layer fit minimizes the combined SSE of two independent
// lines over all admissible interior split positions (no continuity
// constraint at the breakpoint); ties break toward the smaller y+.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wallfit/linear_fit.hpp"
#include "wallfit/types.hpp"

namespace wallfit {

struct FitConfig {
    double sublayer_cutoff_y_plus = 30.0;        // drop samples below this y+
    double wake_cutoff_velocity_fraction = 0.95; // drop samples above this fraction of max U+
    int min_points_per_segment = 5;
    double min_slope_gap = 0.005;                // below this the split is not a structure
    enum class BreakpointSearch { exhaustive, golden_section };
    BreakpointSearch breakpoint_search = BreakpointSearch::exhaustive;
    double delta95_fraction = 0.95;              // boundary-thickness surrogate, see delta95()
};

inline void validate_config(const FitConfig& cfg) {
    if (!(cfg.sublayer_cutoff_y_plus > 0.0))
        throw validation_error("FitConfig: sublayer cutoff must be > 0");
    if (!(cfg.wake_cutoff_velocity_fraction > 0.0 && cfg.wake_cutoff_velocity_fraction < 1.0))
        throw validation_error("FitConfig: wake fraction must be in (0, 1)");
    if (cfg.min_points_per_segment < 3)
        throw validation_error("FitConfig: min points per segment must be >= 3");
    if (!(cfg.min_slope_gap >= 0.0))
        throw validation_error("FitConfig: min slope gap must be >= 0");
    if (!(cfg.delta95_fraction > 0.0 && cfg.delta95_fraction < 1.0))
        throw validation_error("FitConfig: delta95 fraction must be in (0, 1)");
}

namespace detail {

inline std::vector<Sample> samples_in_window(const VelocityProfile& p, const FitWindow& w) {
    std::vector<Sample> out;
    for (const Sample& s : p.samples)
        if (w.contains(s.y_plus)) out.push_back(s);
    return out;
}

// O(1)-per-split SSE over a contiguous index range, backed by prefix sums.
// Good enough to rank splits; the winning segments are refit exactly.
class SegmentSse {
public:
    SegmentSse(const std::vector<double>& x, const std::vector<double>& y) {
        const std::size_t n = x.size();
        sx_.assign(n + 1, 0.0);
        sy_.assign(n + 1, 0.0);
        sxx_.assign(n + 1, 0.0);
        sxy_.assign(n + 1, 0.0);
        syy_.assign(n + 1, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            sx_[i + 1] = sx_[i] + x[i];
            sy_[i + 1] = sy_[i] + y[i];
            sxx_[i + 1] = sxx_[i] + x[i] * x[i];
            sxy_[i + 1] = sxy_[i] + x[i] * y[i];
            syy_[i + 1] = syy_[i] + y[i] * y[i];
        }
    }

    // SSE of the OLS line over samples [first, last], inclusive.
    double operator()(std::size_t first, std::size_t last) const {
        const double n = static_cast<double>(last - first + 1);
        const double sx = sx_[last + 1] - sx_[first];
        const double sy = sy_[last + 1] - sy_[first];
        const double cxx = (sxx_[last + 1] - sxx_[first]) - sx * sx / n;
        const double cxy = (sxy_[last + 1] - sxy_[first]) - sx * sy / n;
        const double cyy = (syy_[last + 1] - syy_[first]) - sy * sy / n;
        if (!(cxx > 0.0)) return cyy > 0.0 ? cyy : 0.0;
        const double sse = cyy - cxy * cxy / cxx;
        return sse > 0.0 ? sse : 0.0;
    }

private:
    std::vector<double> sx_, sy_, sxx_, sxy_, syy_;
};

inline PowerLawFit make_power_law_fit(const LineFit& line, const FitWindow& window,
                                      const std::string& run_id) {
    if (!(line.slope > 0.0 && line.slope < 1.0))
        throw degenerate_fit("run '" + run_id + "': power-law exponent " +
                             std::to_string(line.slope) + " outside (0, 1)");
    PowerLawFit f;
    f.exponent = line.slope;
    f.prefactor = std::exp(line.intercept);
    f.exponent_stderr = line.slope_stderr;
    f.prefactor_rel_stderr = line.intercept_stderr;
    f.rms_log_residual = line.rms_residual;
    f.n_points = line.n;
    f.window = window;
    return f;
}

}  // namespace detail

// Smallest y+ at which U+ first reaches `fraction` of the profile maximum.
// Stands in for the boundary-layer thickness the log-law outer limit M0
// refers to; the reference thickness is not fixed by convention, so the
// fraction is configurable (0.95 default, 0.99 for a stricter surrogate).
inline double delta95(const VelocityProfile& p, double fraction = 0.95) {
    if (p.samples.empty()) throw insufficient_data("delta95: empty profile");
    double u_max = 0.0;
    for (const Sample& s : p.samples) u_max = std::max(u_max, s.u_plus);
    for (const Sample& s : p.samples)
        if (s.u_plus >= fraction * u_max) return s.y_plus;
    return p.samples.back().y_plus;
}

// Window between the viscous sublayer and the wake: keeps samples with
// y+ >= sublayer cutoff whose velocity stays below the wake fraction of the
// profile maximum.
inline FitWindow select_intermediate_window(const VelocityProfile& p, const FitConfig& cfg) {
    validate_config(cfg);
    double u_max = 0.0;
    for (const Sample& s : p.samples) u_max = std::max(u_max, s.u_plus);
    const double u_cap = cfg.wake_cutoff_velocity_fraction * u_max;

    double lo = 0.0, hi = 0.0;
    int count = 0;
    for (const Sample& s : p.samples) {
        if (s.y_plus < cfg.sublayer_cutoff_y_plus || s.u_plus > u_cap) continue;
        if (count == 0) lo = s.y_plus;
        hi = s.y_plus;
        ++count;
    }
    if (count < 2 * cfg.min_points_per_segment)
        throw insufficient_data("run '" + p.run_id + "': only " + std::to_string(count) +
                                " samples in the intermediate window, need " +
                                std::to_string(2 * cfg.min_points_per_segment));
    return FitWindow{lo, hi};
}

// OLS of ln U+ on ln y+ over the in-window samples.
inline PowerLawFit fit_power_law(const VelocityProfile& p, const FitWindow& window) {
    validate_window(window);
    const std::vector<Sample> sel = detail::samples_in_window(p, window);
    if (sel.size() < 3)
        throw insufficient_data("run '" + p.run_id + "': " + std::to_string(sel.size()) +
                                " samples in window, need 3");
    std::vector<double> lx(sel.size()), ly(sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i) {
        lx[i] = std::log(sel[i].y_plus);
        ly[i] = std::log(sel[i].u_plus);
    }
    return detail::make_power_law_fit(fit_line(lx, ly), window, p.run_id);
}

// Best split of the in-window samples into two independent power-law
// segments. Returns nullopt ("no two-layer structure") when the optimal
// split separates the exponents by less than cfg.min_slope_gap.
inline std::optional<TwoLayerFit> fit_two_layer(const VelocityProfile& p, const FitWindow& window,
                                                const FitConfig& cfg) {
    validate_config(cfg);
    validate_window(window);
    const std::vector<Sample> sel = detail::samples_in_window(p, window);
    const int n = static_cast<int>(sel.size());
    const int m = cfg.min_points_per_segment;
    if (n < 2 * m)
        throw insufficient_data("run '" + p.run_id + "': " + std::to_string(n) +
                                " samples in window, need " + std::to_string(2 * m));

    std::vector<double> lx(sel.size()), ly(sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i) {
        lx[i] = std::log(sel[i].y_plus);
        ly[i] = std::log(sel[i].u_plus);
    }
    const detail::SegmentSse sse(lx, ly);

    // k = index of the last sample in segment 1
    const int k_lo = m - 1;
    const int k_hi = n - 1 - m;
    auto total = [&](int k) { return sse(0, k) + sse(k + 1, n - 1); };

    int best_k = k_lo;
    if (cfg.breakpoint_search == FitConfig::BreakpointSearch::exhaustive) {
        double best = total(k_lo);
        for (int k = k_lo + 1; k <= k_hi; ++k) {
            const double t = total(k);
            if (t < best) {  // strict: ties keep the smaller y+
                best = t;
                best_k = k;
            }
        }
    } else {
        // Ternary narrowing assumes the SSE profile is unimodal in k (true
        // for clean two-layer data); the final bracket is scanned exhaustively
        // so small plateaus cannot strand the search.
        int lo = k_lo, hi = k_hi;
        while (hi - lo > 8) {
            const int m1 = lo + (hi - lo) / 3;
            const int m2 = hi - (hi - lo) / 3;
            if (total(m1) <= total(m2))
                hi = m2 - 1;
            else
                lo = m1 + 1;
        }
        double best = total(lo);
        best_k = lo;
        for (int k = lo + 1; k <= hi; ++k) {
            const double t = total(k);
            if (t < best) {
                best = t;
                best_k = k;
            }
        }
    }

    // Exact refit of the winning segments.
    std::span<const double> lx1(lx.data(), best_k + 1), ly1(ly.data(), best_k + 1);
    std::span<const double> lx2(lx.data() + best_k + 1, n - best_k - 1),
        ly2(ly.data() + best_k + 1, n - best_k - 1);
    const LineFit l1 = fit_line(lx1, ly1);
    const LineFit l2 = fit_line(lx2, ly2);
    if (std::abs(l2.slope - l1.slope) < cfg.min_slope_gap) return std::nullopt;

    TwoLayerFit two;
    two.region1 = detail::make_power_law_fit(
        l1, FitWindow{sel.front().y_plus, sel[best_k].y_plus}, p.run_id);
    two.region2 = detail::make_power_law_fit(
        l2, FitWindow{sel[best_k + 1].y_plus, sel.back().y_plus}, p.run_id);
    two.breakpoint_y_plus = sel[best_k].y_plus;
    two.total_sse_log = l1.sse + l2.sse;
    return two;
}

// OLS of U+ on ln y+ over samples with y+ >= m1 and y+ <= m0 * delta95.
inline LogLawFit fit_log_law(const VelocityProfile& p, double m1, double m0,
                             double delta_fraction = 0.95) {
    if (!(m1 > 0.0)) throw domain_error("fit_log_law: m1 must be > 0");
    if (!(m0 > 0.0 && m0 < 1.0)) throw domain_error("fit_log_law: m0 must be in (0, 1)");
    const double y_hi = m0 * delta95(p, delta_fraction);

    std::vector<double> lx, u;
    for (const Sample& s : p.samples) {
        if (s.y_plus < m1 || s.y_plus > y_hi) continue;
        lx.push_back(std::log(s.y_plus));
        u.push_back(s.u_plus);
    }
    if (lx.size() < 3)
        throw insufficient_data("run '" + p.run_id + "': " + std::to_string(lx.size()) +
                                " samples in log-law window [" + std::to_string(m1) + ", " +
                                std::to_string(y_hi) + "], need 3");
    const LineFit line = fit_line(lx, u);
    if (!(line.slope > 0.0))
        throw degenerate_fit("run '" + p.run_id + "': non-positive log-law slope");

    LogLawFit f;
    f.kappa = 1.0 / line.slope;
    f.b_const = line.intercept;
    f.kappa_stderr = line.slope_stderr / (line.slope * line.slope);
    f.m1 = m1;
    f.m0 = m0;
    f.rms_residual = line.rms_residual;
    f.n_points = line.n;
    return f;
}

}  // namespace wallfit
