#pragma once

// The diagnostic function Gamma = (y+/U+) dU+/dy+ (equal to the log-log
// slope d ln U+ / d ln y+), its per-run constancy check, the ensemble
// average that reproduces the decreasing-Gamma artifact, and the summary
// table builder.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "wallfit/scaling.hpp"
#include "wallfit/types.hpp"

namespace wallfit {

// Centered differences of ln U+ against ln y+ at the interior samples;
// algebraically the same as (y+/U+) dU+/dy+ but far better conditioned on
// log-spaced grids. One-sided endpoint estimates are stored separately.
inline GammaSeries gamma_series(const VelocityProfile& p) {
    const std::size_t n = p.samples.size();
    if (n < 3) throw insufficient_data("run '" + p.run_id + "': gamma needs >= 3 samples");

    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(p.samples[i].y_plus);
        ly[i] = std::log(p.samples[i].u_plus);
    }

    GammaSeries out;
    out.points.reserve(n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i)
        out.points.push_back(
            GammaPoint{p.samples[i].y_plus, (ly[i + 1] - ly[i - 1]) / (lx[i + 1] - lx[i - 1])});
    out.first_one_sided = GammaPoint{p.samples[0].y_plus, (ly[1] - ly[0]) / (lx[1] - lx[0])};
    out.last_one_sided =
        GammaPoint{p.samples[n - 1].y_plus, (ly[n - 1] - ly[n - 2]) / (lx[n - 1] - lx[n - 2])};
    return out;
}

enum class Verdict { constant, varying };

struct ConstancyResult {
    Verdict verdict = Verdict::varying;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
    int n_points = 0;
};

// Gamma should be constant wherever a power law holds at fixed Re: the
// verdict is `constant` iff stddev/mean <= tol over the in-window interior
// points (one-sided endpoints never participate).
inline ConstancyResult constancy_check(const GammaSeries& series, const FitWindow& window,
                                       double tol = 0.05) {
    validate_window(window);
    std::vector<double> g;
    for (const GammaPoint& pt : series.points)
        if (window.contains(pt.y_plus)) g.push_back(pt.gamma);
    if (g.size() < 3)
        throw insufficient_data("constancy_check: " + std::to_string(g.size()) +
                                " in-window gamma points, need 3");

    ConstancyResult r;
    r.n_points = static_cast<int>(g.size());
    for (double v : g) r.mean += v;
    r.mean /= r.n_points;
    double ss = 0.0;
    for (double v : g) ss += (v - r.mean) * (v - r.mean);
    r.stddev = std::sqrt(ss / r.n_points);
    r.verdict = (r.stddev <= tol * std::abs(r.mean)) ? Verdict::constant : Verdict::varying;
    return r;
}

struct LogBinSpec {
    double lo_y_plus = 0.0;
    double hi_y_plus = 0.0;
    int bins_per_decade = 20;
};

inline std::vector<double> make_log_bin_edges(const LogBinSpec& spec) {
    if (!(spec.lo_y_plus > 0.0 && spec.lo_y_plus < spec.hi_y_plus))
        throw validation_error("LogBinSpec: need 0 < lo < hi");
    if (spec.bins_per_decade < 1) throw validation_error("LogBinSpec: bins_per_decade >= 1");
    const double decades = std::log10(spec.hi_y_plus / spec.lo_y_plus);
    const int n_bins = std::max(1, static_cast<int>(std::ceil(decades * spec.bins_per_decade)));
    std::vector<double> edges(n_bins + 1);
    for (int i = 0; i <= n_bins; ++i)
        edges[i] = spec.lo_y_plus * std::pow(spec.hi_y_plus / spec.lo_y_plus,
                                             static_cast<double>(i) / n_bins);
    return edges;
}

struct GammaEnsemble {
    std::vector<double> bin_edges;        // n_bins + 1, strictly increasing
    std::vector<double> mean_gamma;       // NaN where no run has samples
    std::vector<int> run_count_per_bin;
};

// Per-bin arithmetic mean of Gamma across runs: each run contributes the
// average of its interior Gamma points inside the bin, every covering run
// with equal weight. Bins are half-open [lo, hi), the last closed.
inline GammaEnsemble gamma_ensemble_average(std::span<const VelocityProfile> profiles,
                                            const LogBinSpec& bins) {
    if (profiles.size() < 2)
        throw insufficient_data("gamma_ensemble_average: need at least 2 profiles");
    GammaEnsemble out;
    out.bin_edges = make_log_bin_edges(bins);
    const std::size_t n_bins = out.bin_edges.size() - 1;
    out.mean_gamma.assign(n_bins, std::numeric_limits<double>::quiet_NaN());
    out.run_count_per_bin.assign(n_bins, 0);

    std::vector<double> sum(n_bins, 0.0);
    for (const VelocityProfile& p : profiles) {
        const GammaSeries series = gamma_series(p);
        std::vector<double> run_sum(n_bins, 0.0);
        std::vector<int> run_cnt(n_bins, 0);
        for (const GammaPoint& pt : series.points) {
            if (pt.y_plus < out.bin_edges.front() || pt.y_plus > out.bin_edges.back()) continue;
            auto it = std::upper_bound(out.bin_edges.begin(), out.bin_edges.end(), pt.y_plus);
            std::size_t b = static_cast<std::size_t>(it - out.bin_edges.begin());
            b = (b == 0) ? 0 : std::min(b - 1, n_bins - 1);
            run_sum[b] += pt.gamma;
            ++run_cnt[b];
        }
        for (std::size_t b = 0; b < n_bins; ++b) {
            if (run_cnt[b] == 0) continue;
            sum[b] += run_sum[b] / run_cnt[b];
            ++out.run_count_per_bin[b];
        }
    }
    for (std::size_t b = 0; b < n_bins; ++b)
        if (out.run_count_per_bin[b] > 0) out.mean_gamma[b] = sum[b] / out.run_count_per_bin[b];
    return out;
}

// One row of the per-run summary table.
struct TableRow {
    double re_theta = 0.0;
    double alpha = 0.0;
    double a_coef = 0.0;
    double beta = 0.0;
    double b_coef = 0.0;
    double ln_re1 = 0.0;
    double ln_re2 = 0.0;
    double ln_re = 0.0;
    double delta_percent = 0.0;
};

struct RunSummary {
    double re_theta = 0.0;
    TwoLayerFit fit;
    EffectiveReynolds eff;
};

// Unrounded rows sorted by Re_theta; rendering (percent with one decimal,
// alignment) is the report layer's concern.
inline std::vector<TableRow> build_table(std::vector<RunSummary> runs) {
    std::sort(runs.begin(), runs.end(),
              [](const RunSummary& a, const RunSummary& b) { return a.re_theta < b.re_theta; });
    std::vector<TableRow> rows;
    rows.reserve(runs.size());
    for (const RunSummary& r : runs) {
        TableRow row;
        row.re_theta = r.re_theta;
        row.alpha = r.fit.region1.exponent;
        row.a_coef = r.fit.region1.prefactor;
        row.beta = r.fit.region2.exponent;
        row.b_coef = r.fit.region2.prefactor;
        row.ln_re1 = r.eff.ln_re1;
        row.ln_re2 = r.eff.ln_re2;
        row.ln_re = r.eff.ln_re;
        row.delta_percent = 100.0 * r.eff.delta;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace wallfit
