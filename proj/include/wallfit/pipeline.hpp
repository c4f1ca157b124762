#pragma once

// Per-run analysis pipeline: window selection, two-layer fit, ln Re
// inversion, psi collapse, Gamma constancy, and both log-law fits. Per-run
// failures are recorded in the report and never abort the batch.

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wallfit/diagnostics.hpp"
#include "wallfit/fitting.hpp"
#include "wallfit/scaling.hpp"
#include "wallfit/types.hpp"

namespace wallfit {

struct PipelineConfig {
    FitConfig fit;
    double loglaw_m1_traditional = 50.0;
    double loglaw_m1_extended = 200.0;
    double loglaw_m0 = 0.15;
    double gamma_constancy_tol = 0.05;
    // A run is flagged inconsistent with the scaling law when delta exceeds
    // this fraction at re_theta above the floor.
    double delta_flag_threshold = 0.03;
    double delta_flag_re_theta_floor = 1.0e4;
    std::optional<double> collapse_ln_re;  // override for ensemble plots
};

struct GammaVerdicts {
    std::optional<ConstancyResult> region1;
    std::optional<ConstancyResult> region2;
    std::optional<ConstancyResult> window;  // whole intermediate window
};

struct RunReport {
    std::string run_id;
    double re_theta = 0.0;
    std::optional<FitWindow> window;
    std::optional<TwoLayerFit> two_layer;
    std::optional<PowerLawFit> single_fit;  // whole-window fit when no two-layer structure
    std::optional<EffectiveReynolds> effective;
    std::optional<CollapseResult> collapse;
    GammaVerdicts gamma;
    std::optional<LogLawFit> loglaw_traditional;
    std::optional<LogLawFit> loglaw_extended;
    bool delta_flagged = false;
    std::vector<std::string> notes;   // informational outcomes
    std::vector<std::string> issues;  // per-run failures
};

struct PipelineResult {
    std::vector<RunReport> reports;  // ordered by Re_theta
    std::vector<TableRow> table;     // runs with a two-layer fit and inversion
};

inline RunReport analyze_run(const VelocityProfile& profile, const PipelineConfig& cfg) {
    RunReport rep;
    rep.run_id = profile.run_id;
    rep.re_theta = profile.re_theta;

    std::optional<PowerLawFit> region1;
    try {
        const FitWindow window = select_intermediate_window(profile, cfg.fit);
        rep.window = window;
        rep.two_layer = fit_two_layer(profile, window, cfg.fit);
        if (rep.two_layer) {
            region1 = rep.two_layer->region1;
        } else {
            rep.notes.push_back("no two-layer structure detected");
            region1 = fit_power_law(profile, window);
            rep.single_fit = region1;
        }
    } catch (const error& e) {
        rep.issues.push_back(std::string("intermediate fit: ") + e.what());
    }

    if (region1) {
        try {
            const LnRePair lnre = solve_ln_re(*region1);
            EffectiveReynolds eff = effective_reynolds(lnre.ln_re1, lnre.ln_re2);
            if (profile.u_inf && profile.nu) eff.lambda_scale = length_scale_for(profile, eff);
            rep.effective = eff;
            rep.delta_flagged = eff.delta > cfg.delta_flag_threshold &&
                                profile.re_theta > cfg.delta_flag_re_theta_floor;
        } catch (const error& e) {
            rep.issues.push_back(std::string("inversion: ") + e.what());
        }
    }

    if (region1 && (rep.effective || cfg.collapse_ln_re)) {
        try {
            const double ln_re =
                cfg.collapse_ln_re ? *cfg.collapse_ln_re : rep.effective->ln_re;
            rep.collapse = collapse_profile(profile, region1->window, ln_re);
        } catch (const error& e) {
            rep.issues.push_back(std::string("collapse: ") + e.what());
        }
    }

    try {
        const GammaSeries series = gamma_series(profile);
        auto check = [&](const FitWindow& w) -> std::optional<ConstancyResult> {
            try {
                return constancy_check(series, w, cfg.gamma_constancy_tol);
            } catch (const error&) {
                return std::nullopt;  // too few interior points in this window
            }
        };
        if (rep.two_layer) {
            rep.gamma.region1 = check(rep.two_layer->region1.window);
            rep.gamma.region2 = check(rep.two_layer->region2.window);
        }
        if (rep.window) rep.gamma.window = check(*rep.window);
    } catch (const error& e) {
        rep.issues.push_back(std::string("gamma: ") + e.what());
    }

    auto loglaw = [&](double m1) -> std::optional<LogLawFit> {
        try {
            return fit_log_law(profile, m1, cfg.loglaw_m0, cfg.fit.delta95_fraction);
        } catch (const error& e) {
            rep.issues.push_back("log-law fit (m1=" + std::to_string(m1) + "): " + e.what());
            return std::nullopt;
        }
    };
    rep.loglaw_traditional = loglaw(cfg.loglaw_m1_traditional);
    rep.loglaw_extended = loglaw(cfg.loglaw_m1_extended);
    return rep;
}

// Profiles are analyzed independently; reports and the table come back
// ordered by Re_theta, so the result is deterministic for a given input set.
inline PipelineResult run_pipeline(std::span<const VelocityProfile> profiles,
                                   const PipelineConfig& cfg = {}) {
    if (profiles.empty()) throw insufficient_data("run_pipeline: empty catalog");
    PipelineResult out;
    out.reports.reserve(profiles.size());

    std::vector<std::size_t> order(profiles.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return profiles[a].re_theta < profiles[b].re_theta;
    });

    std::vector<RunSummary> summaries;
    for (std::size_t idx : order) {
        RunReport rep = analyze_run(profiles[idx], cfg);
        if (rep.two_layer && rep.effective)
            summaries.push_back(RunSummary{rep.re_theta, *rep.two_layer, *rep.effective});
        out.reports.push_back(std::move(rep));
    }
    out.table = build_table(std::move(summaries));
    return out;
}

}  // namespace wallfit
