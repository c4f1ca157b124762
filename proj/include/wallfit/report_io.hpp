#pragma once

// Serialization of pipeline results: per-run log-log profile columns with
// the fitted lines, pooled (ln y+, psi) collapse columns, per-window
// (Re_theta, kappa) columns, the summary table as CSV and aligned text, and
// a versioned machine-readable JSON report.
//
// Column files carry 6 significant digits (base-10 columns match the usual
// plotting convention); the JSON report keeps full double precision.
// Output is byte-deterministic for identical inputs.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wallfit/pipeline.hpp"

namespace wallfit {

namespace detail {

inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string fmt_fixed(double v, int decimals) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string sanitize_id(const std::string& id) {
    std::string s = id;
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
            c = '_';
    return s.empty() ? "unnamed" : s;
}

}  // namespace detail

inline std::string render_table_csv(std::span<const TableRow> rows) {
    std::string out = "re_theta,alpha,A,beta,B,ln_re1,ln_re2,ln_re,delta_percent\n";
    for (const TableRow& r : rows) {
        out += detail::fmt6(r.re_theta) + ',' + detail::fmt6(r.alpha) + ',' +
               detail::fmt6(r.a_coef) + ',' + detail::fmt6(r.beta) + ',' +
               detail::fmt6(r.b_coef) + ',' + detail::fmt6(r.ln_re1) + ',' +
               detail::fmt6(r.ln_re2) + ',' + detail::fmt6(r.ln_re) + ',' +
               detail::fmt_fixed(r.delta_percent, 1) + '\n';
    }
    return out;
}

inline std::string render_table_text(std::span<const TableRow> rows) {
    char buf[160];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%10s %7s %7s %7s %7s %8s %8s %8s %7s\n", "Re_theta",
                  "alpha", "A", "beta", "B", "ln(Re1)", "ln(Re2)", "ln(Re)", "Delta,%");
    out += buf;
    for (const TableRow& r : rows) {
        std::snprintf(buf, sizeof(buf), "%10.0f %7.3f %7.2f %7.3f %7.2f %8.2f %8.2f %8.2f %7.1f\n",
                      r.re_theta, r.alpha, r.a_coef, r.beta, r.b_coef, r.ln_re1, r.ln_re2,
                      r.ln_re, r.delta_percent);
        out += buf;
    }
    return out;
}

namespace detail {

inline nlohmann::json window_json(const FitWindow& w) {
    return {{"lo_y_plus", w.lo_y_plus}, {"hi_y_plus", w.hi_y_plus}};
}

inline nlohmann::json power_law_json(const PowerLawFit& f) {
    return {{"exponent", f.exponent},
            {"prefactor", f.prefactor},
            {"exponent_stderr", f.exponent_stderr},
            {"prefactor_rel_stderr", f.prefactor_rel_stderr},
            {"rms_log_residual", f.rms_log_residual},
            {"n_points", f.n_points},
            {"window", window_json(f.window)}};
}

inline nlohmann::json loglaw_json(const LogLawFit& f) {
    return {{"kappa", f.kappa},
            {"b_const", f.b_const},
            {"kappa_stderr", f.kappa_stderr},
            {"m1", f.m1},
            {"m0", f.m0},
            {"rms_residual", f.rms_residual},
            {"n_points", f.n_points}};
}

inline nlohmann::json constancy_json(const ConstancyResult& c) {
    return {{"verdict", c.verdict == Verdict::constant ? "constant" : "varying"},
            {"mean", c.mean},
            {"stddev", c.stddev},
            {"n_points", c.n_points}};
}

}  // namespace detail

inline nlohmann::json report_to_json(const PipelineResult& result) {
    using nlohmann::json;
    json runs = json::array();
    for (const RunReport& r : result.reports) {
        json run{{"run_id", r.run_id}, {"re_theta", r.re_theta}};
        run["window"] = r.window ? detail::window_json(*r.window) : json(nullptr);
        if (r.two_layer) {
            run["two_layer"] = {{"region1", detail::power_law_json(r.two_layer->region1)},
                                {"region2", detail::power_law_json(r.two_layer->region2)},
                                {"breakpoint_y_plus", r.two_layer->breakpoint_y_plus},
                                {"total_sse_log", r.two_layer->total_sse_log}};
        } else {
            run["two_layer"] = nullptr;
        }
        run["single_fit"] = r.single_fit ? detail::power_law_json(*r.single_fit) : json(nullptr);
        if (r.effective) {
            run["effective"] = {{"ln_re1", r.effective->ln_re1},
                                {"ln_re2", r.effective->ln_re2},
                                {"ln_re", r.effective->ln_re},
                                {"delta", r.effective->delta},
                                {"lambda_scale", r.effective->lambda_scale
                                                     ? json(*r.effective->lambda_scale)
                                                     : json(nullptr)}};
        } else {
            run["effective"] = nullptr;
        }
        if (r.collapse) {
            run["collapse"] = {{"rms_off_bisectrix", r.collapse->rms_off_bisectrix},
                               {"n_points", static_cast<int>(r.collapse->points.size())},
                               {"n_excluded", r.collapse->n_excluded}};
        } else {
            run["collapse"] = nullptr;
        }
        json gamma;
        gamma["region1"] = r.gamma.region1 ? detail::constancy_json(*r.gamma.region1) : json(nullptr);
        gamma["region2"] = r.gamma.region2 ? detail::constancy_json(*r.gamma.region2) : json(nullptr);
        gamma["window"] = r.gamma.window ? detail::constancy_json(*r.gamma.window) : json(nullptr);
        run["gamma"] = gamma;
        run["loglaw_traditional"] =
            r.loglaw_traditional ? detail::loglaw_json(*r.loglaw_traditional) : json(nullptr);
        run["loglaw_extended"] =
            r.loglaw_extended ? detail::loglaw_json(*r.loglaw_extended) : json(nullptr);
        run["delta_flagged"] = r.delta_flagged;
        run["notes"] = r.notes;
        run["issues"] = r.issues;
        runs.push_back(std::move(run));
    }

    json table = json::array();
    for (const TableRow& t : result.table)
        table.push_back({{"re_theta", t.re_theta},
                         {"alpha", t.alpha},
                         {"A", t.a_coef},
                         {"beta", t.beta},
                         {"B", t.b_coef},
                         {"ln_re1", t.ln_re1},
                         {"ln_re2", t.ln_re2},
                         {"ln_re", t.ln_re},
                         {"delta_percent", t.delta_percent}});

    return json{{"schema_version", 1}, {"runs", std::move(runs)}, {"table", std::move(table)}};
}

struct EmitOptions {
    std::filesystem::path out_dir;
    bool profiles = true;  // per-run log-log columns with fitted lines
    bool collapse = true;  // pooled (ln y+, psi) columns
    bool kappa = true;     // per-run (Re_theta, kappa) per window
    bool table = true;     // table.csv and table.txt
    bool json = true;      // report.json
};

// Writes the selected outputs; returns the paths written. `profiles` must be
// the same set the pipeline ran on (matched by run_id).
inline std::vector<std::filesystem::path> emit_outputs(const PipelineResult& result,
                                                       std::span<const VelocityProfile> profiles,
                                                       const EmitOptions& opts) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);
    if (!fs::is_directory(opts.out_dir))
        throw io_error("cannot create output directory '" + opts.out_dir.string() + "'");

    auto open = [&](const fs::path& p) {
        std::ofstream out(p);
        if (!out) throw io_error("cannot write '" + p.string() + "'");
        return out;
    };
    auto find_profile = [&](const std::string& run_id) -> const VelocityProfile* {
        for (const VelocityProfile& p : profiles)
            if (p.run_id == run_id) return &p;
        return nullptr;
    };

    std::vector<fs::path> written;
    const double ln10 = std::log(10.0);

    if (opts.profiles) {
        for (const RunReport& rep : result.reports) {
            const VelocityProfile* p = find_profile(rep.run_id);
            if (!p) continue;
            const fs::path path =
                opts.out_dir / ("profile_" + detail::sanitize_id(rep.run_id) + ".dat");
            std::ofstream out = open(path);
            out << "# run_id = " << rep.run_id << "\n";
            out << "# columns = lg_y_plus lg_u_plus lg_fit_region1 lg_fit_region2\n";
            const PowerLawFit* f1 = rep.two_layer ? &rep.two_layer->region1
                                    : rep.single_fit ? &*rep.single_fit
                                                     : nullptr;
            const PowerLawFit* f2 = rep.two_layer ? &rep.two_layer->region2 : nullptr;
            for (const Sample& s : p->samples) {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                double fit1 = (f1 && f1->window.contains(s.y_plus))
                                  ? std::log(f1->evaluate(s.y_plus)) / ln10
                                  : nan;
                double fit2 = (f2 && f2->window.contains(s.y_plus))
                                  ? std::log(f2->evaluate(s.y_plus)) / ln10
                                  : nan;
                out << detail::fmt6(std::log(s.y_plus) / ln10) << ' '
                    << detail::fmt6(std::log(s.u_plus) / ln10) << ' ' << detail::fmt6(fit1)
                    << ' ' << detail::fmt6(fit2) << "\n";
            }
            written.push_back(path);
        }
    }

    if (opts.collapse) {
        const fs::path path = opts.out_dir / "collapse.dat";
        std::ofstream out = open(path);
        out << "# columns = ln_y_plus psi\n";
        for (const RunReport& rep : result.reports) {
            if (!rep.collapse) continue;
            out << "# run = " << rep.run_id << "\n";
            for (const CollapsePoint& pt : rep.collapse->points)
                out << detail::fmt6(pt.ln_y_plus) << ' ' << detail::fmt6(pt.psi) << "\n";
        }
        written.push_back(path);
    }

    if (opts.kappa) {
        const fs::path path = opts.out_dir / "kappa_vs_re.dat";
        std::ofstream out = open(path);
        out << "# columns = re_theta kappa_traditional kappa_extended\n";
        for (const RunReport& rep : result.reports) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            out << detail::fmt6(rep.re_theta) << ' '
                << detail::fmt6(rep.loglaw_traditional ? rep.loglaw_traditional->kappa : nan)
                << ' '
                << detail::fmt6(rep.loglaw_extended ? rep.loglaw_extended->kappa : nan) << "\n";
        }
        written.push_back(path);
    }

    if (opts.table) {
        const fs::path csv = opts.out_dir / "table.csv";
        open(csv) << render_table_csv(result.table);
        written.push_back(csv);
        const fs::path txt = opts.out_dir / "table.txt";
        open(txt) << render_table_text(result.table);
        written.push_back(txt);
    }

    if (opts.json) {
        const fs::path path = opts.out_dir / "report.json";
        open(path) << report_to_json(result).dump(2) << "\n";
        written.push_back(path);
    }
    return written;
}

}  // namespace wallfit
