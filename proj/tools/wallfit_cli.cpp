// Command-line front end: batch ingestion of velocity-profile files,
// two-layer fits, effective-Reynolds inversion, collapse/Gamma/log-law
// diagnostics, synthetic data generation, and report emission.
//
// Exit codes: 0 success, 1 partial (some runs or files failed), 2 fatal.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wallfit/wallfit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliState {
    std::string config_path;
    std::string out_dir;
    std::string glob = "*.dat";
    std::string columns = "y+ u+";
    std::vector<std::string> inputs;

    wallfit::PipelineConfig pipeline;
    int bins_per_decade = 20;

    std::vector<wallfit::VelocityProfile> profiles;
    std::vector<wallfit::CatalogFailure> failures;
};

void apply_config_file(CliState& st) {
    if (st.config_path.empty()) return;
    std::ifstream in(st.config_path);
    if (!in) throw wallfit::io_error("cannot open config '" + st.config_path + "'");
    json cfg = json::parse(in);

    if (cfg.contains("fit")) {
        const json& f = cfg["fit"];
        auto& fc = st.pipeline.fit;
        fc.sublayer_cutoff_y_plus = f.value("sublayer_cutoff_y_plus", fc.sublayer_cutoff_y_plus);
        fc.wake_cutoff_velocity_fraction =
            f.value("wake_cutoff_velocity_fraction", fc.wake_cutoff_velocity_fraction);
        fc.min_points_per_segment = f.value("min_points_per_segment", fc.min_points_per_segment);
        fc.min_slope_gap = f.value("min_slope_gap", fc.min_slope_gap);
        fc.delta95_fraction = f.value("delta95_fraction", fc.delta95_fraction);
        const std::string search = f.value("breakpoint_search", std::string("exhaustive"));
        if (search == "golden-section")
            fc.breakpoint_search = wallfit::FitConfig::BreakpointSearch::golden_section;
        else if (search != "exhaustive")
            throw wallfit::validation_error("config: unknown breakpoint_search '" + search + "'");
    }
    if (cfg.contains("loglaw")) {
        const json& l = cfg["loglaw"];
        st.pipeline.loglaw_m1_traditional =
            l.value("m1_traditional", st.pipeline.loglaw_m1_traditional);
        st.pipeline.loglaw_m1_extended = l.value("m1_extended", st.pipeline.loglaw_m1_extended);
        st.pipeline.loglaw_m0 = l.value("m0", st.pipeline.loglaw_m0);
    }
    st.pipeline.gamma_constancy_tol =
        cfg.value("gamma_constancy_tol", st.pipeline.gamma_constancy_tol);
    st.glob = cfg.value("glob", st.glob);
    st.columns = cfg.value("columns", st.columns);
    st.bins_per_decade = cfg.value("bins_per_decade", st.bins_per_decade);
}

wallfit::ParseOptions parse_options(const CliState& st) {
    wallfit::ParseOptions opts;
    if (st.columns == "y u")
        opts.default_columns = wallfit::ColumnMode::raw_units;
    else if (st.columns == "y+ u+")
        opts.default_columns = wallfit::ColumnMode::wall_units;
    else
        throw wallfit::validation_error("unknown columns mode '" + st.columns +
                                        "' (expected 'y+ u+' or 'y u')");
    return opts;
}

// Files and/or directories; directories go through the catalog loader.
// Falls back to WALLFIT_DATA_DIR when no inputs are given.
void load_inputs(CliState& st) {
    std::vector<std::string> inputs = st.inputs;
    if (inputs.empty()) {
        if (const char* env = std::getenv("WALLFIT_DATA_DIR")) inputs.push_back(env);
        else throw wallfit::io_error("no inputs given and WALLFIT_DATA_DIR is not set");
    }
    const wallfit::ParseOptions popts = parse_options(st);
    for (const std::string& in : inputs) {
        if (fs::is_directory(in)) {
            wallfit::CatalogOptions copts;
            copts.glob = st.glob;
            copts.parse = popts;
            wallfit::Catalog cat = wallfit::load_catalog(in, copts);
            for (auto& p : cat.profiles) st.profiles.push_back(std::move(p));
            for (auto& f : cat.failures) st.failures.push_back(std::move(f));
        } else {
            try {
                st.profiles.push_back(wallfit::load_profile(in, popts));
            } catch (const wallfit::error& e) {
                st.failures.push_back({in, e.what()});
            }
        }
    }
    if (st.profiles.empty()) throw wallfit::io_error("no parseable profiles among the inputs");
    std::stable_sort(st.profiles.begin(), st.profiles.end(),
                     [](const auto& a, const auto& b) { return a.re_theta < b.re_theta; });
    for (const auto& f : st.failures)
        std::cerr << "warning: skipped " << f.path << ": " << f.message << "\n";
}

int issues_exit_code(const CliState& st, const wallfit::PipelineResult& result) {
    bool partial = !st.failures.empty();
    for (const auto& rep : result.reports)
        if (!rep.issues.empty()) partial = true;
    return partial ? 1 : 0;
}

std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

fs::path out_dir_or(const CliState& st, const char* fallback) {
    return st.out_dir.empty() ? fs::path(fallback) : fs::path(st.out_dir);
}

int cmd_fit(CliState& st) {
    load_inputs(st);
    wallfit::PipelineResult result = wallfit::run_pipeline(st.profiles, st.pipeline);
    for (const auto& rep : result.reports) {
        std::cout << rep.run_id << " (Re_theta " << fmt6(rep.re_theta) << "): ";
        if (rep.two_layer) {
            const auto& t = *rep.two_layer;
            std::cout << "alpha=" << fmt6(t.region1.exponent) << " A=" << fmt6(t.region1.prefactor)
                      << " beta=" << fmt6(t.region2.exponent) << " B=" << fmt6(t.region2.prefactor)
                      << " breakpoint=" << fmt6(t.breakpoint_y_plus);
        } else if (rep.single_fit) {
            std::cout << "single power law: exponent=" << fmt6(rep.single_fit->exponent)
                      << " prefactor=" << fmt6(rep.single_fit->prefactor)
                      << " (no two-layer structure)";
        } else {
            std::cout << "fit failed";
        }
        for (const auto& msg : rep.issues) std::cout << " [" << msg << "]";
        std::cout << "\n";
    }
    return issues_exit_code(st, result);
}

int cmd_table(CliState& st, bool write_files) {
    load_inputs(st);
    wallfit::PipelineResult result = wallfit::run_pipeline(st.profiles, st.pipeline);
    std::cout << wallfit::render_table_text(result.table);
    for (const auto& rep : result.reports)
        if (rep.effective && rep.delta_flagged)
            std::cout << "# flagged: " << rep.run_id << " delta="
                      << fmt6(100.0 * rep.effective->delta) << "% at Re_theta "
                      << fmt6(rep.re_theta) << "\n";
    if (write_files) {
        wallfit::EmitOptions opts;
        opts.out_dir = out_dir_or(st, "wallfit_out");
        opts.profiles = opts.collapse = opts.kappa = opts.json = false;
        for (const auto& p : wallfit::emit_outputs(result, st.profiles, opts))
            std::cout << "# wrote " << p.string() << "\n";
    }
    return issues_exit_code(st, result);
}

int cmd_collapse(CliState& st, std::optional<double> ln_re_override) {
    load_inputs(st);
    st.pipeline.collapse_ln_re = ln_re_override;
    wallfit::PipelineResult result = wallfit::run_pipeline(st.profiles, st.pipeline);

    double sum_sq = 0.0;
    long n = 0;
    for (const auto& rep : result.reports) {
        if (!rep.collapse) continue;
        for (const auto& pt : rep.collapse->points) {
            const double off = pt.psi - pt.ln_y_plus;
            sum_sq += off * off;
            ++n;
        }
        std::cout << rep.run_id << ": rms " << fmt6(rep.collapse->rms_off_bisectrix) << " over "
                  << rep.collapse->points.size() << " points (" << rep.collapse->n_excluded
                  << " excluded)\n";
    }
    if (n > 0) std::cout << "pooled rms: " << fmt6(std::sqrt(sum_sq / n)) << "\n";

    wallfit::EmitOptions opts;
    opts.out_dir = out_dir_or(st, "wallfit_out");
    opts.profiles = opts.kappa = opts.table = opts.json = false;
    for (const auto& p : wallfit::emit_outputs(result, st.profiles, opts))
        std::cout << "# wrote " << p.string() << "\n";
    return issues_exit_code(st, result);
}

int cmd_gamma(CliState& st) {
    load_inputs(st);
    const fs::path dir = out_dir_or(st, "wallfit_out");
    fs::create_directories(dir);

    int bad = 0;
    double y_lo = 1e300, y_hi = 0.0;
    for (const auto& p : st.profiles) {
        y_lo = std::min(y_lo, p.samples.front().y_plus);
        y_hi = std::max(y_hi, p.samples.back().y_plus);
        try {
            const wallfit::GammaSeries series = wallfit::gamma_series(p);
            const wallfit::FitWindow window{series.points.front().y_plus,
                                            series.points.back().y_plus};
            const wallfit::ConstancyResult c =
                wallfit::constancy_check(series, window, st.pipeline.gamma_constancy_tol);
            std::cout << p.run_id << ": "
                      << (c.verdict == wallfit::Verdict::constant ? "constant" : "varying")
                      << " (mean " << fmt6(c.mean) << ", stddev " << fmt6(c.stddev) << ")\n";
            std::ofstream out(dir / ("gamma_" + p.run_id + ".dat"));
            out << "# run_id = " << p.run_id << "\n# columns = y_plus gamma\n";
            for (const auto& pt : series.points)
                out << fmt6(pt.y_plus) << ' ' << fmt6(pt.gamma) << "\n";
        } catch (const wallfit::error& e) {
            std::cerr << "warning: " << p.run_id << ": " << e.what() << "\n";
            ++bad;
        }
    }

    if (st.profiles.size() >= 2) {
        wallfit::LogBinSpec bins{y_lo, y_hi, st.bins_per_decade};
        const wallfit::GammaEnsemble ens = wallfit::gamma_ensemble_average(st.profiles, bins);
        std::ofstream out(dir / "gamma_ensemble.dat");
        out << "# columns = bin_lo bin_hi mean_gamma run_count\n";
        for (std::size_t b = 0; b + 1 < ens.bin_edges.size(); ++b) {
            if (ens.run_count_per_bin[b] == 0) continue;
            out << fmt6(ens.bin_edges[b]) << ' ' << fmt6(ens.bin_edges[b + 1]) << ' '
                << fmt6(ens.mean_gamma[b]) << ' ' << ens.run_count_per_bin[b] << "\n";
        }
        std::cout << "# wrote " << (dir / "gamma_ensemble.dat").string() << "\n";
    }
    return (bad > 0 || !st.failures.empty()) ? 1 : 0;
}

int cmd_loglaw(CliState& st) {
    load_inputs(st);
    wallfit::PipelineResult result = wallfit::run_pipeline(st.profiles, st.pipeline);
    for (const auto& rep : result.reports) {
        std::cout << rep.run_id << " (Re_theta " << fmt6(rep.re_theta) << "):";
        auto show = [&](const char* tag, const std::optional<wallfit::LogLawFit>& f) {
            if (f)
                std::cout << "  " << tag << ": kappa=" << fmt6(f->kappa)
                          << " B=" << fmt6(f->b_const) << " rms=" << fmt6(f->rms_residual);
            else
                std::cout << "  " << tag << ": failed";
        };
        show("m1=50-style", rep.loglaw_traditional);
        show("extended", rep.loglaw_extended);
        std::cout << "\n";
    }
    if (!st.out_dir.empty()) {
        wallfit::EmitOptions opts;
        opts.out_dir = st.out_dir;
        opts.profiles = opts.collapse = opts.table = opts.json = false;
        for (const auto& p : wallfit::emit_outputs(result, st.profiles, opts))
            std::cout << "# wrote " << p.string() << "\n";
    }
    return issues_exit_code(st, result);
}

struct SynthCli {
    int count = 1;
    double ln_re_min = 10.5, ln_re_max = 13.0;
    double breakpoint = 300.0;
    double beta = 0.2;
    double y_min = 30.0, y_max = 3.0e4;
    int points = 200;
    double noise = 0.0;
    unsigned long long seed = 1;
    bool sublayer = false;
};

int cmd_synth(CliState& st, const SynthCli& s) {
    const fs::path dir = out_dir_or(st, "wallfit_out");
    fs::create_directories(dir);
    std::vector<wallfit::SynthSpec> specs(s.count);
    for (int i = 0; i < s.count; ++i) {
        auto& sp = specs[i];
        sp.ln_re = s.count == 1 ? s.ln_re_min
                                : s.ln_re_min + (s.ln_re_max - s.ln_re_min) * i / (s.count - 1);
        sp.breakpoint_y_plus = s.breakpoint;
        sp.beta = s.beta;
        sp.y_plus_min = s.y_min;
        sp.y_plus_max = s.y_max;
        sp.n_points = s.points;
        sp.noise_rel_sigma = s.noise;
        sp.seed = s.seed + static_cast<unsigned long long>(i);
        sp.include_sublayer = s.sublayer;
    }
    const auto profiles = wallfit::generate_ensemble(specs);
    for (const auto& p : profiles) {
        const fs::path path = dir / (p.run_id + ".dat");
        wallfit::save_profile(path, p);
        std::cout << "# wrote " << path.string() << "\n";
    }
    return 0;
}

int cmd_report(CliState& st) {
    load_inputs(st);
    wallfit::PipelineResult result = wallfit::run_pipeline(st.profiles, st.pipeline);
    wallfit::EmitOptions opts;
    opts.out_dir = out_dir_or(st, "wallfit_out");
    for (const auto& p : wallfit::emit_outputs(result, st.profiles, opts))
        std::cout << "# wrote " << p.string() << "\n";
    std::cout << wallfit::render_table_text(result.table);
    int n_issues = 0;
    for (const auto& rep : result.reports) n_issues += static_cast<int>(rep.issues.size());
    if (n_issues > 0) std::cout << "# " << n_issues << " per-run issue(s); see report.json\n";
    return issues_exit_code(st, result);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wallfit: two-layer scaling-law analysis of turbulent boundary-layer "
                 "mean-velocity profiles in wall units"};
    app.set_version_flag("--version", "wallfit 0.1.0");
    app.require_subcommand(1);

    CliState st;
    app.add_option("-c,--config", st.config_path, "JSON config file");
    app.add_option("-o,--outdir", st.out_dir, "output directory (default wallfit_out)");
    app.add_option("--glob", st.glob, "filename glob for directory inputs (default *.dat)");
    app.add_option("--columns", st.columns,
                   "default column layout for files without a columns header: 'y+ u+' or 'y u'");

    auto add_inputs = [&](CLI::App* cmd) {
        cmd->add_option("inputs", st.inputs, "profile files and/or directories");
    };

    auto* fit = app.add_subcommand("fit", "two-layer power-law fits per run");
    add_inputs(fit);

    auto* table = app.add_subcommand("table", "summary table of fits and effective Re");
    add_inputs(table);

    auto* collapse = app.add_subcommand("collapse", "psi-collapse diagnostic and data file");
    add_inputs(collapse);
    double ln_re_override = 0.0;
    auto* lnre_opt =
        collapse->add_option("--ln-re", ln_re_override, "use a global ln Re instead of per-run");

    auto* gamma = app.add_subcommand("gamma", "diagnostic-function series and ensemble average");
    add_inputs(gamma);
    gamma->add_option("--bins-per-decade", st.bins_per_decade, "ensemble bins per decade");

    auto* loglaw = app.add_subcommand("loglaw", "log-law fits under both fit windows");
    add_inputs(loglaw);
    loglaw->add_option("--m1", st.pipeline.loglaw_m1_traditional, "traditional lower y+ limit");
    loglaw->add_option("--m1-extended", st.pipeline.loglaw_m1_extended, "extended lower y+ limit");
    loglaw->add_option("--m0", st.pipeline.loglaw_m0, "outer-fraction limit");

    auto* synth = app.add_subcommand("synth", "generate synthetic profiles");
    SynthCli sc;
    synth->add_option("--count", sc.count, "number of runs");
    synth->add_option("--ln-re-min", sc.ln_re_min, "smallest ln Re");
    synth->add_option("--ln-re-max", sc.ln_re_max, "largest ln Re");
    synth->add_option("--breakpoint", sc.breakpoint, "breakpoint y+");
    synth->add_option("--beta", sc.beta, "region-2 exponent");
    synth->add_option("--ymin", sc.y_min, "grid lower y+");
    synth->add_option("--ymax", sc.y_max, "grid upper y+");
    synth->add_option("--points", sc.points, "samples per profile");
    synth->add_option("--noise", sc.noise, "multiplicative noise sigma");
    synth->add_option("--seed", sc.seed, "base RNG seed");
    synth->add_flag("--sublayer", sc.sublayer, "include viscous-sublayer samples");

    auto* report = app.add_subcommand("report", "full pipeline: all outputs");
    add_inputs(report);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_config_file(st);
        if (fit->parsed()) return cmd_fit(st);
        if (table->parsed()) return cmd_table(st, !st.out_dir.empty());
        if (collapse->parsed())
            return cmd_collapse(st, lnre_opt->count() ? std::optional<double>(ln_re_override)
                                                      : std::nullopt);
        if (gamma->parsed()) return cmd_gamma(st);
        if (loglaw->parsed()) return cmd_loglaw(st);
        if (synth->parsed()) return cmd_synth(st, sc);
        if (report->parsed()) return cmd_report(st);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
