#pragma once

// Plain-text profile files and batch catalog loading.
//
// Canonical format: `# key = value` header lines followed by two
// whitespace-separated numeric columns. Recognized header keys: run_id,
// re_theta, u_inf, u_tau, nu, columns. Default columns are wall units
// (`y+ u+`); `columns = y u` switches to raw units, which requires u_tau
// and nu in the header and normalizes via y+ = y*u_tau/nu, U+ = U/u_tau
// (the standard wall-unit convention). Unknown keys are ignored so that
// externally published datasets load without editing.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fnmatch.h>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wallfit/types.hpp"

namespace wallfit {

enum class ColumnMode { wall_units, raw_units };

struct ParseOptions {
    ColumnMode default_columns = ColumnMode::wall_units;  // used when no `columns` header
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& tok, int line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw parse_error(line_no, "malformed number '" + tok + "'");
    }
    if (pos != tok.size()) throw parse_error(line_no, "malformed number '" + tok + "'");
    return v;
}

}  // namespace detail

inline VelocityProfile parse_profile(std::istream& in, const ParseOptions& opts = {}) {
    VelocityProfile p;
    p.run_id = "unnamed";
    p.re_theta = 0.0;
    std::optional<ColumnMode> columns;
    std::vector<std::string> seen_keys;

    std::string line;
    int line_no = 0;
    bool any_line = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = detail::trim(line);
        if (!s.empty()) any_line = true;
        if (s.empty()) continue;

        if (s.front() == '#') {
            std::string body = detail::trim(s.substr(1));
            std::size_t eq = body.find('=');
            if (eq == std::string::npos) continue;  // bare comment
            std::string key = detail::trim(body.substr(0, eq));
            std::string value = detail::trim(body.substr(eq + 1));
            if (key.empty()) continue;
            for (const std::string& k : seen_keys)
                if (k == key) throw parse_error(line_no, "duplicate header key '" + key + "'");
            seen_keys.push_back(key);

            if (key == "run_id") p.run_id = value;
            else if (key == "re_theta") p.re_theta = detail::parse_number(value, line_no);
            else if (key == "u_inf") p.u_inf = detail::parse_number(value, line_no);
            else if (key == "u_tau") p.u_tau = detail::parse_number(value, line_no);
            else if (key == "nu") p.nu = detail::parse_number(value, line_no);
            else if (key == "columns") {
                if (value == "y+ u+") columns = ColumnMode::wall_units;
                else if (value == "y u") columns = ColumnMode::raw_units;
                else throw parse_error(line_no, "unsupported columns spec '" + value + "'");
            }
            // other keys: tolerated, ignored
            continue;
        }

        std::istringstream row(s);
        std::string a, b, extra;
        row >> a >> b;
        if (b.empty()) throw parse_error(line_no, "expected two numeric columns");
        if (row >> extra) throw parse_error(line_no, "expected two numeric columns");
        p.samples.push_back(
            Sample{detail::parse_number(a, line_no), detail::parse_number(b, line_no)});
    }
    if (!any_line) throw parse_error(1, "empty input");

    const ColumnMode mode = columns.value_or(opts.default_columns);
    if (mode == ColumnMode::raw_units) {
        if (!p.u_tau || !p.nu)
            throw metadata_missing("run '" + p.run_id +
                                   "': raw-units columns require u_tau and nu header keys");
        for (Sample& s : p.samples) {
            s.y_plus = s.y_plus * *p.u_tau / *p.nu;
            s.u_plus = s.u_plus / *p.u_tau;
        }
    }
    validate_profile(p);
    return p;
}

inline VelocityProfile parse_profile_text(const std::string& text, const ParseOptions& opts = {}) {
    std::istringstream in(text);
    return parse_profile(in, opts);
}

inline VelocityProfile load_profile(const std::filesystem::path& path,
                                    const ParseOptions& opts = {}) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open '" + path.string() + "'");
    return parse_profile(in, opts);
}

// Canonical serialization; samples keep full round-trip precision.
inline void write_profile(std::ostream& out, const VelocityProfile& p) {
    char buf[80];
    out << "# run_id = " << p.run_id << "\n";
    std::snprintf(buf, sizeof(buf), "%.17g", p.re_theta);
    out << "# re_theta = " << buf << "\n";
    auto meta = [&](const char* key, const std::optional<double>& v) {
        if (!v) return;
        std::snprintf(buf, sizeof(buf), "%.17g", *v);
        out << "# " << key << " = " << buf << "\n";
    };
    meta("u_inf", p.u_inf);
    meta("u_tau", p.u_tau);
    meta("nu", p.nu);
    out << "# columns = y+ u+\n";
    for (const Sample& s : p.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g", s.y_plus, s.u_plus);
        out << buf << "\n";
    }
}

inline void save_profile(const std::filesystem::path& path, const VelocityProfile& p) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write '" + path.string() + "'");
    write_profile(out, p);
    if (!out) throw io_error("failed while writing '" + path.string() + "'");
}

struct CatalogFailure {
    std::string path;
    std::string message;
};

struct Catalog {
    std::vector<VelocityProfile> profiles;  // sorted by Re_theta
    std::vector<CatalogFailure> failures;   // per-file, non-fatal
};

struct CatalogOptions {
    std::string glob = "*.dat";
    ParseOptions parse;
};

// Loads every file matching the glob; per-file parse failures are collected
// rather than fatal. Zero parseable files is an error.
inline Catalog load_catalog(const std::filesystem::path& dir, const CatalogOptions& opts = {}) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec))
        throw io_error("'" + dir.string() + "' is not a readable directory");

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (fnmatch(opts.glob.c_str(), name.c_str(), 0) == 0) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    Catalog cat;
    for (const auto& f : files) {
        try {
            cat.profiles.push_back(load_profile(f, opts.parse));
        } catch (const error& e) {
            cat.failures.push_back(CatalogFailure{f.string(), e.what()});
        }
    }
    if (cat.profiles.empty())
        throw io_error("no parseable profile files in '" + dir.string() + "' (glob '" +
                       opts.glob + "', " + std::to_string(cat.failures.size()) + " failures)");
    std::stable_sort(cat.profiles.begin(), cat.profiles.end(),
                     [](const VelocityProfile& a, const VelocityProfile& b) {
                         return a.re_theta < b.re_theta;
                     });
    return cat;
}

}  // namespace wallfit
