#pragma once

// Shared test fixtures: log-uniform grids and profiles built from a
// closed-form U+(y+) so every test states its ground truth explicitly.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "wallfit/types.hpp"

namespace testutil {

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double ln_lo = std::log(lo), ln_hi = std::log(hi);
    for (int i = 0; i < n; ++i) g[i] = std::exp(ln_lo + (ln_hi - ln_lo) * i / (n - 1));
    return g;
}

inline wallfit::VelocityProfile profile_from(const std::function<double(double)>& u_of_y,
                                             double lo, double hi, int n,
                                             std::string run_id = "test",
                                             double re_theta = 5000.0) {
    wallfit::VelocityProfile p;
    p.run_id = std::move(run_id);
    p.re_theta = re_theta;
    for (double y : log_grid(lo, hi, n)) p.samples.push_back(wallfit::Sample{y, u_of_y(y)});
    return p;
}

}  // namespace testutil
