#pragma once

// Ordinary least squares on (x, y) pairs — the one kernel behind both the
// power-law fitter (ln y+, ln U+) and the log-law fitter (ln y+, U+).
// Residuals are computed in a second explicit pass: the textbook
// Syy - b*Sxy shortcut cancels catastrophically on near-exact data and
// would report rms ~1e-9 where the true value is ~1e-16.

#include <cmath>
#include <span>

#include "wallfit/errors.hpp"

namespace wallfit {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    double sse = 0.0;           // sum of squared residuals
    double rms_residual = 0.0;  // sqrt(sse / n)
    int n = 0;
};

inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const int n = static_cast<int>(x.size());
    if (n < 3 || y.size() != x.size())
        throw insufficient_data("fit_line: need at least 3 (x, y) pairs");

    double x_mean = 0.0, y_mean = 0.0;
    for (int i = 0; i < n; ++i) {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= n;
    y_mean /= n;

    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double dx = x[i] - x_mean;
        sxx += dx * dx;
        sxy += dx * (y[i] - y_mean);
    }
    if (!(sxx > 0.0)) throw degenerate_fit("fit_line: zero variance in abscissa");

    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = y_mean - f.slope * x_mean;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        f.sse += r * r;
    }
    f.rms_residual = std::sqrt(f.sse / n);
    const double var = f.sse / (n - 2);
    f.slope_stderr = std::sqrt(var / sxx);
    f.intercept_stderr = std::sqrt(var * (1.0 / n + x_mean * x_mean / sxx));
    return f;
}

}  // namespace wallfit
