#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "wallfit/diagnostics.hpp"
#include "wallfit/synth.hpp"

using namespace wallfit;
using testutil::profile_from;

TEST_CASE("gamma of an exact power law is the exponent", "[diagnostics]") {
    auto prof = profile_from([](double y) { return 3.7 * std::pow(y, 0.22); }, 10.0, 1e4, 60);
    const GammaSeries g = gamma_series(prof);
    REQUIRE(g.points.size() == prof.samples.size() - 2);
    for (const GammaPoint& pt : g.points) CHECK(pt.gamma == Catch::Approx(0.22).margin(1e-12));
    // one-sided endpoint estimates are exact on a line too
    CHECK(g.first_one_sided.gamma == Catch::Approx(0.22).margin(1e-12));
    CHECK(g.last_one_sided.gamma == Catch::Approx(0.22).margin(1e-12));
    CHECK(g.first_one_sided.y_plus == prof.samples.front().y_plus);
    CHECK(g.last_one_sided.y_plus == prof.samples.back().y_plus);
}

TEST_CASE("gamma of an exact log law decays like 1/(kappa U+)", "[diagnostics]") {
    const double kappa = 0.38, b = 4.1;
    auto u_of_y = [&](double y) { return std::log(y) / kappa + b; };
    auto prof = profile_from(u_of_y, 50.0, 5000.0, 400);  // fine grid: tiny stencil truncation
    const GammaSeries g = gamma_series(prof);

    // closed form at the sample nearest y+ = 100
    std::size_t idx = 0;
    for (std::size_t i = 0; i < g.points.size(); ++i)
        if (std::abs(g.points[i].y_plus - 100.0) < std::abs(g.points[idx].y_plus - 100.0)) idx = i;
    const double expected = 1.0 / (kappa * u_of_y(g.points[idx].y_plus));
    CHECK(g.points[idx].gamma == Catch::Approx(expected).margin(1e-6));

    for (std::size_t i = 0; i + 1 < g.points.size(); ++i)
        CHECK(g.points[i + 1].gamma < g.points[i].gamma);
}

TEST_CASE("gamma across a two-layer profile switches slope at the breakpoint", "[diagnostics]") {
    SynthSpec spec;
    spec.ln_re = 9.4;
    spec.breakpoint_y_plus = 300.0;
    spec.beta = 0.226;
    spec.y_plus_min = 30.0;
    spec.y_plus_max = 3000.0;
    spec.n_points = 100;
    const VelocityProfile prof = generate_profile(spec);
    const double alpha = scaling_law_alpha(spec.ln_re);

    const GammaSeries g = gamma_series(prof);
    for (std::size_t i = 0; i < g.points.size(); ++i) {
        const double y_prev = prof.samples[i].y_plus;      // stencil left end
        const double y_next = prof.samples[i + 2].y_plus;  // stencil right end
        if (y_next <= spec.breakpoint_y_plus)
            CHECK(g.points[i].gamma == Catch::Approx(alpha).margin(1e-9));
        else if (y_prev > spec.breakpoint_y_plus)
            CHECK(g.points[i].gamma == Catch::Approx(spec.beta).margin(1e-9));
        // stencils straddling the breakpoint are in between; not asserted
    }
}

TEST_CASE("gamma is invariant under velocity and wall-distance rescaling",
          "[diagnostics][property]") {
    SynthSpec spec;
    spec.ln_re = 11.0;
    spec.breakpoint_y_plus = 400.0;
    spec.beta = 0.2;
    spec.noise_rel_sigma = 0.01;
    spec.seed = 99;
    const VelocityProfile prof = generate_profile(spec);
    const GammaSeries base = gamma_series(prof);

    VelocityProfile scaled_u = prof;
    for (Sample& s : scaled_u.samples) s.u_plus *= 3.7;
    VelocityProfile scaled_y = prof;
    for (Sample& s : scaled_y.samples) s.y_plus *= 0.83;

    const GammaSeries gu = gamma_series(scaled_u);
    const GammaSeries gy = gamma_series(scaled_y);
    for (std::size_t i = 0; i < base.points.size(); ++i) {
        CHECK(gu.points[i].gamma == Catch::Approx(base.points[i].gamma).margin(1e-12));
        CHECK(gy.points[i].gamma == Catch::Approx(base.points[i].gamma).margin(1e-12));
    }
}

TEST_CASE("constancy check", "[diagnostics]") {
    const FitWindow wide{1.0, 1e6};

    SECTION("exact power law is constant with zero spread") {
        auto prof = profile_from([](double y) { return 5.0 * std::pow(y, 0.16); }, 30.0, 3000.0,
                                 50);
        const ConstancyResult c = constancy_check(gamma_series(prof), wide);
        CHECK(c.verdict == Verdict::constant);
        CHECK(c.stddev <= 1e-12);
        CHECK(c.mean == Catch::Approx(0.16).margin(1e-12));
    }
    SECTION("log law over a decade varies by more than the tolerance") {
        auto prof = profile_from([](double y) { return std::log(y) / 0.38 + 4.1; }, 50.0, 500.0,
                                 60);
        const ConstancyResult c = constancy_check(gamma_series(prof), wide);
        CHECK(c.verdict == Verdict::varying);
        CHECK(c.stddev / c.mean > 0.05);
    }
    SECTION("two-layer data straddling the breakpoint varies") {
        SynthSpec spec;
        spec.ln_re = 9.4;
        spec.breakpoint_y_plus = 300.0;
        spec.beta = 0.28;
        spec.y_plus_min = 30.0;
        spec.y_plus_max = 3000.0;
        const ConstancyResult c =
            constancy_check(gamma_series(generate_profile(spec)), wide);
        CHECK(c.verdict == Verdict::varying);
    }
    SECTION("too few in-window points") {
        auto prof = profile_from([](double y) { return 5.0 * std::pow(y, 0.16); }, 30.0, 3000.0,
                                 50);
        CHECK_THROWS_AS(constancy_check(gamma_series(prof), FitWindow{40.0, 42.0}),
                        insufficient_data);
    }
}

TEST_CASE("log-uniform bins", "[diagnostics]") {
    const auto edges = make_log_bin_edges(LogBinSpec{30.0, 3000.0, 20});
    REQUIRE(edges.size() == 41);  // two decades at 20 bins each
    CHECK(edges.front() == Catch::Approx(30.0));
    CHECK(edges.back() == Catch::Approx(3000.0));
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        CHECK(edges[i] < edges[i + 1]);
        // geometric spacing
        CHECK(edges[i + 1] / edges[i] == Catch::Approx(std::pow(10.0, 1.0 / 20.0)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(make_log_bin_edges(LogBinSpec{100.0, 10.0, 20}), validation_error);
}

TEST_CASE("gamma ensemble average", "[diagnostics]") {
    SECTION("identical runs average to the single-run value") {
        std::vector<VelocityProfile> runs;
        for (int k = 0; k < 3; ++k)
            runs.push_back(profile_from([](double y) { return 5.0 * std::pow(y, 0.15); }, 30.0,
                                        3000.0, 80, "run-" + std::to_string(k)));
        const GammaEnsemble ens =
            gamma_ensemble_average(runs, LogBinSpec{30.0, 3000.0, 20});
        for (std::size_t b = 0; b + 1 < ens.bin_edges.size(); ++b) {
            if (ens.run_count_per_bin[b] == 0) continue;
            CHECK(ens.run_count_per_bin[b] == 3);
            CHECK(ens.mean_gamma[b] == Catch::Approx(0.15).margin(1e-12));
        }
    }

    SECTION("runs with different coverage mix only where both exist") {
        std::vector<VelocityProfile> runs;
        runs.push_back(
            profile_from([](double y) { return 5.0 * std::pow(y, 0.15); }, 30.0, 290.0, 40, "a"));
        runs.push_back(
            profile_from([](double y) { return 6.0 * std::pow(y, 0.12); }, 30.0, 3000.0, 80, "b"));
        const GammaEnsemble ens =
            gamma_ensemble_average(runs, LogBinSpec{30.0, 3000.0, 20});
        for (std::size_t b = 0; b + 1 < ens.bin_edges.size(); ++b) {
            if (ens.run_count_per_bin[b] == 2)
                CHECK(ens.mean_gamma[b] == Catch::Approx(0.135).margin(1e-9));
            else if (ens.run_count_per_bin[b] == 1 && ens.bin_edges[b] >= 290.0)
                CHECK(ens.mean_gamma[b] == Catch::Approx(0.12).margin(1e-9));
        }
    }

    SECTION("decreasing exponent with growing extent gives a non-increasing average") {
        std::vector<VelocityProfile> runs;
        for (int k = 0; k < 8; ++k) {
            const double alpha = 0.16 - 0.005 * k;
            const double top = 200.0 * std::pow(1.6, k);
            runs.push_back(profile_from([=](double y) { return 7.0 * std::pow(y, alpha); }, 30.0,
                                        top, 150, "run-" + std::to_string(k)));
        }
        const GammaEnsemble ens =
            gamma_ensemble_average(runs, LogBinSpec{30.0, 200.0 * std::pow(1.6, 7), 20});
        double prev = 1e300;
        for (std::size_t b = 0; b + 1 < ens.bin_edges.size(); ++b) {
            if (ens.run_count_per_bin[b] == 0) continue;
            CHECK(ens.mean_gamma[b] <= prev + 1e-9);
            prev = ens.mean_gamma[b];
        }
    }

    SECTION("fewer than two runs is an error") {
        std::vector<VelocityProfile> runs;
        runs.push_back(
            profile_from([](double y) { return 5.0 * std::pow(y, 0.15); }, 30.0, 3000.0, 40, "a"));
        CHECK_THROWS_AS(gamma_ensemble_average(runs, LogBinSpec{30.0, 3000.0, 20}),
                        insufficient_data);
    }
}

TEST_CASE("summary table", "[diagnostics]") {
    auto make_summary = [](double re_theta, double alpha, double a, double beta, double b) {
        RunSummary s;
        s.re_theta = re_theta;
        s.fit.region1.exponent = alpha;
        s.fit.region1.prefactor = a;
        s.fit.region2.exponent = beta;
        s.fit.region2.prefactor = b;
        const LnRePair inv = solve_ln_re(s.fit.region1);
        s.eff = effective_reynolds(inv.ln_re1, inv.ln_re2);
        return s;
    };

    SECTION("reference row reproduced within rounding") {
        const auto rows = build_table({make_summary(2532.0, 0.157, 7.84, 0.226, 5.32)});
        REQUIRE(rows.size() == 1);
        CHECK(rows[0].re_theta == 2532.0);
        CHECK(rows[0].alpha == 0.157);
        CHECK(rows[0].a_coef == 7.84);
        CHECK(rows[0].beta == 0.226);
        CHECK(rows[0].b_coef == 5.32);
        CHECK(std::abs(rows[0].ln_re1 - 9.24) <= 0.02);
        CHECK(std::abs(rows[0].ln_re2 - 9.57) <= 0.05);
        CHECK(std::abs(rows[0].ln_re - 9.4) <= 0.05);
        CHECK(std::abs(rows[0].delta_percent - 3.4) <= 0.3);
    }
    SECTION("rows come out sorted by Re_theta") {
        const auto rows = build_table({make_summary(26612.0, 0.120, 9.74, 0.177, 6.24),
                                       make_summary(2532.0, 0.157, 7.84, 0.226, 5.32)});
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].re_theta == 2532.0);
        CHECK(rows[1].re_theta == 26612.0);
    }
    SECTION("empty input, empty table") { CHECK(build_table({}).empty()); }
    SECTION("columns satisfy the inversion identities") {
        const auto rows = build_table({make_summary(14207.0, 0.132, 9.01, 0.191, 5.87)});
        const double sqrt3 = std::sqrt(3.0);
        CHECK(rows[0].ln_re1 == Catch::Approx(sqrt3 * (rows[0].a_coef - 2.5)).margin(1e-9));
        CHECK(rows[0].ln_re2 == Catch::Approx(3.0 / (2.0 * rows[0].alpha)).margin(1e-9));
        CHECK(rows[0].ln_re ==
              Catch::Approx((rows[0].ln_re1 + rows[0].ln_re2) / 2.0).margin(1e-9));
    }
}
