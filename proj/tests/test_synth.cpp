#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "wallfit/fitting.hpp"
#include "wallfit/scaling.hpp"
#include "wallfit/synth.hpp"

using namespace wallfit;

namespace {

SynthSpec base_spec() {
    SynthSpec s;
    s.ln_re = 9.4;
    s.breakpoint_y_plus = 300.0;
    s.beta = 0.226;
    s.y_plus_min = 30.0;
    s.y_plus_max = 3000.0;
    s.n_points = 101;  // grid hits y+ = 300 up to rounding
    return s;
}

}  // namespace

TEST_CASE("generator honors the region laws", "[synth]") {
    const SynthSpec spec = base_spec();
    const VelocityProfile p = generate_profile(spec, "gen");

    SECTION("region 1 equals the scaling law") {
        for (const Sample& s : p.samples) {
            if (s.y_plus > spec.breakpoint_y_plus) continue;
            CHECK(s.u_plus == Catch::Approx(predict_scaling_law(s.y_plus, 9.4)).epsilon(1e-14));
        }
    }
    SECTION("region 2 prefactor is fixed by continuity") {
        // reference value from an independent high-precision evaluation
        const double b_expected = 5.4271250759470945;
        for (const Sample& s : p.samples) {
            if (s.y_plus <= spec.breakpoint_y_plus) continue;
            CHECK(s.u_plus / std::pow(s.y_plus, spec.beta) ==
                  Catch::Approx(b_expected).epsilon(1e-9));
        }
    }
    SECTION("the two branches agree at the breakpoint") {
        const double left = predict_scaling_law(spec.breakpoint_y_plus, spec.ln_re);
        const double b_coef = scaling_law_prefactor(spec.ln_re) *
                              std::pow(spec.breakpoint_y_plus,
                                       scaling_law_alpha(spec.ln_re) - spec.beta);
        const double right = b_coef * std::pow(spec.breakpoint_y_plus, spec.beta);
        CHECK(left == Catch::Approx(right).epsilon(1e-12));
    }
    SECTION("re_theta defaults to exp(ln_re) as a stand-in") {
        CHECK(p.re_theta == Catch::Approx(std::exp(9.4)).epsilon(1e-12));
        SynthSpec with_re = spec;
        with_re.re_theta = 2532.0;
        CHECK(generate_profile(with_re).re_theta == 2532.0);
    }
}

TEST_CASE("generator determinism", "[synth]") {
    SynthSpec spec = base_spec();
    spec.noise_rel_sigma = 0.01;
    spec.seed = 42;

    const VelocityProfile a = generate_profile(spec);
    const VelocityProfile b = generate_profile(spec);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].y_plus == b.samples[i].y_plus);
        CHECK(a.samples[i].u_plus == b.samples[i].u_plus);
    }

    SynthSpec other_seed = spec;
    other_seed.seed = 43;
    const VelocityProfile c = generate_profile(other_seed);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        if (a.samples[i].u_plus != c.samples[i].u_plus) any_diff = true;
    CHECK(any_diff);

    // same seed but different ln_re still gives distinct profiles
    SynthSpec other_lnre = spec;
    other_lnre.ln_re = 12.0;
    const VelocityProfile d = generate_profile(other_lnre);
    any_diff = false;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        if (a.samples[i].u_plus != d.samples[i].u_plus) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("noise is multiplicative and centered in the log", "[synth]") {
    SynthSpec spec = base_spec();
    const VelocityProfile clean = generate_profile(spec);
    spec.noise_rel_sigma = 0.05;

    const std::size_t probe = 10;
    const int n_draws = 10000;
    double mean_log = 0.0;
    for (int k = 0; k < n_draws; ++k) {
        spec.seed = static_cast<std::uint64_t>(k);
        mean_log += std::log(generate_profile(spec).samples[probe].u_plus);
    }
    mean_log /= n_draws;
    const double tol = 3.0 * 0.05 / std::sqrt(static_cast<double>(n_draws));
    CHECK(std::abs(mean_log - std::log(clean.samples[probe].u_plus)) <= tol);
}

TEST_CASE("sublayer blend", "[synth]") {
    SynthSpec spec = base_spec();
    spec.y_plus_min = 1.0;
    spec.n_points = 200;
    spec.include_sublayer = true;
    const VelocityProfile p = generate_profile(spec);

    for (const Sample& s : p.samples) {
        if (s.y_plus <= 5.0) {
            CHECK(s.u_plus == Catch::Approx(s.y_plus).epsilon(1e-14));
        } else if (s.y_plus >= 30.0 && s.y_plus <= spec.breakpoint_y_plus) {
            CHECK(s.u_plus ==
                  Catch::Approx(predict_scaling_law(s.y_plus, spec.ln_re)).epsilon(1e-14));
        } else if (s.y_plus > 5.0 && s.y_plus < 30.0) {
            // log-log interpolation between the sublayer and the region law
            const double t = (std::log(s.y_plus) - std::log(5.0)) / std::log(30.0 / 5.0);
            const double expect =
                std::exp((1.0 - t) * std::log(s.y_plus) +
                         t * std::log(predict_scaling_law(s.y_plus, spec.ln_re)));
            CHECK(s.u_plus == Catch::Approx(expect).epsilon(1e-12));
        }
    }
}

TEST_CASE("noiseless closure through the two-layer fit", "[synth][property]") {
    std::mt19937 rng(6001);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const FitConfig cfg;
    for (int trial = 0; trial < 10; ++trial) {
        SynthSpec spec;
        spec.ln_re = 8.5 + 5.0 * u01(rng);
        spec.breakpoint_y_plus = 250.0 + 900.0 * u01(rng);
        spec.beta = scaling_law_alpha(spec.ln_re) + 0.05 + 0.1 * u01(rng);
        spec.y_plus_min = 30.0;
        spec.y_plus_max = 2e4;
        spec.n_points = 160;
        const VelocityProfile prof = generate_profile(spec);

        const auto two = fit_two_layer(prof, FitWindow{29.0, 2.1e4}, cfg);
        REQUIRE(two.has_value());
        const LnRePair inv = solve_ln_re(two->region1);
        CHECK(std::abs(inv.ln_re1 - spec.ln_re) <= 1e-6);
        CHECK(std::abs(inv.ln_re2 - spec.ln_re) <= 1e-6);

        // breakpoint within one grid step of the true one
        const double ln_step =
            std::log(spec.y_plus_max / spec.y_plus_min) / (spec.n_points - 1);
        CHECK(std::abs(std::log(two->breakpoint_y_plus / spec.breakpoint_y_plus)) <=
              ln_step + 1e-12);
    }
}

TEST_CASE("ensemble generation", "[synth]") {
    SECTION("auto-assigned distinct run ids") {
        std::vector<SynthSpec> specs(24, base_spec());
        for (int i = 0; i < 24; ++i) specs[i].ln_re = 10.5 + 2.5 * i / 23.0;
        const auto runs = generate_ensemble(specs);
        REQUIRE(runs.size() == 24);
        std::set<std::string> ids;
        for (const auto& r : runs) ids.insert(r.run_id);
        CHECK(ids.size() == 24);
    }
    SECTION("empty spec list") { CHECK(generate_ensemble({}).empty()); }
}

TEST_CASE("spec validation", "[synth]") {
    SynthSpec s = base_spec();
    s.breakpoint_y_plus = 5e4;  // outside the grid
    CHECK_THROWS_AS(validate_spec(s), validation_error);
    s = base_spec();
    s.n_points = 10;
    CHECK_THROWS_AS(validate_spec(s), validation_error);
    s = base_spec();
    s.noise_rel_sigma = -0.1;
    CHECK_THROWS_AS(validate_spec(s), validation_error);
    s = base_spec();
    s.beta = 1.2;
    CHECK_THROWS_AS(validate_spec(s), validation_error);
    s = base_spec();
    s.y_plus_min = 1.0;
    s.breakpoint_y_plus = 20.0;
    s.include_sublayer = true;  // breakpoint below the blend region
    CHECK_THROWS_AS(validate_spec(s), validation_error);
}
