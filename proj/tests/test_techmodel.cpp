#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "camsim/error.hpp"
#include "camsim/techmodel.hpp"

using namespace camsim;

// Profile with C*dV/i_sat0 == 1 s, for checks against the bare 1/n law.
static TechProfile normalized_profile(std::size_t cols = 128) {
    TechProfile p;
    p.name = "normalized";
    p.v_ml = 2.0;
    p.v_sa_threshold = 1.0;
    p.i_sat0 = 1.0;
    p.c_cell = 1.0 / static_cast<double>(cols);
    p.c_fixed = 0.0;
    p.vdd = 1.0;
    p.eps_intercept = 0.1;
    p.eps_slope = 0.01;
    return p;
}

TEST_CASE("builtin profiles satisfy invariants") {
    for (const auto& name : builtin_profile_names()) {
        const TechProfile p = builtin_profile(name);
        CHECK_NOTHROW(p.validate());
        CHECK(p.name == name);
    }
}

TEST_CASE("builtin EPS fits reproduce published triples within 5%") {
    struct Case { const char* name; double pts[3]; };
    const Case cases[] = {{"sot", {1.88, 3.55, 7.16}},
                          {"sram_0v5", {0.8, 1.7, 3.33}},
                          {"fefet", {0.78, 1.66, 3.15}}};
    const double rows[] = {64, 128, 256};
    for (const auto& c : cases) {
        const TechProfile p = builtin_profile(c.name);
        for (int i = 0; i < 3; ++i) {
            const double eps = energy_per_search(p, static_cast<std::size_t>(rows[i]),
                                                 MitigationConfig::baseline());
            CHECK(std::abs(eps - c.pts[i]) / c.pts[i] < 0.05);
        }
    }
}

TEST_CASE("profile file round trip and error reporting") {
    const TechProfile p = builtin_profile("fefet");
    const TechProfile q = parse_profile_text(dump_profile(p), "roundtrip");
    CHECK(q.i_sat0 == p.i_sat0);
    CHECK(q.c_sl_row == p.c_sl_row);
    CHECK(q.eps_slope == p.eps_slope);
    CHECK(q.tech == Tech::Fefet);

    // SI suffixes
    const TechProfile si = parse_profile_text(
        "name = x\ntech = sram\nv_ml = 0.5\nv_sa_threshold = 0.25\n"
        "i_sat0 = 2u\nc_cell = 0.25f\nc_fixed = 1.5f\nt_sa_latch = 0.1n\n"
        "eps_intercept = 0.1\neps_slope = 0.01\nvdd = 0.5\n",
        "si");
    CHECK(si.i_sat0 == doctest::Approx(2e-6));
    CHECK(si.c_cell == doctest::Approx(0.25e-15));
    CHECK(si.t_sa_latch == doctest::Approx(0.1e-9));

    // v_ml <= v_sa_threshold names v_ml
    CHECK_THROWS_WITH_AS(
        parse_profile_text("name = bad\ntech = sot\nv_ml = 0.3\nv_sa_threshold = 0.35\n"
                           "i_sat0 = 1u\neps_intercept = 1\neps_slope = 0.01\nvdd = 0.7\n",
                           "bad"),
        doctest::Contains("v_ml"), ConfigError);
    CHECK_THROWS_AS(parse_profile_text("nonsense = 1\n", "bad"), ConfigError);
    CHECK_THROWS_AS(load_profile("/no/such/file"), DataError);
}

TEST_CASE("ml_capacitance is linear in columns") {
    TechProfile p = normalized_profile();
    p.c_cell = 1e-18;
    p.c_fixed = 0;
    CHECK(ml_capacitance(p, 128) == doctest::Approx(128e-18));
    p.c_cell = 0;
    p.c_fixed = 3e-15;
    CHECK(ml_capacitance(p, 7) == doctest::Approx(3e-15));
    CHECK(ml_capacitance(p, 10000) == doctest::Approx(3e-15));
    p.c_cell = 0.5e-18;
    p.c_fixed = 2e-18;
    CHECK(ml_capacitance(p, 128) == doctest::Approx(66e-18));
}

TEST_CASE("ideal discharge delay follows the 1/n law") {
    const TechProfile p = normalized_profile();
    CHECK(ideal_discharge_delay(p, 128, 1) == doctest::Approx(1.0));
    CHECK(ideal_discharge_delay(p, 128, 2) == doctest::Approx(0.5));
    CHECK(ideal_discharge_delay(p, 128, 4) == doctest::Approx(0.25));
    CHECK(std::isinf(ideal_discharge_delay(p, 128, 0)));
    // t(1) - t(2) = (C dV / I) / (2*1)
    CHECK(ideal_discharge_delay(p, 128, 1) - ideal_discharge_delay(p, 128, 2) ==
          doctest::Approx(0.5));
}

TEST_CASE("delay separation law holds exactly for every builtin") {
    for (const auto& name : builtin_profile_names()) {
        const TechProfile p = builtin_profile(name);
        const double t1 = ideal_discharge_delay(p, 128, 1);
        for (std::size_t n = 2; n <= 64; ++n) {
            const double sep = (ideal_discharge_delay(p, 128, n - 1) -
                                ideal_discharge_delay(p, 128, n)) *
                               static_cast<double>(n) * static_cast<double>(n - 1);
            CHECK(std::abs(sep - t1) / t1 < 1e-9);
        }
    }
}

TEST_CASE("searchline arrival is Elmore quadratic") {
    TechProfile p = normalized_profile();
    p.r_sl_row = 1.0;
    p.c_sl_row = 2.0;
    const MitigationConfig base;
    CHECK(searchline_arrival(p, base, 0) == 0.0);
    CHECK(searchline_arrival(p, base, 3) == doctest::Approx(12.0));
    MitigationConfig s2x = MitigationConfig::default_for(MitigationKind::S2x, Tech::Fefet);
    CHECK(searchline_arrival(p, s2x, 3) == doctest::Approx(12.0 / 8.2));
    for (std::size_t r = 1; r < 100; ++r)
        CHECK(searchline_arrival(p, base, r) >= searchline_arrival(p, base, r - 1));
}

TEST_CASE("IR current factor ramp") {
    TechProfile p = normalized_profile();
    const MitigationConfig base;
    SUBCASE("zero gamma") {
        for (std::size_t r : {0u, 100u, 255u})
            CHECK(ir_current_factor(p, 256, base, r) == 1.0);
    }
    SUBCASE("linear endpoint") {
        p.ir_gamma = 0.2;
        CHECK(ir_current_factor(p, 256, base, 255) == doctest::Approx(0.8));
        CHECK(ir_current_factor(p, 256, base, 0) == 1.0);
        CHECK(ir_current_factor(p, 1, base, 0) == 1.0);
        for (std::size_t r = 1; r < 256; ++r)
            CHECK(ir_current_factor(p, 256, base, r) <= ir_current_factor(p, 256, base, r - 1));
    }
}

TEST_CASE("skew percent") {
    const MitigationConfig base;
    SUBCASE("no interconnect, no skew") {
        const TechProfile p = normalized_profile();
        CHECK(skew_percent(p, 256, 128, base, 40) == doctest::Approx(0.0));
    }
    SUBCASE("S2x divides a pure-RC skew by exactly the reduction") {
        TechProfile p = normalized_profile();
        p.r_sl_row = 10;
        p.c_sl_row = 1e-4;
        MitigationConfig s2x = MitigationConfig::default_for(MitigationKind::S2x, Tech::Sram);
        const double b = skew_percent(p, 256, 128, base, 40);
        const double s = skew_percent(p, 256, 128, s2x, 40);
        CHECK(s < b);
        CHECK(std::abs(s - b / 9.5) / s < 1e-6);
    }
    SUBCASE("calibrated builtins hit their declared target") {
        for (const auto& name : builtin_profile_names()) {
            const TechProfile p = builtin_profile(name);
            REQUIRE(p.skew_target_percent > 0);
            const double got = skew_percent(p, p.skew_target_rows, 128, base,
                                            p.skew_target_hdist);
            CHECK(std::abs(got - p.skew_target_percent) / p.skew_target_percent < 0.05);
        }
    }
}

TEST_CASE("energy per search") {
    const TechProfile sram = builtin_profile("sram_0v5");
    const MitigationConfig base;
    CHECK(std::abs(energy_per_search(sram, 256, base) - 3.33) / 3.33 < 0.05);

    const TechProfile sot = builtin_profile("sot");
    MitigationConfig s2x = MitigationConfig::default_for(MitigationKind::S2x, Tech::Sot);
    const double eps_base = energy_per_search(sot, 256, base);
    CHECK(energy_per_search(sot, 256, s2x) == doctest::Approx(eps_base * 1.148));

    CHECK_THROWS_AS(energy_per_search(sot, 0, base), ConfigError);
    for (std::size_t r = 2; r <= 512; r *= 2)
        CHECK(energy_per_search(sot, r, base) > energy_per_search(sot, r / 2, base));
    // column extrapolation scales the slope only
    CHECK(energy_per_search(sot, 128, base, 256) ==
          doctest::Approx(sot.eps_intercept + sot.eps_slope * 128 * 2));
}

TEST_CASE("cell current sampling") {
    const TechProfile p = builtin_profile("sot");
    SUBCASE("sigma zero is exactly nominal") {
        VariationConfig v{0.0, 123, 1};
        for (double c : sample_cell_currents(p, v, 8, 8, 0)) CHECK(c == p.i_sat0);
    }
    SUBCASE("deterministic in (seed, trial, row, col)") {
        VariationConfig v{0.05, 99, 3};
        CHECK(sample_cell_currents(p, v, 16, 16, 2) == sample_cell_currents(p, v, 16, 16, 2));
        CHECK(sample_cell_currents(p, v, 16, 16, 1) != sample_cell_currents(p, v, 16, 16, 2));
        VariationConfig v2 = v;
        v2.seed = 100;
        CHECK(sample_cell_currents(p, v, 16, 16, 0) != sample_cell_currents(p, v2, 16, 16, 0));
    }
    SUBCASE("trial out of range") {
        VariationConfig v{0.05, 99, 3};
        CHECK_THROWS_AS(sample_cell_currents(p, v, 4, 4, 3), ConfigError);
    }
    SUBCASE("law of large numbers: mean within 0.1% over 1e6 draws") {
        VariationConfig v{0.05, 7, 1};
        const auto cur = sample_cell_currents(p, v, 1000, 1000, 0);
        double mean = 0;
        for (double c : cur) mean += c;
        mean /= static_cast<double>(cur.size());
        CHECK(std::abs(mean - p.i_sat0) / p.i_sat0 < 1e-3);
    }
}
