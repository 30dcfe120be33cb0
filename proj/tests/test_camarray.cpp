#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "camsim/camarray.hpp"
#include "camsim/error.hpp"
#include "camsim/experiments.hpp"

using namespace camsim;

namespace {

TechProfile normalized_profile() {
    TechProfile p;
    p.name = "normalized";
    p.v_ml = 2.0;
    p.v_sa_threshold = 1.0;
    p.i_sat0 = 1.0;
    p.c_cell = 1.0 / 128.0;
    p.c_fixed = 0.0;
    p.vdd = 1.0;
    p.eps_intercept = 0.1;
    p.eps_slope = 0.01;
    p.delay_quantum = 0.1;
    return p;
}

ArrayConfig make_config(std::size_t rows, std::size_t cols, TechProfile p) {
    ArrayConfig c;
    c.rows = rows;
    c.cols = cols;
    p.c_cell = p.c_cell * 128.0 / static_cast<double>(cols);  // keep C*dV/I = 1
    c.profile = std::move(p);
    return c;
}

std::vector<BitVec> random_items(std::size_t n, std::size_t width, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<BitVec> items;
    for (std::size_t i = 0; i < n; ++i) {
        BitVec v(width);
        for (std::size_t b = 0; b < width; ++b)
            if (rng() & 1) v.set(b);
        items.push_back(std::move(v));
    }
    return items;
}

}  // namespace

TEST_CASE("build_banks splits items row-major") {
    auto config = make_config(128, 128, normalized_profile());
    SUBCASE("10000 items -> 79 banks, last bank 16 rows") {
        const auto items = random_items(10000, 128, 1);
        const CamBankSet set = build_banks(config, items);
        CHECK(set.bank_count() == 79);
        CHECK(set.bank_rows(0) == 128);
        CHECK(set.bank_rows(78) == 16);
        CHECK(set.items == 10000);
        CHECK(set.banks[3][5] == items[3 * 128 + 5]);
        CHECK(set.global_id(3, 5) == 389);
    }
    SUBCASE("single item") {
        const CamBankSet set = build_banks(config, random_items(1, 128, 2));
        CHECK(set.bank_count() == 1);
        CHECK(set.bank_rows(0) == 1);
    }
    SUBCASE("width mismatch names the item") {
        auto items = random_items(3, 128, 3);
        items[2] = BitVec(64);
        CHECK_THROWS_WITH_AS(build_banks(config, items), doctest::Contains("item 2"),
                             DataError);
    }
}

TEST_CASE("row_delay") {
    auto config = make_config(256, 128, normalized_profile());
    std::vector<double> nominal(128, 1.0);  // i_sat0 = 1
    SUBCASE("reduces to ideal law plus latch with no skew") {
        config.profile.t_sa_latch = 0.25;
        const std::vector<std::size_t> mm{3, 17, 60, 99};
        CHECK(row_delay(config, 0, mm, nominal) ==
              doctest::Approx(0.25 + ideal_discharge_delay(config.profile, 128, 4)));
    }
    SUBCASE("no mismatch never discharges") {
        CHECK(std::isinf(row_delay(config, 10, std::vector<std::size_t>{}, nominal)));
    }
    SUBCASE("far row scaled by the IR factor") {
        config.profile.ir_gamma = 0.2;
        const std::vector<std::size_t> mm{1, 2, 3};
        const double near = row_delay(config, 0, mm, nominal);
        const double far = row_delay(config, 255, mm, nominal);
        CHECK(far == doctest::Approx(near / 0.8));
    }
}

TEST_CASE("clock thresholds") {
    auto config = make_config(64, 128, normalized_profile());
    config.profile.t_sa_latch = 0.1;
    SUBCASE("zero skew: FIXED equals IDEAL at the ideal midpoint") {
        ClockPolicy ideal{ClockKind::Ideal, 20, 0};
        ClockPolicy fixed{ClockKind::Fixed, 20, 0};
        const auto a = clock_threshold(config, ideal);
        const auto b = clock_threshold(config, fixed);
        CHECK(a == b);
        CHECK(a[0] == doctest::Approx((1.0 / 20 + 1.0 / 21) / 2 + 0.1));
        CHECK(std::all_of(a.begin(), a.end(),
                          [&](double t) { return t == a[0]; }));
    }
    SUBCASE("MATCHED without clkmatch mitigation is an error") {
        CHECK_THROWS_AS(clock_threshold(config, {ClockKind::Matched, 20, 0}), ConfigError);
    }
    SUBCASE("MATCHED with gain 1 cancels arrival exactly when gamma = 0") {
        config.profile.r_sl_row = 1.0;
        config.profile.c_sl_row = 1e-4;
        config.mitigation = MitigationConfig::default_for(MitigationKind::ClkMatch, Tech::Sram);
        const auto clocks = clock_threshold(config, {ClockKind::Matched, 20, 0});
        for (std::size_t r = 0; r < config.rows; ++r)
            CHECK(clocks[r] - searchline_arrival(config.profile, config.mitigation, r) ==
                  doctest::Approx(clocks[0]));
    }
    SUBCASE("hdist_limit 0 rejected") {
        CHECK_THROWS_AS(clock_threshold(config, {ClockKind::Fixed, 0, 0}), ConfigError);
    }
}

TEST_CASE("search equals brute force under the zero-skew ideal clock") {
    auto config = make_config(128, 128, normalized_profile());
    std::mt19937_64 rng(11);
    for (int inst = 0; inst < 30; ++inst) {
        const std::size_t n = 1 + rng() % 1024;
        const auto items = random_items(n, 128, rng());
        const CamBankSet set = build_banks(config, items);
        const auto query = random_items(1, 128, rng()).front();
        for (std::size_t limit : {5u, 20u, 64u}) {
            const SearchOutcome out =
                search(set, config, query, {ClockKind::Ideal, limit, 0}, nullptr);
            CHECK(out.retrieved == brute_force_radius(items, query, limit));
        }
    }
}

TEST_CASE("exact match convention: HDist 0 is always retrieved") {
    auto config = make_config(64, 128, normalized_profile());
    config.profile.r_sl_row = 1.0;
    config.profile.c_sl_row = 0.01;  // heavy skew
    const auto items = random_items(200, 128, 5);
    const CamBankSet set = build_banks(config, items);
    const SearchOutcome out =
        search(set, config, items[150], {ClockKind::Fixed, 1, 0}, nullptr);
    CHECK(std::binary_search(out.retrieved.begin(), out.retrieved.end(), 150u));
    CHECK(std::isinf(out.delays[150]));
}

TEST_CASE("recall guarantee under FIXED clock with zero variation") {
    auto config = make_config(256, 128, normalized_profile());
    config.profile.r_sl_row = 1.0;
    config.profile.c_sl_row = 2e-4;
    config.profile.ir_gamma = 0.15;
    const auto items = random_items(2000, 128, 21);
    const CamBankSet set = build_banks(config, items);
    const auto queries = random_items(5, 128, 22);
    for (const auto& q : queries) {
        const SearchOutcome out = search(set, config, q, {ClockKind::Fixed, 20, 0}, nullptr);
        const auto relevant = brute_force_radius(items, q, 20);
        CHECK(std::includes(out.retrieved.begin(), out.retrieved.end(),
                            relevant.begin(), relevant.end()));
    }
}

TEST_CASE("energy additivity across banks") {
    auto config = make_config(64, 128, normalized_profile());
    const auto items = random_items(128, 128, 31);   // exactly 2 full banks
    const auto twice = [&] {
        auto v = items;
        v.insert(v.end(), items.begin(), items.end());
        return v;
    }();
    const auto q = random_items(1, 128, 32).front();
    const SearchOutcome a =
        search(build_banks(config, items), config, q, {ClockKind::Fixed, 10, 0}, nullptr);
    const SearchOutcome b =
        search(build_banks(config, twice), config, q, {ClockKind::Fixed, 10, 0}, nullptr);
    CHECK(b.energy_pj == doctest::Approx(2 * a.energy_pj));
    CHECK(a.energy_pj ==
          doctest::Approx(2 * energy_per_search(config.profile, 64, config.mitigation, 128)));
}

TEST_CASE("search determinism under variation") {
    auto config = make_config(64, 128, normalized_profile());
    const auto items = random_items(300, 128, 41);
    const CamBankSet set = build_banks(config, items);
    const auto q = random_items(1, 128, 42).front();
    const VariationConfig var{0.05, 77, 4};
    const SearchOutcome a = search(set, config, q, {ClockKind::Fixed, 20, 0}, var, 2);
    const SearchOutcome b = search(set, config, q, {ClockKind::Fixed, 20, 0}, var, 2);
    CHECK(a.retrieved == b.retrieved);
    CHECK(a.delays == b.delays);
    CHECK(a.latency_s == b.latency_s);
    const SearchOutcome c = search(set, config, q, {ClockKind::Fixed, 20, 0}, var, 3);
    CHECK(a.delays != c.delays);
}

TEST_CASE("enlarging rows never decreases false positives (RC skew, doubled rows)") {
    TechProfile p = normalized_profile();
    p.r_sl_row = 1.0;
    p.c_sl_row = 2e-4;
    const auto items = random_items(1024, 128, 51);
    const auto queries = random_items(8, 128, 52);
    for (const auto& q : queries) {
        const auto relevant = brute_force_radius(items, q, 20);
        std::size_t prev_fp = 0;
        bool first = true;
        for (std::size_t rows : {64u, 128u, 256u}) {
            auto config = make_config(rows, 128, p);
            const SearchOutcome out = search(build_banks(config, items), config, q,
                                             {ClockKind::Fixed, 20, 0}, nullptr);
            std::vector<std::size_t> fp;
            std::set_difference(out.retrieved.begin(), out.retrieved.end(),
                                relevant.begin(), relevant.end(), std::back_inserter(fp));
            if (!first) CHECK(fp.size() >= prev_fp);
            prev_fp = fp.size();
            first = false;
        }
    }
}

TEST_CASE("latency quantization rounds up to the delay quantum") {
    auto config = make_config(16, 128, normalized_profile());
    config.profile.delay_quantum = 0.4;
    const auto items = random_items(16, 128, 61);
    const SearchOutcome out = search(build_banks(config, items), config,
                                     random_items(1, 128, 62).front(),
                                     {ClockKind::Fixed, 20, 0}, nullptr);
    const double q = config.profile.delay_quantum;
    const double ratio = out.latency_s / q;
    CHECK(std::abs(ratio - std::round(ratio)) < 1e-9);
    CHECK(out.latency_s >= 0);
}
