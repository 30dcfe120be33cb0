#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "camsim/encode.hpp"
#include "camsim/error.hpp"
#include "camsim/experiments.hpp"

using namespace camsim;

TEST_CASE("one-hot encoding") {
    SUBCASE("single feature sets the value bit") {
        CategoricalSchema s{{{"f0", 5}}, 8};
        const BitVec v = one_hot_encode(s, std::vector<std::size_t>{2});
        CHECK(v.to_string() == "00100000");
    }
    SUBCASE("16 features give the 128-bit housing layout") {
        CategoricalSchema s;
        for (int i = 0; i < 16; ++i) s.features.push_back({"f" + std::to_string(i), 7});
        std::vector<std::size_t> record(16);
        for (std::size_t i = 0; i < 16; ++i) record[i] = i % 7;
        const BitVec v = one_hot_encode(s, record);
        CHECK(v.width() == 128);
        CHECK(v.popcount() == 16);
    }
    SUBCASE("k differing features give Hamming distance 2k") {
        CategoricalSchema s;
        for (int i = 0; i < 16; ++i) s.features.push_back({"f" + std::to_string(i), 7});
        std::vector<std::size_t> a(16, 1), b(16, 1);
        b[2] = 3; b[9] = 0; b[15] = 6;
        CHECK(hamming(one_hot_encode(s, a), one_hot_encode(s, b)) == 6);
    }
    SUBCASE("errors") {
        CategoricalSchema s{{{"f0", 5}}, 8};
        CHECK_THROWS_AS(one_hot_encode(s, std::vector<std::size_t>{5}), DataError);
        CHECK_THROWS_AS(one_hot_encode(s, std::vector<std::size_t>{0, 0}), DataError);
        CategoricalSchema wide{{{"f0", 9}}, 8};
        CHECK_THROWS_AS(wide.validate(), ConfigError);
    }
}

TEST_CASE("hamming") {
    const BitVec a = BitVec::from_string("1111");
    CHECK(hamming(a, a) == 0);
    CHECK(hamming(a, BitVec::from_string("0000")) == 4);
    CHECK_THROWS_AS(hamming(a, BitVec::from_string("11110")), DataError);
}

TEST_CASE("hamming equals the naive per-bit count, randomized") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t width = 1 + rng() % 200;
        BitVec a(width), b(width);
        for (std::size_t i = 0; i < width; ++i) {
            if (rng() & 1) a.set(i);
            if (rng() & 1) b.set(i);
        }
        std::size_t naive = 0;
        for (std::size_t i = 0; i < width; ++i)
            if (a.test(i) != b.test(i)) ++naive;
        CHECK(hamming(a, b) == naive);
    }
}

TEST_CASE("hamming is a metric, randomized") {
    std::mt19937_64 rng(9);
    for (int iter = 0; iter < 1000; ++iter) {
        const std::size_t width = 1 + rng() % 150;
        BitVec v[3] = {BitVec(width), BitVec(width), BitVec(width)};
        for (auto& x : v)
            for (std::size_t i = 0; i < width; ++i)
                if (rng() & 1) x.set(i);
        CHECK(hamming(v[0], v[1]) == hamming(v[1], v[0]));
        CHECK((hamming(v[0], v[1]) == 0) == (v[0] == v[1]));
        CHECK(hamming(v[0], v[2]) <= hamming(v[0], v[1]) + hamming(v[1], v[2]));
    }
}

TEST_CASE("LSH encoder") {
    SUBCASE("zero vector maps to all ones under the >= 0 tie rule") {
        const LshEncoder enc(32, 8, 1);
        const std::vector<double> zero(8, 0.0);
        CHECK(enc.encode(zero).popcount() == 32);
    }
    SUBCASE("negation complements when no dot product is zero") {
        const LshEncoder enc(64, 16, 2);
        std::mt19937_64 rng(4);
        std::vector<double> v(16);
        for (auto& x : v) x = (static_cast<double>(rng() >> 11) * 0x1p-53) - 0.5;
        std::vector<double> neg(v);
        for (auto& x : neg) x = -x;
        const BitVec a = enc.encode(std::span<const double>(v));
        const BitVec b = enc.encode(std::span<const double>(neg));
        CHECK(hamming(a, b) == 64);
    }
    SUBCASE("regeneration determinism") {
        const LshEncoder a(128, 50, 77), b(128, 50, 77), c(128, 50, 78);
        CHECK(a.hyperplanes() == b.hyperplanes());
        CHECK(a.hyperplanes() != c.hyperplanes());
    }
    SUBCASE("dimension mismatch") {
        const LshEncoder enc(8, 4, 0);
        CHECK_THROWS_AS(enc.encode(std::vector<double>(5, 1.0)), DataError);
    }
    SUBCASE("collision rate tracks angle/pi") {
        // one fixed pair at 60 degrees, many encoder seeds
        const std::size_t dim = 3, bits = 128, pairs = 200;
        const std::vector<double> u{1, 0, 0};
        const std::vector<double> w{0.5, std::sqrt(3.0) / 2, 0};
        double total = 0;
        for (std::size_t s = 0; s < pairs; ++s) {
            const LshEncoder enc(bits, dim, 1000 + s);
            total += static_cast<double>(hamming(enc.encode(std::span<const double>(u)),
                                                 enc.encode(std::span<const double>(w))));
        }
        const double mean = total / (pairs * bits);
        const double p = 1.0 / 3.0;  // 60 deg / 180 deg
        const double se = std::sqrt(p * (1 - p) / (pairs * bits));
        CHECK(std::abs(mean - p) < 4 * se);
    }
}

TEST_CASE("categorical CSV ingestion") {
    const auto path = std::filesystem::temp_directory_path() / "camsim_housing_test.csv";
    write_housing_like_csv(path.string(), 300, 11);
    const CategoricalDataset ds = load_categorical_csv(path.string());
    CHECK(ds.schema.features.size() == 16);
    CHECK(ds.schema.width() == 128);
    CHECK(ds.vectors.size() == 300);
    for (const auto& v : ds.vectors) {
        CHECK(v.width() == 128);
        CHECK(v.popcount() == 16);
    }
    // encoding is stable across reloads
    const CategoricalDataset ds2 = load_categorical_csv(path.string());
    CHECK(ds.vectors == ds2.vectors);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_categorical_csv("/no/such.csv"), DataError);
}
