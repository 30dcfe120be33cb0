#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camsim/error.hpp"

namespace camsim {

/// Fixed-width bit vector packed into 64-bit words. Bit 0 is the least
/// significant bit of word 0.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t width)
        : width_(width), words_((width + 63) / 64, 0) {}

    static BitVec from_string(std::string_view bits) {
        BitVec v(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] == '1') {
                v.set(i);
            } else if (bits[i] != '0') {
                throw DataError("bit string contains character other than 0/1");
            }
        }
        return v;
    }

    std::size_t width() const { return width_; }

    bool test(std::size_t i) const {
        return (words_[i / 64] >> (i % 64)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (value) {
            words_[i / 64] |= mask;
        } else {
            words_[i / 64] &= ~mask;
        }
    }

    void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

    std::span<const std::uint64_t> words() const { return words_; }

    std::size_t popcount() const {
        std::size_t n = 0;
        for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    std::string to_string() const {
        std::string s(width_, '0');
        for (std::size_t i = 0; i < width_; ++i)
            if (test(i)) s[i] = '1';
        return s;
    }

    friend bool operator==(const BitVec& a, const BitVec& b) {
        return a.width_ == b.width_ && a.words_ == b.words_;
    }

private:
    std::size_t width_ = 0;
    std::vector<std::uint64_t> words_;
};

/// popcount(a XOR b); throws DataError on width mismatch.
inline std::size_t hamming(const BitVec& a, const BitVec& b) {
    if (a.width() != b.width())
        throw DataError("hamming: width mismatch (" + std::to_string(a.width()) +
                        " vs " + std::to_string(b.width()) + ")");
    std::size_t n = 0;
    auto wa = a.words(), wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i)
        n += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    return n;
}

}  // namespace camsim
