#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camsim/bitvec.hpp"

namespace camsim {

struct CategoricalSchema {
    struct Feature {
        std::string name;
        std::size_t cardinality = 0;
    };
    std::vector<Feature> features;
    std::size_t bits_per_feature = 8;

    std::size_t width() const { return features.size() * bits_per_feature; }
    void validate() const;
};

/// One bit set per feature inside its bits_per_feature field.
BitVec one_hot_encode(const CategoricalSchema& schema,
                      std::span<const std::size_t> record);

/// Sign-of-random-hyperplane LSH. Hyperplanes are Gaussian, regenerated
/// bit-identically from (seed, bits, dim).
class LshEncoder {
public:
    LshEncoder(std::size_t bits, std::size_t dim, std::uint64_t seed);

    std::size_t bits() const { return bits_; }
    std::size_t dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }
    const std::vector<double>& hyperplanes() const { return planes_; }  // bits x dim

    /// bit i = 1 iff dot(hyperplane_i, v) >= 0.
    BitVec encode(std::span<const float> v) const;
    BitVec encode(std::span<const double> v) const;

private:
    std::size_t bits_, dim_;
    std::uint64_t seed_;
    std::vector<double> planes_;
};

}  // namespace camsim
