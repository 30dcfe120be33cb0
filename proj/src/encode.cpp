#include "camsim/encode.hpp"

#include "camsim/error.hpp"
#include "camsim/techmodel.hpp"

namespace camsim {

void CategoricalSchema::validate() const {
    if (bits_per_feature < 1)
        throw ConfigError("CategoricalSchema: bits_per_feature must be >= 1");
    for (const auto& f : features)
        if (f.cardinality < 1 || f.cardinality > bits_per_feature)
            throw ConfigError("CategoricalSchema: feature '" + f.name +
                              "' cardinality " + std::to_string(f.cardinality) +
                              " exceeds bits_per_feature " +
                              std::to_string(bits_per_feature));
}

BitVec one_hot_encode(const CategoricalSchema& schema,
                      std::span<const std::size_t> record) {
    if (record.size() != schema.features.size())
        throw DataError("one_hot_encode: record has " + std::to_string(record.size()) +
                        " values, schema has " + std::to_string(schema.features.size()) +
                        " features");
    BitVec v(schema.width());
    for (std::size_t f = 0; f < record.size(); ++f) {
        if (record[f] >= schema.features[f].cardinality)
            throw DataError("one_hot_encode: value " + std::to_string(record[f]) +
                            " out of range for feature '" + schema.features[f].name +
                            "' (cardinality " +
                            std::to_string(schema.features[f].cardinality) + ")");
        v.set(f * schema.bits_per_feature + record[f]);
    }
    return v;
}

LshEncoder::LshEncoder(std::size_t bits, std::size_t dim, std::uint64_t seed)
    : bits_(bits), dim_(dim), seed_(seed), planes_(bits * dim) {
    if (bits < 1 || dim < 1)
        throw ConfigError("LshEncoder: bits and dim must be >= 1");
    for (std::size_t b = 0; b < bits; ++b)
        for (std::size_t d = 0; d < dim; ++d)
            planes_[b * dim + d] = gaussian_at(seed, 0x15e4, b, d);
}

template <typename T>
static BitVec encode_impl(const LshEncoder& enc, std::span<const T> v) {
    if (v.size() != enc.dim())
        throw DataError("lsh_encode: embedding dim " + std::to_string(v.size()) +
                        " != encoder dim " + std::to_string(enc.dim()));
    const auto& planes = enc.hyperplanes();
    BitVec out(enc.bits());
    for (std::size_t b = 0; b < enc.bits(); ++b) {
        double dot = 0;
        for (std::size_t d = 0; d < enc.dim(); ++d)
            dot += planes[b * enc.dim() + d] * static_cast<double>(v[d]);
        if (dot >= 0) out.set(b);  // ties map to 1
    }
    return out;
}

BitVec LshEncoder::encode(std::span<const float> v) const {
    return encode_impl<float>(*this, v);
}

BitVec LshEncoder::encode(std::span<const double> v) const {
    return encode_impl<double>(*this, v);
}

}  // namespace camsim
