#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "camsim/bitvec.hpp"
#include "camsim/encode.hpp"

namespace camsim {

/// CSV of 0/1 strings, one vector per line (a single unquoted column).
std::vector<BitVec> read_bits_csv(const std::string& path);
void write_bits_csv(const std::string& path, const std::vector<BitVec>& vecs);

/// Packed binary: magic "CAMB", u32 count, u32 width, then count rows of
/// ceil(width/8) bytes, little-endian within each byte (bit 0 = LSB).
std::vector<BitVec> read_bits_packed(const std::string& path);
void write_bits_packed(const std::string& path, const std::vector<BitVec>& vecs);

/// Auto-detect packed vs CSV by the magic bytes.
std::vector<BitVec> read_bits_auto(const std::string& path);

struct EmbeddingMatrix {
    std::size_t items = 0;
    std::size_t dim = 0;
    std::vector<float> data;  // row-major

    std::span<const float> row(std::size_t i) const {
        return {data.data() + i * dim, dim};
    }
};

/// Flat binary: u32 items, u32 dim, then items*dim little-endian f32.
EmbeddingMatrix read_embeddings_bin(const std::string& path);
void write_embeddings_bin(const std::string& path, const EmbeddingMatrix& m);

/// CSV of reals, one item per line.
EmbeddingMatrix read_embeddings_csv(const std::string& path);

/// Generic CSV table with a header row (quoting not supported; fields are
/// comma-split verbatim).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
CsvTable read_csv(const std::string& path);

}  // namespace camsim
