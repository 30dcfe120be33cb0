#include "camsim/io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "camsim/error.hpp"

namespace camsim {

namespace {

constexpr char kMagic[4] = {'C', 'A', 'M', 'B'};

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw DataError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    return out;
}

std::uint32_t read_u32(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw DataError("'" + path + "': truncated file");
    return std::uint32_t(b[0]) | std::uint32_t(b[1]) << 8 | std::uint32_t(b[2]) << 16 |
           std::uint32_t(b[3]) << 24;
}

void write_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v),
                                static_cast<unsigned char>(v >> 8),
                                static_cast<unsigned char>(v >> 16),
                                static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

std::vector<BitVec> read_bits_csv(const std::string& path) {
    auto in = open_in(path);
    std::vector<BitVec> vecs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (line.empty()) continue;
        try {
            vecs.push_back(BitVec::from_string(line));
        } catch (const DataError& e) {
            throw DataError("'" + path + "' line " + std::to_string(lineno) + ": " +
                            e.what());
        }
        if (vecs.size() > 1 && vecs.back().width() != vecs.front().width())
            throw DataError("'" + path + "' line " + std::to_string(lineno) +
                            ": width differs from first row");
    }
    return vecs;
}

void write_bits_csv(const std::string& path, const std::vector<BitVec>& vecs) {
    auto out = open_out(path);
    for (const auto& v : vecs) out << v.to_string() << "\n";
}

std::vector<BitVec> read_bits_packed(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError("'" + path + "': missing CAMB magic");
    const std::uint32_t count = read_u32(in, path);
    const std::uint32_t width = read_u32(in, path);
    const std::size_t bytes = (width + 7) / 8;
    std::vector<BitVec> vecs;
    vecs.reserve(count);
    std::vector<char> buf(bytes);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!in.read(buf.data(), static_cast<std::streamsize>(bytes)))
            throw DataError("'" + path + "': truncated at row " + std::to_string(i));
        BitVec v(width);
        for (std::uint32_t bit = 0; bit < width; ++bit)
            if ((buf[bit / 8] >> (bit % 8)) & 1) v.set(bit);
        vecs.push_back(std::move(v));
    }
    return vecs;
}

void write_bits_packed(const std::string& path, const std::vector<BitVec>& vecs) {
    auto out = open_out(path, std::ios::binary);
    out.write(kMagic, 4);
    const std::uint32_t width = vecs.empty() ? 0 : static_cast<std::uint32_t>(vecs.front().width());
    write_u32(out, static_cast<std::uint32_t>(vecs.size()));
    write_u32(out, width);
    std::vector<char> buf((width + 7) / 8);
    for (const auto& v : vecs) {
        std::fill(buf.begin(), buf.end(), 0);
        for (std::uint32_t bit = 0; bit < width; ++bit)
            if (v.test(bit)) buf[bit / 8] |= static_cast<char>(1 << (bit % 8));
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
}

std::vector<BitVec> read_bits_auto(const std::string& path) {
    {
        auto in = open_in(path, std::ios::binary);
        char magic[4] = {0, 0, 0, 0};
        in.read(magic, 4);
        if (std::memcmp(magic, kMagic, 4) == 0) return read_bits_packed(path);
    }
    return read_bits_csv(path);
}

EmbeddingMatrix read_embeddings_bin(const std::string& path) {
    auto in = open_in(path, std::ios::binary);
    EmbeddingMatrix m;
    m.items = read_u32(in, path);
    m.dim = read_u32(in, path);
    m.data.resize(m.items * m.dim);
    static_assert(sizeof(float) == 4);
    if (!in.read(reinterpret_cast<char*>(m.data.data()),
                 static_cast<std::streamsize>(m.data.size() * 4)))
        throw DataError("'" + path + "': truncated embedding matrix");
    return m;
}

void write_embeddings_bin(const std::string& path, const EmbeddingMatrix& m) {
    auto out = open_out(path, std::ios::binary);
    write_u32(out, static_cast<std::uint32_t>(m.items));
    write_u32(out, static_cast<std::uint32_t>(m.dim));
    out.write(reinterpret_cast<const char*>(m.data.data()),
              static_cast<std::streamsize>(m.data.size() * 4));
}

EmbeddingMatrix read_embeddings_csv(const std::string& path) {
    auto in = open_in(path);
    EmbeddingMatrix m;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::size_t dim = 0;
        while (std::getline(row, cell, ',')) {
            try {
                m.data.push_back(std::stof(cell));
            } catch (const std::exception&) {
                throw DataError("'" + path + "' line " + std::to_string(lineno) +
                                ": bad number '" + cell + "'");
            }
            ++dim;
        }
        if (m.dim == 0) m.dim = dim;
        else if (dim != m.dim)
            throw DataError("'" + path + "' line " + std::to_string(lineno) +
                            ": ragged row");
        ++m.items;
    }
    return m;
}

CsvTable read_csv(const std::string& path) {
    auto in = open_in(path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
            line.pop_back();
        if (line.empty() && !first) continue;
        std::vector<std::string> cells;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (first) { t.header = cells; first = false; }
        else {
            cells.resize(t.header.size());
            t.rows.push_back(std::move(cells));
        }
    }
    if (first) throw DataError("'" + path + "': empty CSV");
    return t;
}

}  // namespace camsim
