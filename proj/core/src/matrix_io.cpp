#include "potvid/matrix_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

constexpr char kMagic[4] = {'P', 'M', 'T', 'X'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kMaxCells = 1ull << 28;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                 static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out.write(b, 4);
}

void read_exact(std::istream& in, char* dst, std::size_t n, std::size_t offset,
                const std::string& what) {
    in.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw FormatError("truncated " + what + " at offset " +
                          std::to_string(offset + static_cast<std::size_t>(in.gcount())));
}

std::uint32_t get_u32(std::istream& in, std::size_t offset, const std::string& what) {
    char b[4];
    read_exact(in, b, 4, offset, what);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | static_cast<std::uint8_t>(b[i]);
    return v;
}

}  // namespace

MultiChannelSeries load_descriptor_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());

    char magic[4];
    read_exact(in, magic, 4, 0, "header");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw FormatError("bad magic at offset 0 in " + path.string() +
                          " (expected PMTX)");
    const std::uint32_t version = get_u32(in, 4, "header");
    if (version != kVersion)
        throw FormatError("unsupported PMTX version " + std::to_string(version));
    const std::uint32_t rows = get_u32(in, 8, "header");
    const std::uint32_t cols = get_u32(in, 12, "header");
    if (rows == 0) throw FormatError("PMTX row count is zero");
    if (cols == 0) throw FormatError("PMTX column count is zero");
    if (static_cast<std::uint64_t>(rows) * cols > kMaxCells)
        throw FormatError("PMTX dimensions " + std::to_string(rows) + "x" +
                          std::to_string(cols) + " exceed the size cap");

    const std::size_t n = static_cast<std::size_t>(rows) * cols;
    std::vector<char> payload(n * 4);
    read_exact(in, payload.data(), payload.size(), 16, "payload");
    if (in.peek() != std::char_traits<char>::eof())
        throw FormatError("trailing bytes after offset " + std::to_string(16 + n * 4) +
                          " in " + path.string());

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits = 0;
        for (int b = 3; b >= 0; --b)
            bits = (bits << 8) |
                   static_cast<std::uint8_t>(payload[i * 4 + static_cast<std::size_t>(b)]);
        float f;
        std::memcpy(&f, &bits, 4);
        if (!std::isfinite(f))
            throw FormatError("non-finite value at row " + std::to_string(i / cols) +
                              ", col " + std::to_string(i % cols));
        values[i] = f;
    }
    return MultiChannelSeries::from_time_major(rows, cols, values);
}

void save_descriptor_matrix(const MultiChannelSeries& series,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(kMagic, 4);
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(series.length()));
    put_u32(out, static_cast<std::uint32_t>(series.channels()));
    for (std::size_t t = 0; t < series.length(); ++t)
        for (std::size_t c = 0; c < series.channels(); ++c) {
            const auto f = static_cast<float>(series.at(c, t));
            std::uint32_t bits;
            std::memcpy(&bits, &f, 4);
            put_u32(out, bits);
        }
    if (!out) throw FormatError("write failed for " + path.string());
}

std::vector<double> load_feature_vector(const std::filesystem::path& path) {
    MultiChannelSeries series = load_descriptor_matrix(path);
    if (series.length() != 1)
        throw FormatError("expected a single-row PMTX in " + path.string() + ", got " +
                          std::to_string(series.length()) + " rows");
    std::vector<double> values(series.channels());
    for (std::size_t c = 0; c < series.channels(); ++c) values[c] = series.at(c, 0);
    return values;
}

void save_feature_vector(const std::vector<double>& values,
                         const std::filesystem::path& path) {
    if (values.empty()) throw InputError("cannot save an empty feature vector");
    save_descriptor_matrix(MultiChannelSeries::from_time_major(1, values.size(), values),
                           path);
}

}  // namespace potvid
