#include "potvid/flow_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

constexpr char kTag[4] = {'P', 'I', 'E', 'H'};  // float 202021.25 little-endian
constexpr int kMaxDim = 1 << 20;

void put_u32(std::ostream& out, std::uint32_t v) {
    char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
                 static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
    out.write(b, 4);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

// Reads exactly n bytes or throws naming where the stream ran dry.
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
    return static_cast<std::uint8_t>(b[0]) | (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[1])) << 8) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[2])) << 16) |
           (static_cast<std::uint32_t>(static_cast<std::uint8_t>(b[3])) << 24);
}

}  // namespace

FlowField read_flo(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());

    char tag[4];
    read_exact(in, tag, 4, 0, "header");
    if (std::memcmp(tag, kTag, 4) != 0)
        throw FormatError("bad magic at offset 0 in " + path.string() +
                          " (expected PIEH)");

    const auto width = static_cast<std::int32_t>(get_u32(in, 4, "header"));
    const auto height = static_cast<std::int32_t>(get_u32(in, 8, "header"));
    if (width <= 0 || width > kMaxDim)
        throw FormatError("width " + std::to_string(width) + " out of range at offset 4");
    if (height <= 0 || height > kMaxDim)
        throw FormatError("height " + std::to_string(height) + " out of range at offset 8");

    FlowField flow;
    flow.width = width;
    flow.height = height;
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    flow.u.resize(n);
    flow.v.resize(n);

    std::vector<char> payload(n * 8);
    read_exact(in, payload.data(), payload.size(), 12, "payload");
    auto f32_at = [&payload](std::size_t off) {
        std::uint32_t bits = 0;
        for (int b = 3; b >= 0; --b)
            bits = (bits << 8) |
                   static_cast<std::uint8_t>(payload[off + static_cast<std::size_t>(b)]);
        float f;
        std::memcpy(&f, &bits, 4);
        return f;
    };
    for (std::size_t i = 0; i < n; ++i) {
        flow.u[i] = f32_at(i * 8);
        flow.v[i] = f32_at(i * 8 + 4);
    }
    return flow;
}

void write_flo(const FlowField& flow, const std::filesystem::path& path) {
    const std::size_t n = static_cast<std::size_t>(flow.width) * flow.height;
    if (flow.width <= 0 || flow.height <= 0 || flow.u.size() != n || flow.v.size() != n)
        throw InputError("malformed flow field");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(flow.u[i]) || !std::isfinite(flow.v[i]))
            throw InputError("flow field contains non-finite values");

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out.write(kTag, 4);
    put_u32(out, static_cast<std::uint32_t>(flow.width));
    put_u32(out, static_cast<std::uint32_t>(flow.height));
    for (std::size_t i = 0; i < n; ++i) {
        put_f32(out, static_cast<float>(flow.u[i]));
        put_f32(out, static_cast<float>(flow.v[i]));
    }
    if (!out) throw FormatError("write failed for " + path.string());
}

}  // namespace potvid
