#include "potvid/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <string>

#include "potvid/errors.hpp"

namespace potvid {

GrayFrame make_gray(int width, int height, double fill) {
    if (width <= 0 || height <= 0)
        throw InputError("frame dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
    GrayFrame f;
    f.width = width;
    f.height = height;
    f.pixels.assign(static_cast<std::size_t>(width) * height, fill);
    return f;
}

RgbFrame make_rgb(int width, int height) {
    if (width <= 0 || height <= 0)
        throw InputError("frame dimensions must be positive, got " + std::to_string(width) +
                         "x" + std::to_string(height));
    RgbFrame f;
    f.width = width;
    f.height = height;
    f.pixels.assign(static_cast<std::size_t>(width) * height * 3, 0);
    return f;
}

void validate(const GrayFrame& frame) {
    if (frame.width <= 0 || frame.height <= 0)
        throw InputError("frame dimensions must be positive");
    if (frame.pixels.size() != static_cast<std::size_t>(frame.width) * frame.height)
        throw InputError("gray frame buffer does not match its dimensions");
    for (double v : frame.pixels)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw InputError("gray intensities must be finite and within [0, 1]");
}

void validate(const RgbFrame& frame) {
    if (frame.width <= 0 || frame.height <= 0)
        throw InputError("frame dimensions must be positive");
    if (frame.pixels.size() != static_cast<std::size_t>(frame.width) * frame.height * 3)
        throw InputError("rgb frame buffer does not match its dimensions");
}

GrayFrame to_luminance(const RgbFrame& frame) {
    validate(frame);
    GrayFrame g = make_gray(frame.width, frame.height);
    const std::size_t n = g.pixels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint8_t* p = frame.pixels.data() + 3 * i;
        g.pixels[i] = (0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]) / 255.0;
    }
    return g;
}

namespace {

std::uint8_t quantize(double v) {
    double clamped = std::clamp(v, 0.0, 1.0);
    return static_cast<std::uint8_t>(std::lround(clamped * 255.0));
}

// Reads one header token, skipping whitespace and '#'-to-EOL comments.
std::string next_token(std::istream& in, const std::string& what) {
    int c = in.get();
    while (c != EOF) {
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
        } else if (!std::isspace(c)) {
            break;
        }
        c = in.get();
    }
    if (c == EOF) throw FormatError("netpbm header ended before " + what);
    std::string token;
    while (c != EOF && !std::isspace(c) && c != '#') {
        token.push_back(static_cast<char>(c));
        c = in.get();
    }
    if (c == '#') {
        while (c != EOF && c != '\n') c = in.get();
    }
    return token;
}

int parse_dim(const std::string& token, const std::string& what) {
    int value = 0;
    for (char ch : token) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw FormatError("netpbm header field '" + what + "' is not a number: " + token);
        value = value * 10 + (ch - '0');
        if (value > 1 << 24) throw FormatError("netpbm " + what + " out of range");
    }
    if (token.empty()) throw FormatError("netpbm header field '" + what + "' is empty");
    return value;
}

struct PnmHeader {
    std::string magic;
    int width = 0;
    int height = 0;
};

PnmHeader read_header(std::istream& in, const std::filesystem::path& path,
                      const char* expected_magic) {
    PnmHeader h;
    h.magic = next_token(in, "magic");
    if (expected_magic && h.magic != expected_magic)
        throw FormatError(path.string() + ": expected " + expected_magic + " magic, got '" +
                          h.magic + "'");
    if (h.magic != "P5" && h.magic != "P6")
        throw FormatError(path.string() + ": unsupported netpbm magic '" + h.magic + "'");
    h.width = parse_dim(next_token(in, "width"), "width");
    h.height = parse_dim(next_token(in, "height"), "height");
    int maxval = parse_dim(next_token(in, "maxval"), "maxval");
    if (h.width <= 0 || h.height <= 0)
        throw FormatError(path.string() + ": dimensions must be positive");
    if (maxval != 255)
        throw FormatError(path.string() + ": only maxval 255 is supported, got " +
                          std::to_string(maxval));
    // exactly one whitespace byte separates the header from the raster
    return h;
}

std::vector<std::uint8_t> read_payload(std::istream& in, std::size_t n,
                                       const std::filesystem::path& path) {
    std::vector<std::uint8_t> bytes(n);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in.gcount()) != n)
        throw FormatError(path.string() + ": raster truncated, expected " + std::to_string(n) +
                          " bytes, got " + std::to_string(in.gcount()));
    return bytes;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    return in;
}

}  // namespace

GrayFrame read_pgm(const std::filesystem::path& path) {
    auto in = open_input(path);
    auto h = read_header(in, path, "P5");
    auto bytes = read_payload(in, static_cast<std::size_t>(h.width) * h.height, path);
    GrayFrame f = make_gray(h.width, h.height);
    for (std::size_t i = 0; i < bytes.size(); ++i) f.pixels[i] = bytes[i] / 255.0;
    return f;
}

void write_pgm(const GrayFrame& frame, const std::filesystem::path& path) {
    validate(frame);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out << "P5\n" << frame.width << " " << frame.height << "\n255\n";
    std::vector<std::uint8_t> bytes(frame.pixels.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = quantize(frame.pixels[i]);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw FormatError("short write to " + path.string());
}

RgbFrame read_ppm(const std::filesystem::path& path) {
    auto in = open_input(path);
    auto h = read_header(in, path, "P6");
    RgbFrame f = make_rgb(h.width, h.height);
    f.pixels = read_payload(in, static_cast<std::size_t>(h.width) * h.height * 3, path);
    return f;
}

void write_ppm(const RgbFrame& frame, const std::filesystem::path& path) {
    validate(frame);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out << "P6\n" << frame.width << " " << frame.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(frame.pixels.data()),
              static_cast<std::streamsize>(frame.pixels.size()));
    if (!out) throw FormatError("short write to " + path.string());
}

RgbFrame to_rgb(const GrayFrame& frame) {
    validate(frame);
    RgbFrame rgb = make_rgb(frame.width, frame.height);
    for (std::size_t i = 0; i < frame.pixels.size(); ++i) {
        std::uint8_t v = quantize(frame.pixels[i]);
        rgb.pixels[3 * i] = v;
        rgb.pixels[3 * i + 1] = v;
        rgb.pixels[3 * i + 2] = v;
    }
    return rgb;
}

RgbFrame read_image(const std::filesystem::path& path) {
    {
        auto in = open_input(path);
        auto magic = next_token(in, "magic");
        if (magic == "P6") return read_ppm(path);
        if (magic != "P5")
            throw FormatError(path.string() + ": unsupported netpbm magic '" + magic + "'");
    }
    return to_rgb(read_pgm(path));
}

std::vector<RgbFrame> read_frame_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw InputError(dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const auto& a, const auto& b) { return a.filename() < b.filename(); });
    if (files.empty()) throw InputError(dir.string() + " holds no .pgm/.ppm frames");
    std::vector<RgbFrame> frames;
    frames.reserve(files.size());
    for (const auto& f : files) frames.push_back(read_image(f));
    return frames;
}

}  // namespace potvid
