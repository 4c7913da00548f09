#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace potvid {

// Row-major grayscale frame with intensities in [0, 1].
struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Row-major 8-bit RGB frame, interleaved R,G,B.
struct RgbFrame {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    const std::uint8_t* px(int x, int y) const {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    std::uint8_t* px(int x, int y) {
        return pixels.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

// Allocates a w x h frame; throws InputError for nonpositive dimensions.
GrayFrame make_gray(int width, int height, double fill = 0.0);
RgbFrame make_rgb(int width, int height);

// Throws InputError when a frame violates its invariants (dimension /
// buffer mismatch, gray value outside [0, 1], non-finite value).
void validate(const GrayFrame& frame);
void validate(const RgbFrame& frame);

// Luminance 0.299 R + 0.587 G + 0.114 B, scaled to [0, 1].
GrayFrame to_luminance(const RgbFrame& frame);

// Gray replicated into all three channels (values quantized to 8 bits).
RgbFrame to_rgb(const GrayFrame& frame);

// Netpbm binary formats, maxval 255: PGM is "P5", PPM is "P6". Header
// tokens may be separated by whitespace and '#' comments. Readers throw
// FormatError on bad magic, bad header fields, other maxvals, or short
// payloads; writers quantize gray values by round(v * 255).
GrayFrame read_pgm(const std::filesystem::path& path);
void write_pgm(const GrayFrame& frame, const std::filesystem::path& path);
RgbFrame read_ppm(const std::filesystem::path& path);
void write_ppm(const RgbFrame& frame, const std::filesystem::path& path);

// Reads either format by magic; PGM content is replicated to RGB.
RgbFrame read_image(const std::filesystem::path& path);

// All .pgm/.ppm files in a directory, lexicographic by filename.
// Throws InputError when the directory holds no frames.
std::vector<RgbFrame> read_frame_directory(const std::filesystem::path& dir);

}  // namespace potvid
