#include "potvid/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

constexpr double kEdge = 2.0;  // linear skirt width around the square, px

double axis_profile(double coord, double center, double half) {
    const double d = std::abs(coord - center);
    return std::clamp((half + kEdge - d) / kEdge, 0.0, 1.0);
}

double quantize8(double v) {
    return std::lround(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0;
}

}  // namespace

const char* synthetic_class_label(int class_index) {
    switch (class_index) {
        case 0: return "right";
        case 1: return "down";
        case 2: return "flicker";
        default:
            throw InputError("class index " + std::to_string(class_index) +
                             " out of range (0..2)");
    }
}

std::vector<GrayFrame> synthetic_clip(int class_index, int instance,
                                      const SyntheticConfig& config) {
    synthetic_class_label(class_index);  // range check
    if (instance < 0 || instance >= config.clips_per_class)
        throw InputError("clip instance " + std::to_string(instance) + " out of range");
    if (config.frames < 1 || config.size < 16)
        throw ConfigError("synthetic clips need frames >= 1 and size >= 16");

    const std::uint64_t mix =
        config.seed ^ (0x9E3779B97F4A7C15ull *
                       (static_cast<std::uint64_t>(class_index) * 1024u +
                        static_cast<std::uint64_t>(instance) + 1u));
    std::mt19937_64 rng(mix);

    const double dx = class_index == 0 ? 1.0 : 0.0;
    const double dy = class_index == 1 ? 1.0 : 0.0;
    const double travel = static_cast<double>(config.frames - 1);

    std::uniform_real_distribution<double> half_d(
        config.size / 10.0, config.size / 6.0);
    const double half = half_d(rng);
    const double margin = half + kEdge + 2.0;
    std::uniform_real_distribution<double> cx_d(margin,
                                                config.size - 1 - margin - dx * travel);
    std::uniform_real_distribution<double> cy_d(margin,
                                                config.size - 1 - margin - dy * travel);
    const double cx0 = cx_d(rng);
    const double cy0 = cy_d(rng);
    std::uniform_real_distribution<double> bg_d(0.18, 0.30);
    std::uniform_real_distribution<double> fg_d(0.70, 0.82);
    const double bg = bg_d(rng);
    const double fg = fg_d(rng);

    std::vector<GrayFrame> clip;
    clip.reserve(static_cast<std::size_t>(config.frames));
    for (int t = 0; t < config.frames; ++t) {
        double level = fg;
        if (class_index == 2)  // brightness wave, period 4 frames
            level = bg + (fg - bg) * (0.6 + 0.4 * std::sin(2.0 * std::numbers::pi * t / 4.0));
        const double cx = cx0 + dx * t;
        const double cy = cy0 + dy * t;
        GrayFrame frame = make_gray(config.size, config.size, 0.0);
        for (int y = 0; y < config.size; ++y)
            for (int x = 0; x < config.size; ++x) {
                const double shape = axis_profile(x, cx, half) * axis_profile(y, cy, half);
                frame.at(x, y) = quantize8(bg + (level - bg) * shape);
            }
        clip.push_back(std::move(frame));
    }
    return clip;
}

std::filesystem::path generate_synthetic_dataset(const std::filesystem::path& root,
                                                 const SyntheticConfig& config) {
    std::filesystem::create_directories(root);
    const std::filesystem::path manifest_path = root / "manifest.tsv";
    std::ofstream manifest(manifest_path, std::ios::trunc);
    if (!manifest)
        throw FormatError("cannot open " + manifest_path.string() + " for writing");
    manifest << "# synthetic motion dataset, seed " << config.seed << "\n";

    for (int cls = 0; cls < kSyntheticClassCount; ++cls) {
        const std::string label = synthetic_class_label(cls);
        for (int inst = 0; inst < config.clips_per_class; ++inst) {
            char suffix[16];
            std::snprintf(suffix, sizeof suffix, "_%02d", inst);
            const std::string clip_name = label + suffix;
            const std::filesystem::path dir = root / clip_name;
            std::filesystem::create_directories(dir);

            const auto clip = synthetic_clip(cls, inst, config);
            for (std::size_t t = 0; t < clip.size(); ++t) {
                char frame_name[24];
                std::snprintf(frame_name, sizeof frame_name, "frame_%03zu.pgm", t);
                write_pgm(clip[t], dir / frame_name);
            }
            manifest << clip_name << '\t' << clip_name << '\t' << label << '\n';
        }
    }
    if (!manifest) throw FormatError("write failed for " + manifest_path.string());
    return manifest_path;
}

}  // namespace potvid
