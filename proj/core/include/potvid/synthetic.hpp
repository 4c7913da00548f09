#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "potvid/image.hpp"

namespace potvid {

// Desk-scale motion dataset: smooth-edged squares over a flat background.
// Class 0 translates right 1 px/frame, class 1 translates down 1 px/frame,
// class 2 stays put and flickers in brightness. Intensities are quantized
// to the 8-bit grid so in-memory clips match their PGM files exactly.
struct SyntheticConfig {
    int clips_per_class = 20;
    int frames = 16;
    int size = 64;
    std::uint64_t seed = 0;
};

inline constexpr int kSyntheticClassCount = 3;

// Label for a class index: "right", "down", "flicker".
const char* synthetic_class_label(int class_index);

// Deterministic clip for (class_index, instance) under the config seed.
std::vector<GrayFrame> synthetic_clip(int class_index, int instance,
                                      const SyntheticConfig& config);

// Writes <root>/<label>_<instance>/frame_###.pgm for every clip plus a
// manifest.tsv tying them together; returns the manifest path.
std::filesystem::path generate_synthetic_dataset(const std::filesystem::path& root,
                                                 const SyntheticConfig& config);

}  // namespace potvid
