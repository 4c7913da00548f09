#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "potvid/image.hpp"
#include "potvid/timeseries.hpp"

namespace potvid {

enum class DescriptorKind { BuiltinGrid, ExternalFile };

// Frame description stage. The builtin grid descriptor is a desk-scale
// stand-in for CNN features: per grid cell, an orientation histogram of
// luminance gradients plus the cell's mean color. ExternalFile marks a
// spec whose features come from a PMTX file instead of frames.
struct DescriptorSpec {
    DescriptorKind kind = DescriptorKind::BuiltinGrid;
    int cells_x = 4;
    int cells_y = 4;
    int orientation_bins = 8;
    bool include_mean_color = true;
    std::filesystem::path path;  // PMTX source for ExternalFile

    // Builtin output length: cells_x * cells_y * (bins + 3 if mean color).
    std::size_t dim() const;
};

// 0-based index of the frame used for the appearance stream.
std::size_t middle_frame_index(std::size_t frame_count);

// Layout: cells row-major (cy outer), each cell emitting its L1-normalized
// orientation bins (all-zero cells stay zero) then mean R, G, B in [0,1].
// Gradients are central differences of luminance with edge replication.
std::vector<double> describe_frame(const RgbFrame& frame, const DescriptorSpec& spec);

// One column per frame: C = spec.dim(), T = |frames|.
MultiChannelSeries describe_sequence(std::span<const RgbFrame> frames,
                                     const DescriptorSpec& spec);

}  // namespace potvid
