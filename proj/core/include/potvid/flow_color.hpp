#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "potvid/image.hpp"
#include "potvid/optflow.hpp"

namespace potvid {

// Middlebury flow color wheel: 55 entries over six hue arcs of sizes
// RY=15, YG=6, GC=4, CB=11, BM=13, MR=6.
inline constexpr int kColorWheelSize = 55;
const std::array<std::array<std::uint8_t, 3>, kColorWheelSize>& flow_color_wheel();

// Middlebury color coding: hue from atan2(-v, -u), saturation rises with
// magnitude / max_radius, zero flow is white. max_radius defaults to the
// field's maximum magnitude, floored at 1e-9; magnitudes beyond it are
// darkened as out-of-range.
RgbFrame flow_to_color(const FlowField& flow,
                       std::optional<double> max_radius = std::nullopt);

}  // namespace potvid
