#include "potvid/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

void check_builtin(const DescriptorSpec& spec) {
    if (spec.kind != DescriptorKind::BuiltinGrid)
        throw ConfigError("operation requires a builtin-grid descriptor spec");
    if (spec.cells_x < 1 || spec.cells_y < 1)
        throw ConfigError("descriptor grid must be at least 1x1");
    if (spec.orientation_bins < 1)
        throw ConfigError("descriptor needs at least one orientation bin");
}

}  // namespace

std::size_t DescriptorSpec::dim() const {
    const std::size_t per_cell = static_cast<std::size_t>(orientation_bins) +
                                 (include_mean_color ? 3 : 0);
    return static_cast<std::size_t>(cells_x) * static_cast<std::size_t>(cells_y) *
           per_cell;
}

std::size_t middle_frame_index(std::size_t frame_count) {
    if (frame_count == 0) throw InputError("middle_frame_index of an empty sequence");
    return frame_count / 2;
}

std::vector<double> describe_frame(const RgbFrame& frame, const DescriptorSpec& spec) {
    check_builtin(spec);
    validate(frame);
    if (frame.width < spec.cells_x || frame.height < spec.cells_y)
        throw InputError("frame " + std::to_string(frame.width) + "x" +
                         std::to_string(frame.height) + " is smaller than the " +
                         std::to_string(spec.cells_x) + "x" +
                         std::to_string(spec.cells_y) + " grid");

    const int w = frame.width, h = frame.height;
    const int bins = spec.orientation_bins;
    const GrayFrame lum = to_luminance(frame);

    const std::size_t cells = static_cast<std::size_t>(spec.cells_x) * spec.cells_y;
    const std::size_t per_cell = static_cast<std::size_t>(bins) +
                                 (spec.include_mean_color ? 3 : 0);
    std::vector<double> hist(cells * static_cast<std::size_t>(bins), 0.0);
    std::vector<double> color(cells * 3, 0.0);
    std::vector<std::size_t> counts(cells, 0);

    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
        const std::size_t cy = static_cast<std::size_t>(y) * spec.cells_y / h;
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
            const double gx = 0.5 * (lum.at(xp, y) - lum.at(xm, y));
            const double gy = 0.5 * (lum.at(x, yp) - lum.at(x, ym));
            const double mag = std::sqrt(gx * gx + gy * gy);
            const std::size_t cx = static_cast<std::size_t>(x) * spec.cells_x / w;
            const std::size_t cell = cy * spec.cells_x + cx;
            if (mag > 0.0) {
                double theta = std::atan2(gy, gx);
                if (theta < 0.0) theta += two_pi;
                auto bin = static_cast<std::size_t>(theta / two_pi * bins);
                if (bin >= static_cast<std::size_t>(bins)) bin = bins - 1;
                hist[cell * static_cast<std::size_t>(bins) + bin] += mag;
            }
            const std::uint8_t* p = frame.px(x, y);
            color[cell * 3 + 0] += p[0] / 255.0;
            color[cell * 3 + 1] += p[1] / 255.0;
            color[cell * 3 + 2] += p[2] / 255.0;
            ++counts[cell];
        }
    }

    std::vector<double> out(cells * per_cell, 0.0);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        double total = 0.0;
        for (int b = 0; b < bins; ++b)
            total += hist[cell * static_cast<std::size_t>(bins) + b];
        double* dst = out.data() + cell * per_cell;
        if (total > 0.0)
            for (int b = 0; b < bins; ++b)
                dst[b] = hist[cell * static_cast<std::size_t>(bins) + b] / total;
        if (spec.include_mean_color) {
            const auto cnt = static_cast<double>(counts[cell]);
            for (int ch = 0; ch < 3; ++ch)
                dst[bins + ch] = color[cell * 3 + ch] / cnt;
        }
    }
    return out;
}

MultiChannelSeries describe_sequence(std::span<const RgbFrame> frames,
                                     const DescriptorSpec& spec) {
    check_builtin(spec);
    if (frames.empty()) throw InputError("describe_sequence needs at least one frame");
    for (std::size_t i = 1; i < frames.size(); ++i)
        if (frames[i].width != frames[0].width || frames[i].height != frames[0].height)
            throw InputError("frame " + std::to_string(i) +
                             " differs in size from frame 0");

    const std::size_t d = spec.dim();
    std::vector<double> time_major;
    time_major.reserve(frames.size() * d);
    for (const auto& frame : frames) {
        auto v = describe_frame(frame, spec);
        time_major.insert(time_major.end(), v.begin(), v.end());
    }
    return MultiChannelSeries::from_time_major(frames.size(), d, time_major);
}

}  // namespace potvid
