#include "potvid/flow_color.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

std::array<std::array<std::uint8_t, 3>, kColorWheelSize> build_wheel() {
    std::array<std::array<std::uint8_t, 3>, kColorWheelSize> w{};
    const int RY = 15, YG = 6, GC = 4, CB = 11, BM = 13, MR = 6;
    auto set = [&w](int k, int r, int g, int b) {
        w[static_cast<std::size_t>(k)] = {static_cast<std::uint8_t>(r),
                                          static_cast<std::uint8_t>(g),
                                          static_cast<std::uint8_t>(b)};
    };
    int k = 0;
    for (int i = 0; i < RY; ++i) set(k++, 255, 255 * i / RY, 0);
    for (int i = 0; i < YG; ++i) set(k++, 255 - 255 * i / YG, 255, 0);
    for (int i = 0; i < GC; ++i) set(k++, 0, 255, 255 * i / GC);
    for (int i = 0; i < CB; ++i) set(k++, 0, 255 - 255 * i / CB, 255);
    for (int i = 0; i < BM; ++i) set(k++, 255 * i / BM, 0, 255);
    for (int i = 0; i < MR; ++i) set(k++, 255, 0, 255 - 255 * i / MR);
    return w;
}

}  // namespace

const std::array<std::array<std::uint8_t, 3>, kColorWheelSize>& flow_color_wheel() {
    static const auto wheel = build_wheel();
    return wheel;
}

RgbFrame flow_to_color(const FlowField& flow, std::optional<double> max_radius) {
    const std::size_t n = static_cast<std::size_t>(flow.width) * flow.height;
    if (flow.width <= 0 || flow.height <= 0 || flow.u.size() != n || flow.v.size() != n)
        throw InputError("malformed flow field");
    for (std::size_t i = 0; i < n; ++i)
        if (!std::isfinite(flow.u[i]) || !std::isfinite(flow.v[i]))
            throw InputError("flow field contains non-finite values");

    double maxrad;
    if (max_radius) {
        maxrad = *max_radius;
    } else {
        maxrad = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            maxrad = std::max(maxrad,
                              std::sqrt(flow.u[i] * flow.u[i] + flow.v[i] * flow.v[i]));
    }
    maxrad = std::max(maxrad, 1e-9);

    const auto& wheel = flow_color_wheel();
    RgbFrame img = make_rgb(flow.width, flow.height);
    for (int y = 0; y < flow.height; ++y) {
        for (int x = 0; x < flow.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * flow.width + x;
            const double fx = flow.u[i] / maxrad;
            const double fy = flow.v[i] / maxrad;
            const double rad = std::sqrt(fx * fx + fy * fy);
            const double a = std::atan2(-fy, -fx) / std::numbers::pi;
            const double fk = (a + 1.0) / 2.0 * (kColorWheelSize - 1);
            const int k0 = static_cast<int>(fk);
            const int k1 = (k0 + 1) % kColorWheelSize;
            const double f = fk - k0;
            std::uint8_t* pix = img.px(x, y);
            for (int b = 0; b < 3; ++b) {
                const double col0 = wheel[static_cast<std::size_t>(k0)][b] / 255.0;
                const double col1 = wheel[static_cast<std::size_t>(k1)][b] / 255.0;
                double col = (1 - f) * col0 + f * col1;
                if (rad <= 1)
                    col = 1 - rad * (1 - col);  // saturation rises with radius
                else
                    col *= 0.75;  // out of range
                pix[b] = static_cast<std::uint8_t>(static_cast<int>(255.0 * col));
            }
        }
    }
    return img;
}

}  // namespace potvid
