#include "potvid/descriptor.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "potvid/errors.hpp"

using potvid::DescriptorKind;
using potvid::DescriptorSpec;
using potvid::RgbFrame;

namespace {

RgbFrame solid(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RgbFrame f = potvid::make_rgb(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            auto* p = f.px(x, y);
            p[0] = r;
            p[1] = g;
            p[2] = b;
        }
    return f;
}

RgbFrame random_frame(std::mt19937_64& rng, int w, int h) {
    RgbFrame f = potvid::make_rgb(w, h);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& b : f.pixels) b = static_cast<std::uint8_t>(d(rng));
    return f;
}

}  // namespace

TEST_CASE("descriptor dimension follows the grid formula") {
    DescriptorSpec def;
    CHECK(def.dim() == 176);  // 4*4*(8+3)

    DescriptorSpec slim{.cells_x = 2, .cells_y = 3, .orientation_bins = 5,
                        .include_mean_color = false};
    CHECK(slim.dim() == 30);
}

TEST_CASE("middle frame index") {
    CHECK(potvid::middle_frame_index(1) == 0);
    CHECK(potvid::middle_frame_index(9) == 4);
    CHECK(potvid::middle_frame_index(10) == 5);
    CHECK_THROWS_AS(potvid::middle_frame_index(0), potvid::InputError);
}

TEST_CASE("uniform frame has empty histograms and its own mean color") {
    DescriptorSpec spec;
    auto frame = solid(32, 24, 120, 120, 120);
    auto v = potvid::describe_frame(frame, spec);
    REQUIRE(v.size() == 176);
    for (std::size_t cell = 0; cell < 16; ++cell) {
        for (int b = 0; b < 8; ++b) CHECK(v[cell * 11 + b] == 0.0);
        for (int ch = 0; ch < 3; ++ch)
            CHECK(v[cell * 11 + 8 + ch] == doctest::Approx(120.0 / 255.0).epsilon(1e-12));
    }
}

TEST_CASE("vertical step edge fills the rightward-gradient bin") {
    // step inside grid column 1: black for x < 12, white from x = 12 on
    DescriptorSpec spec;
    RgbFrame frame = potvid::make_rgb(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            auto* p = frame.px(x, y);
            const std::uint8_t val = x < 12 ? 0 : 255;
            p[0] = p[1] = p[2] = val;
        }
    auto v = potvid::describe_frame(frame, spec);
    for (std::size_t cy = 0; cy < 4; ++cy) {
        for (std::size_t cx = 0; cx < 4; ++cx) {
            const std::size_t cell = cy * 4 + cx;
            if (cx == 1) {
                // gradient points in +x, angle 0, so only bin 0 carries mass
                CHECK(v[cell * 11 + 0] == doctest::Approx(1.0).epsilon(1e-12));
                for (int b = 1; b < 8; ++b) CHECK(v[cell * 11 + b] == 0.0);
            } else {
                for (int b = 0; b < 8; ++b) CHECK(v[cell * 11 + b] == 0.0);
            }
            const double want = cx == 0 ? 0.0 : (cx == 1 ? 0.5 : 1.0);
            CHECK(v[cell * 11 + 8] == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("descriptor entries are nonnegative and finite") {
    std::mt19937_64 rng(41);
    DescriptorSpec spec;
    for (int round = 0; round < 5; ++round) {
        auto frame = random_frame(rng, 20 + round, 17 + round);
        auto v = potvid::describe_frame(frame, spec);
        REQUIRE(v.size() == spec.dim());
        for (double x : v) {
            CHECK(x >= 0.0);
            CHECK(std::isfinite(x));
        }
    }
}

TEST_CASE("content shifted by one cell width shifts cell blocks") {
    std::mt19937_64 rng(42);
    const int w = 48, h = 32, cw = 8;
    DescriptorSpec spec{.cells_x = 6, .cells_y = 4};
    auto base = random_frame(rng, w, h);
    RgbFrame shifted = potvid::make_rgb(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const auto* src = base.px(x >= cw ? x - cw : 0, y);
            auto* dst = shifted.px(x, y);
            dst[0] = src[0];
            dst[1] = src[1];
            dst[2] = src[2];
        }
    auto vb = potvid::describe_frame(base, spec);
    auto vs = potvid::describe_frame(shifted, spec);
    // interior columns only: the outermost cells see the frame border,
    // where edge replication breaks the correspondence
    for (std::size_t cy = 0; cy < 4; ++cy)
        for (std::size_t cx = 2; cx < 5; ++cx) {
            const std::size_t to = (cy * 6 + cx) * 11;
            const std::size_t from = (cy * 6 + cx - 1) * 11;
            for (std::size_t k = 0; k < 11; ++k)
                CHECK(vs[to + k] == doctest::Approx(vb[from + k]).epsilon(1e-12));
        }
}

TEST_CASE("describe_frame input checks") {
    DescriptorSpec spec;
    CHECK_THROWS_AS(potvid::describe_frame(solid(3, 5, 0, 0, 0), spec),
                    potvid::InputError);

    DescriptorSpec ext{.kind = DescriptorKind::ExternalFile};
    CHECK_THROWS_AS(potvid::describe_frame(solid(16, 16, 0, 0, 0), ext),
                    potvid::ConfigError);
}

TEST_CASE("describe_sequence stacks one column per frame") {
    std::mt19937_64 rng(43);
    DescriptorSpec spec;
    std::vector<RgbFrame> frames;
    for (int i = 0; i < 9; ++i) frames.push_back(random_frame(rng, 24, 24));

    auto series = potvid::describe_sequence(frames, spec);
    CHECK(series.channels() == 176);
    CHECK(series.length() == 9);
    for (std::size_t t = 0; t < 9; ++t) {
        auto v = potvid::describe_frame(frames[t], spec);
        for (std::size_t c = 0; c < 176; ++c) CHECK(series.at(c, t) == v[c]);
    }

    // permuting frames permutes columns
    std::vector<RgbFrame> swapped = frames;
    std::swap(swapped[2], swapped[7]);
    auto s2 = potvid::describe_sequence(swapped, spec);
    for (std::size_t c = 0; c < 176; ++c) {
        CHECK(s2.at(c, 2) == series.at(c, 7));
        CHECK(s2.at(c, 7) == series.at(c, 2));
        CHECK(s2.at(c, 0) == series.at(c, 0));
    }

    // identical frames give constant channels
    std::vector<RgbFrame> same(4, frames[0]);
    auto sc = potvid::describe_sequence(same, spec);
    for (std::size_t c = 0; c < 176; ++c)
        for (std::size_t t = 1; t < 4; ++t) CHECK(sc.at(c, t) == sc.at(c, 0));
}

TEST_CASE("describe_sequence input checks") {
    DescriptorSpec spec;
    CHECK_THROWS_AS(potvid::describe_sequence({}, spec), potvid::InputError);

    std::vector<RgbFrame> mixed = {solid(16, 16, 1, 2, 3), solid(17, 16, 1, 2, 3)};
    CHECK_THROWS_AS(potvid::describe_sequence(mixed, spec), potvid::InputError);
}
