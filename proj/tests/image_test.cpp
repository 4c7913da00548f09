#include "potvid/image.hpp"

#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>

#include "potvid/errors.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    auto dir = fs::temp_directory_path() / "potvid_image_test";
    fs::create_directories(dir);
    return dir;
}

void write_bytes(const fs::path& p, const std::string& bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("frame construction and validation") {
    auto g = potvid::make_gray(4, 3, 0.5);
    CHECK(g.pixels.size() == 12);
    CHECK(g.at(3, 2) == 0.5);
    CHECK_THROWS_AS(potvid::make_gray(0, 3), potvid::InputError);
    CHECK_THROWS_AS(potvid::make_gray(4, -1), potvid::InputError);

    g.at(0, 0) = 1.5;
    CHECK_THROWS_AS(potvid::validate(g), potvid::InputError);
    g.at(0, 0) = 0.25;
    CHECK_NOTHROW(potvid::validate(g));
}

TEST_CASE("luminance uses the Rec.601 weights") {
    auto rgb = potvid::make_rgb(1, 1);
    rgb.pixels = {255, 0, 0};
    CHECK(potvid::to_luminance(rgb).at(0, 0) == doctest::Approx(0.299));
    rgb.pixels = {0, 255, 0};
    CHECK(potvid::to_luminance(rgb).at(0, 0) == doctest::Approx(0.587));
    rgb.pixels = {0, 0, 255};
    CHECK(potvid::to_luminance(rgb).at(0, 0) == doctest::Approx(0.114));
    rgb.pixels = {255, 255, 255};
    CHECK(potvid::to_luminance(rgb).at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("pgm round trip is exact at 8-bit resolution") {
    auto dir = temp_dir();
    std::mt19937_64 rng(42);
    auto g = potvid::make_gray(7, 5);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& p : g.pixels) p = d(rng) / 255.0;

    auto path = dir / "roundtrip.pgm";
    potvid::write_pgm(g, path);
    auto back = potvid::read_pgm(path);
    REQUIRE(back.width == 7);
    REQUIRE(back.height == 5);
    for (std::size_t i = 0; i < g.pixels.size(); ++i)
        CHECK(back.pixels[i] == doctest::Approx(g.pixels[i]).epsilon(1e-12));
}

TEST_CASE("ppm round trip is byte exact") {
    auto dir = temp_dir();
    std::mt19937_64 rng(43);
    auto f = potvid::make_rgb(6, 4);
    std::uniform_int_distribution<int> d(0, 255);
    for (auto& p : f.pixels) p = static_cast<std::uint8_t>(d(rng));

    auto path = dir / "roundtrip.ppm";
    potvid::write_ppm(f, path);
    auto back = potvid::read_ppm(path);
    REQUIRE(back.width == 6);
    REQUIRE(back.height == 4);
    CHECK(back.pixels == f.pixels);
}

TEST_CASE("pgm header parsing accepts comments and flexible whitespace") {
    auto dir = temp_dir();
    auto path = dir / "comment.pgm";
    std::string payload = "P5 # magic\n# a comment line\n 2\t2 #dims\n255\n";
    payload += std::string("\x10\x20\x30\x40", 4);
    write_bytes(path, payload);
    auto g = potvid::read_pgm(path);
    CHECK(g.width == 2);
    CHECK(g.height == 2);
    CHECK(g.at(1, 1) == doctest::Approx(0x40 / 255.0));
}

TEST_CASE("netpbm readers reject malformed files") {
    auto dir = temp_dir();

    auto bad_magic = dir / "bad_magic.pgm";
    write_bytes(bad_magic, "P4\n2 2\n255\nXXXX");
    CHECK_THROWS_AS(potvid::read_pgm(bad_magic), potvid::FormatError);

    auto bad_maxval = dir / "bad_maxval.pgm";
    write_bytes(bad_maxval, "P5\n2 2\n65535\nXXXXXXXX");
    CHECK_THROWS_AS(potvid::read_pgm(bad_maxval), potvid::FormatError);

    auto truncated = dir / "short.pgm";
    write_bytes(truncated, "P5\n2 2\n255\nXX");
    CHECK_THROWS_AS(potvid::read_pgm(truncated), potvid::FormatError);

    auto zero_dim = dir / "zero.pgm";
    write_bytes(zero_dim, "P5\n0 2\n255\n");
    CHECK_THROWS_AS(potvid::read_pgm(zero_dim), potvid::FormatError);

    auto missing = dir / "does_not_exist.pgm";
    CHECK_THROWS_AS(potvid::read_pgm(missing), potvid::FormatError);
}

TEST_CASE("read_image dispatches on magic") {
    auto dir = temp_dir();
    auto g = potvid::make_gray(3, 2, 0.5);
    potvid::write_pgm(g, dir / "gray.pgm");
    auto rgb = potvid::read_image(dir / "gray.pgm");
    CHECK(rgb.width == 3);
    const auto* p = rgb.px(0, 0);
    CHECK(p[0] == p[1]);
    CHECK(p[1] == p[2]);

    auto c = potvid::make_rgb(2, 2);
    c.pixels.assign(12, 7);
    potvid::write_ppm(c, dir / "color.ppm");
    auto back = potvid::read_image(dir / "color.ppm");
    CHECK(back.pixels == c.pixels);
}

TEST_CASE("frame directories load lexicographically") {
    auto dir = temp_dir() / "frames";
    fs::create_directories(dir);
    for (int i = 0; i < 3; ++i) {
        auto g = potvid::make_gray(2, 2, i / 10.0);
        potvid::write_pgm(g, dir / ("frame_000" + std::to_string(i) + ".pgm"));
    }
    // a non-frame file that must be ignored
    write_bytes(dir / "notes.txt", "ignore me");

    auto frames = potvid::read_frame_directory(dir);
    REQUIRE(frames.size() == 3);
    CHECK(potvid::to_luminance(frames[0]).at(0, 0) == doctest::Approx(0.0).epsilon(1e-2));
    CHECK(potvid::to_luminance(frames[2]).at(0, 0) == doctest::Approx(0.2).epsilon(1e-1));

    auto empty = temp_dir() / "empty";
    fs::create_directories(empty);
    CHECK_THROWS_AS(potvid::read_frame_directory(empty), potvid::InputError);
}
