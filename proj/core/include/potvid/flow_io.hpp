#pragma once

#include <filesystem>

#include "potvid/optflow.hpp"

namespace potvid {

// Middlebury .flo layout, all little-endian:
//   bytes 0-3   float tag 202021.25 ("PIEH" in ASCII)
//   bytes 4-7   i32 width
//   bytes 8-11  i32 height
//   bytes 12-   height*width (u, v) float32 pairs, row-major
// Values are stored at float32 precision; a write/read/write cycle is
// byte-identical. Readers throw FormatError naming the byte offset of
// the problem.
FlowField read_flo(const std::filesystem::path& path);
void write_flo(const FlowField& flow, const std::filesystem::path& path);

}  // namespace potvid
