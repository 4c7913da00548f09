#pragma once

#include <filesystem>
#include <vector>

#include "potvid/timeseries.hpp"

namespace potvid {

// PMTX descriptor matrix file, all little-endian:
//   bytes 0-3   magic "PMTX"
//   bytes 4-7   u32 version, currently 1
//   bytes 8-11  u32 rows (time steps)
//   bytes 12-15 u32 cols (channels)
//   bytes 16-   rows*cols float32, row-major
// Values are stored at float32 precision. Trailing bytes after the
// payload are rejected, as are zero dimensions and non-finite values.
MultiChannelSeries load_descriptor_matrix(const std::filesystem::path& path);
void save_descriptor_matrix(const MultiChannelSeries& series,
                            const std::filesystem::path& path);

// Feature vectors travel as single-row PMTX matrices.
std::vector<double> load_feature_vector(const std::filesystem::path& path);
void save_feature_vector(const std::vector<double>& values,
                         const std::filesystem::path& path);

}  // namespace potvid
