#pragma once

#include <cstddef>
#include <vector>

#include "potvid/timeseries.hpp"

namespace potvid {

using FeatureVector = std::vector<double>;

// Level counts that worked best per video style; callers pick one
// explicitly, nothing selects them automatically.
inline constexpr int kFirstPersonLevels = 4;
inline constexpr int kThirdPersonLevels = 3;

struct PyramidConfig {
    int levels = kThirdPersonLevels;             // 1..16
    std::vector<PoolOp> operators = default_pool_ops();
};

// Temporal pyramid windows over [0, T-1], level-major: level L splits the
// domain into 2^(L-1) contiguous segments; segment k of n spans
// [floor(k*T/n), floor((k+1)*T/n) - 1]. Total windows = 2^levels - 1.
// Throws InputError when T < 2^(levels-1), naming the largest feasible
// level count; ConfigError for levels outside 1..16.
std::vector<Window> pyramid_windows(std::size_t length, int levels);

// Encoded dimension: |operators| * channels * (2^levels - 1).
std::size_t encode_dim(const PyramidConfig& config, std::size_t channels);

// PoT encoding: concatenation of pool_all over every pyramid window, in
// pyramid_windows order (window-major, then channel, then operator).
FeatureVector encode(const MultiChannelSeries& series, const PyramidConfig& config);

}  // namespace potvid
