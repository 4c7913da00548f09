#include "potvid/pyramid.hpp"

#include <string>

#include "potvid/errors.hpp"

namespace potvid {

std::vector<Window> pyramid_windows(std::size_t length, int levels) {
    if (levels < 1 || levels > 16)
        throw ConfigError("pyramid levels must be in 1..16, got " + std::to_string(levels));
    if (length == 0) throw InputError("series length must be positive");

    std::size_t deepest = std::size_t{1} << (levels - 1);
    if (length < deepest) {
        int max_feasible = 1;
        while ((std::size_t{1} << max_feasible) <= length) ++max_feasible;
        throw InputError("series of length " + std::to_string(length) + " cannot fill " +
                         std::to_string(levels) + " pyramid levels; maximum feasible is " +
                         std::to_string(max_feasible));
    }

    std::vector<Window> windows;
    windows.reserve((std::size_t{1} << levels) - 1);
    for (int level = 1; level <= levels; ++level) {
        std::size_t segments = std::size_t{1} << (level - 1);
        for (std::size_t k = 0; k < segments; ++k) {
            std::size_t start = k * length / segments;
            std::size_t end = (k + 1) * length / segments - 1;
            windows.push_back({start, end});
        }
    }
    return windows;
}

std::size_t encode_dim(const PyramidConfig& config, std::size_t channels) {
    return config.operators.size() * channels * ((std::size_t{1} << config.levels) - 1);
}

FeatureVector encode(const MultiChannelSeries& series, const PyramidConfig& config) {
    auto windows = pyramid_windows(series.length(), config.levels);
    FeatureVector out;
    out.reserve(encode_dim(config, series.channels()));
    for (Window w : windows) {
        auto block = pool_all(series, w, config.operators);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

}  // namespace potvid
