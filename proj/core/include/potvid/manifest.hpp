#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace potvid {

// One dataset entry. `path` names either a directory of lexicographically
// ordered PGM/PPM frames, a `.pmtx` descriptor series (bypass path), or
// `motion.pmtx;appearance.pmtx` to supply both streams precomputed.
struct ManifestEntry {
    std::string video_id;
    std::string path;
    std::string label;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::vector<std::string> classes;  // first-appearance order
};

// Text format: one `<video_id>\t<path>\t<label>` entry per line; blank
// lines and lines starting with `#` are skipped. Relative paths are
// resolved against the manifest's directory. Duplicate video ids and
// malformed lines are format errors.
DatasetManifest load_manifest(const std::filesystem::path& path);

}  // namespace potvid
