#include "potvid/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <string>

#include "potvid/errors.hpp"

namespace potvid {

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    const std::filesystem::path base = path.parent_path();

    DatasetManifest manifest;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;

        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                           : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            line.find('\t', tab2 + 1) != std::string::npos)
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": expected <video_id>\\t<path>\\t<label>");

        ManifestEntry entry;
        entry.video_id = line.substr(0, tab1);
        entry.path = line.substr(tab1 + 1, tab2 - tab1 - 1);
        entry.label = line.substr(tab2 + 1);
        if (entry.video_id.empty() || entry.path.empty() || entry.label.empty())
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": empty field");

        for (const auto& seen : manifest.entries)
            if (seen.video_id == entry.video_id)
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": duplicate video id '" + entry.video_id + "'");

        // resolve each ;-separated piece against the manifest's directory
        std::string resolved;
        std::size_t start = 0;
        while (true) {
            const std::size_t semi = entry.path.find(';', start);
            const std::string piece = entry.path.substr(
                start, semi == std::string::npos ? std::string::npos : semi - start);
            std::filesystem::path p(piece);
            if (!resolved.empty()) resolved += ';';
            resolved += p.is_absolute() ? piece : (base / p).string();
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
        entry.path = resolved;

        if (std::find(manifest.classes.begin(), manifest.classes.end(), entry.label) ==
            manifest.classes.end())
            manifest.classes.push_back(entry.label);
        manifest.entries.push_back(std::move(entry));
    }
    if (manifest.entries.empty())
        throw FormatError(path.string() + ": manifest lists no entries");
    return manifest;
}

}  // namespace potvid
