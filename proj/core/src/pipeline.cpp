#include "potvid/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "potvid/errors.hpp"
#include "potvid/flow_color.hpp"
#include "potvid/matrix_io.hpp"

namespace potvid {
namespace {

void l1_normalize(FeatureVector& v) {
    double sum = 0.0;
    for (double x : v) sum += std::abs(x);
    if (sum > 0.0)
        for (double& x : v) x /= sum;
}

FeatureVector concat_streams(FeatureVector motion, FeatureVector appearance,
                             bool normalize) {
    if (normalize) {
        l1_normalize(motion);
        l1_normalize(appearance);
    }
    motion.insert(motion.end(), appearance.begin(), appearance.end());
    return motion;
}

FeatureVector middle_column(const MultiChannelSeries& series) {
    const std::size_t t = middle_frame_index(series.length());
    FeatureVector column(series.channels());
    for (std::size_t c = 0; c < series.channels(); ++c) column[c] = series.at(c, t);
    return column;
}

// Per class: indices in manifest order, for protocol bookkeeping.
std::vector<std::vector<std::size_t>> indices_by_class(const DatasetManifest& manifest) {
    std::vector<std::vector<std::size_t>> by_class(manifest.classes.size());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        const auto it = std::find(manifest.classes.begin(), manifest.classes.end(),
                                  manifest.entries[i].label);
        by_class[static_cast<std::size_t>(it - manifest.classes.begin())].push_back(i);
    }
    return by_class;
}

void check_protocol_manifest(const DatasetManifest& manifest,
                             const std::vector<std::vector<std::size_t>>& by_class) {
    if (manifest.classes.size() < 2)
        throw InputError("evaluation needs at least 2 classes, got " +
                         std::to_string(manifest.classes.size()));
    for (std::size_t c = 0; c < by_class.size(); ++c)
        if (by_class[c].size() < 2)
            throw InputError("class '" + manifest.classes[c] + "' has " +
                             std::to_string(by_class[c].size()) +
                             " video(s); protocols need at least 2 per class");
}

std::vector<FeatureVector> extract_all(const DatasetManifest& manifest,
                                       const PipelineConfig& config) {
    std::vector<FeatureVector> features;
    features.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries)
        features.push_back(entry_representation(entry, config));
    return features;
}

// Deterministic in-place shuffle shared by the protocols; mirrors the
// trainer's explicit Fisher-Yates so splits do not depend on the standard
// library's std::shuffle.
void seeded_shuffle(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(idx[i], idx[j]);
    }
}

}  // namespace

FeatureVector motion_features(std::span<const RgbFrame> frames,
                              const PipelineConfig& config) {
    if (frames.size() < 2)
        throw InputError("motion stream needs at least 2 frames, got " +
                         std::to_string(frames.size()));
    std::vector<GrayFrame> gray;
    gray.reserve(frames.size());
    for (const auto& frame : frames) gray.push_back(to_luminance(frame));

    const auto fields = flow_sequence(gray, config.flow, config.flow_threads);
    std::vector<RgbFrame> colorized;
    colorized.reserve(fields.size());
    for (const auto& field : fields) colorized.push_back(flow_to_color(field));

    const auto series = describe_sequence(colorized, config.motion_descriptor);
    return encode(series, config.pyramid);
}

FeatureVector motion_features(const MultiChannelSeries& series,
                              const PipelineConfig& config) {
    return encode(series, config.pyramid);
}

FeatureVector appearance_features(std::span<const RgbFrame> frames,
                                  const PipelineConfig& config) {
    if (frames.empty()) throw InputError("appearance stream needs at least 1 frame");
    return describe_frame(frames[middle_frame_index(frames.size())],
                          config.appearance_descriptor);
}

FeatureVector final_representation(std::span<const RgbFrame> frames,
                                   const PipelineConfig& config) {
    return concat_streams(motion_features(frames, config),
                          appearance_features(frames, config),
                          config.l1_normalize_streams);
}

FeatureVector entry_representation(const ManifestEntry& entry,
                                   const PipelineConfig& config) {
    const std::filesystem::path as_path(entry.path);
    if (std::filesystem::is_directory(as_path)) {
        const auto frames = read_frame_directory(as_path);
        return final_representation(frames, config);
    }

    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t semi = entry.path.find(';', start);
        parts.push_back(entry.path.substr(
            start, semi == std::string::npos ? std::string::npos : semi - start));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    if (parts.size() > 2)
        throw InputError("entry '" + entry.video_id +
                         "' lists more than two descriptor files");
    for (const auto& part : parts)
        if (!part.ends_with(".pmtx"))
            throw InputError("entry '" + entry.video_id + "' path '" + part +
                             "' is neither a frame directory nor a .pmtx file");

    const MultiChannelSeries motion_series = load_descriptor_matrix(parts[0]);
    FeatureVector motion = motion_features(motion_series, config);
    FeatureVector appearance =
        parts.size() == 2 ? middle_column(load_descriptor_matrix(parts[1]))
                          : middle_column(motion_series);
    return concat_streams(std::move(motion), std::move(appearance),
                          config.l1_normalize_streams);
}

EvalReport run_loocv(const DatasetManifest& manifest, const PipelineConfig& config) {
    const auto by_class = indices_by_class(manifest);
    check_protocol_manifest(manifest, by_class);

    const auto features = extract_all(manifest, config);
    const std::size_t n = features.size();
    std::vector<std::string> truths, predictions;
    truths.reserve(n);
    predictions.reserve(n);

    for (std::size_t held = 0; held < n; ++held) {
        std::vector<FeatureVector> train_features;
        std::vector<std::string> train_labels;
        train_features.reserve(n - 1);
        train_labels.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == held) continue;
            train_features.push_back(features[i]);
            train_labels.push_back(manifest.entries[i].label);
        }
        const auto model = train(train_features, train_labels, config.train, config.kernel);
        truths.push_back(manifest.entries[held].label);
        predictions.push_back(predict(model, features[held]).label);
    }
    return compute_metrics(truths, predictions, manifest.classes);
}

EvalReport run_repeated_split(const DatasetManifest& manifest, int runs,
                              std::uint64_t seed, const PipelineConfig& config) {
    if (runs < 1) throw ConfigError("repeated split needs runs >= 1");
    const auto by_class = indices_by_class(manifest);
    check_protocol_manifest(manifest, by_class);

    const auto features = extract_all(manifest, config);
    std::mt19937_64 rng(seed);  // one stream across all runs

    std::vector<std::string> truths, predictions;
    std::vector<double> run_accuracies;
    run_accuracies.reserve(static_cast<std::size_t>(runs));

    for (int run = 0; run < runs; ++run) {
        std::vector<std::size_t> train_idx, test_idx;
        for (const auto& members : by_class) {
            std::vector<std::size_t> order = members;
            seeded_shuffle(order, rng);
            const std::size_t n_train = order.size() / 2;  // odd: one more test clip
            for (std::size_t k = 0; k < order.size(); ++k)
                (k < n_train ? train_idx : test_idx).push_back(order[k]);
        }
        std::sort(train_idx.begin(), train_idx.end());
        std::sort(test_idx.begin(), test_idx.end());

        std::vector<FeatureVector> train_features;
        std::vector<std::string> train_labels;
        train_features.reserve(train_idx.size());
        train_labels.reserve(train_idx.size());
        for (std::size_t i : train_idx) {
            train_features.push_back(features[i]);
            train_labels.push_back(manifest.entries[i].label);
        }
        const auto model = train(train_features, train_labels, config.train, config.kernel);

        std::size_t correct = 0;
        for (std::size_t i : test_idx) {
            const auto& truth = manifest.entries[i].label;
            const auto predicted = predict(model, features[i]).label;
            if (predicted == truth) ++correct;
            truths.push_back(truth);
            predictions.push_back(predicted);
        }
        run_accuracies.push_back(static_cast<double>(correct) /
                                 static_cast<double>(test_idx.size()));
    }

    EvalReport report = compute_metrics(truths, predictions, manifest.classes);
    report.run_accuracies = std::move(run_accuracies);
    return report;
}

}  // namespace potvid
