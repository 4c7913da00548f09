#pragma once

#include <span>

#include "potvid/descriptor.hpp"
#include "potvid/image.hpp"
#include "potvid/manifest.hpp"
#include "potvid/metrics.hpp"
#include "potvid/optflow.hpp"
#include "potvid/pyramid.hpp"
#include "potvid/svm.hpp"
#include "potvid/timeseries.hpp"

namespace potvid {

// Everything the two-stream pipeline needs in one place. The kernel
// defaults to chi-squared with auto gamma, the better-performing choice
// for these histogram-like features; the CLI can override it.
struct PipelineConfig {
    HSParams flow;
    DescriptorSpec motion_descriptor;
    DescriptorSpec appearance_descriptor;
    PyramidConfig pyramid;
    KernelSpec kernel{.kind = KernelKind::Chi2};
    TrainConfig train;
    // Extension, off by default: L1-normalize each stream before
    // concatenation.
    bool l1_normalize_streams = false;
    int flow_threads = 0;
};

// Motion stream: flow_sequence -> flow_to_color -> describe_sequence ->
// PoT encode. Dimension |operators| * C_motion * (2^P - 1).
FeatureVector motion_features(std::span<const RgbFrame> frames,
                              const PipelineConfig& config);
// Bypass: encode an externally computed descriptor series directly.
FeatureVector motion_features(const MultiChannelSeries& series,
                              const PipelineConfig& config);

// Appearance stream: the middle frame's descriptor.
FeatureVector appearance_features(std::span<const RgbFrame> frames,
                                  const PipelineConfig& config);

// Motion vector followed by the appearance vector.
FeatureVector final_representation(std::span<const RgbFrame> frames,
                                   const PipelineConfig& config);

// Representation for one manifest entry: frame directories run the full
// two-stream pipeline; `series.pmtx` encodes the series and takes its
// middle column as appearance; `motion.pmtx;appearance.pmtx` takes the
// second file's middle column instead.
FeatureVector entry_representation(const ManifestEntry& entry,
                                   const PipelineConfig& config);

// Leave-one-out protocol: train on all other videos, predict the held-out
// one, aggregate. Every class needs at least 2 videos.
EvalReport run_loocv(const DatasetManifest& manifest, const PipelineConfig& config);

// Repeated random splits: per class, shuffle and put floor(n/2) clips in
// the training side, the rest (one more for odd n) in the test side. One
// seeded stream drives all runs; accuracy aggregates over every run and
// run_accuracies records each run.
EvalReport run_repeated_split(const DatasetManifest& manifest, int runs,
                              std::uint64_t seed, const PipelineConfig& config);

}  // namespace potvid
