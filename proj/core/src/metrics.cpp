#include "potvid/metrics.hpp"

#include <algorithm>

#include "potvid/errors.hpp"

namespace potvid {

EvalReport compute_metrics(std::span<const std::string> truths,
                           std::span<const std::string> predictions,
                           const std::vector<std::string>& classes) {
    if (truths.size() != predictions.size())
        throw InputError("truth/prediction count mismatch: " +
                         std::to_string(truths.size()) + " vs " +
                         std::to_string(predictions.size()));
    if (truths.empty()) throw InputError("compute_metrics needs at least one prediction");
    if (classes.empty()) throw InputError("compute_metrics needs a label set");

    auto index_of = [&classes](const std::string& label) {
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end())
            throw InputError("label '" + label + "' is outside the label set");
        return static_cast<std::size_t>(it - classes.begin());
    };

    EvalReport report;
    report.classes = classes;
    const std::size_t k = classes.size();
    report.confusion.assign(k * k, 0);
    for (std::size_t i = 0; i < truths.size(); ++i)
        ++report.confusion[index_of(truths[i]) * k + index_of(predictions[i])];

    std::size_t trace = 0;
    for (std::size_t c = 0; c < k; ++c) trace += report.confusion[c * k + c];
    report.accuracy = static_cast<double>(trace) / static_cast<double>(truths.size());

    report.precision.resize(k);
    report.recall.resize(k);
    report.f1.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t predicted = 0, actual = 0;
        for (std::size_t o = 0; o < k; ++o) {
            predicted += report.confusion[o * k + c];
            actual += report.confusion[c * k + o];
        }
        const auto tp = static_cast<double>(report.confusion[c * k + c]);
        const double p = predicted ? tp / static_cast<double>(predicted) : 0.0;
        const double r = actual ? tp / static_cast<double>(actual) : 0.0;
        report.precision[c] = p;
        report.recall[c] = r;
        report.f1[c] = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
    }
    return report;
}

}  // namespace potvid
