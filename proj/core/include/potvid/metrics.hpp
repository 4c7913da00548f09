#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace potvid {

// Classification quality summary. The confusion matrix is row-major,
// indexed (true class, predicted class) in `classes` order; accuracy is
// exactly trace/total. run_accuracies is filled by the repeated-split
// protocol and left empty elsewhere.
struct EvalReport {
    std::vector<std::string> classes;
    std::vector<std::size_t> confusion;
    double accuracy = 0.0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;
    std::vector<double> run_accuracies;

    std::size_t confusion_at(std::size_t truth, std::size_t predicted) const {
        return confusion[truth * classes.size() + predicted];
    }
};

// Precision, recall, and F1 = 2PR/(P+R) are 0 whenever their denominator
// is 0. Labels outside `classes` are rejected.
EvalReport compute_metrics(std::span<const std::string> truths,
                           std::span<const std::string> predictions,
                           const std::vector<std::string>& classes);

}  // namespace potvid
