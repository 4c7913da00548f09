#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace potvid {

enum class KernelKind { Linear, Chi2 };

// gamma applies to chi2 only; leaving it unset means "auto", resolved at
// training time to 1 / mean pairwise chi-squared distance (mean floored
// at 1e-12). Models always carry a resolved value.
struct KernelSpec {
    KernelKind kind = KernelKind::Linear;
    std::optional<double> gamma;
};

KernelKind kernel_kind_from_name(const std::string& name);
std::string kernel_kind_name(KernelKind kind);

// sum_j (x_j - y_j)^2 / (x_j + y_j), terms with x_j + y_j = 0 contribute 0.
// Negative entries are a wiring bug upstream and are rejected.
double chi2_distance(std::span<const double> x, std::span<const double> y);

// linear: dot product; chi2: exp(-gamma * chi2_distance(x, y)).
double kernel_eval(std::span<const double> x, std::span<const double> y,
                   const KernelSpec& spec);

struct TrainConfig {
    double c_reg = 1.0;
    double kkt_tol = 1e-3;
    int max_passes = 10;  // consecutive clean sweeps before stopping
    std::uint64_t seed = 0;
};

// One-vs-rest binary machine. Coefficients are alpha_i * y_i for the
// retained support vectors; the decision value is
// sum_i coeff_i * K(sv_i, x) + bias.
struct BinaryModel {
    std::vector<std::uint32_t> sv_indices;  // into SvmModel::vectors
    std::vector<double> coeffs;
    double bias = 0.0;
};

struct SvmModel {
    std::vector<std::string> classes;  // first-appearance order
    KernelSpec kernel;                 // gamma resolved
    std::size_t dim = 0;
    std::vector<std::vector<double>> vectors;  // union of support vectors
    std::vector<BinaryModel> binaries;         // one per class
};

// SMO over a precomputed Gram matrix; deterministic for a fixed seed.
SvmModel train(const std::vector<std::vector<double>>& features,
               const std::vector<std::string>& labels, const TrainConfig& config = {},
               const KernelSpec& kernel = {});

struct Prediction {
    std::string label;
    std::vector<double> scores;  // aligned with model.classes
};

// argmax of the per-class decision values; ties go to the lowest class
// position in model.classes.
Prediction predict(const SvmModel& model, std::span<const double> x);

// PSVM model container, all little-endian:
//   "PSVM", u32 version = 1, u32 kernel kind (0 linear, 1 chi2),
//   f64 gamma (0 when linear), u32 dim, u32 class count,
//   per class: u32 name length, name bytes,
//   u32 stored vector count,
//   per class: u32 sv count, sv * (u32 vector index, f64 coeff), f64 bias,
//   vectors as float32, row-major.
// Support vectors are stored at float32 precision; save(load(p)) is
// byte-identical to p.
void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace potvid
