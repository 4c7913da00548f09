#include "potvid/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

constexpr double kStepEps = 1e-3;  // Platt's minimum meaningful alpha change
constexpr int kSweepCap = 100000;

// Platt-style SMO for one binary subproblem over a shared Gram matrix.
// Maintains the full error cache err_i = u_i - y_i with u = sum - b.
class BinarySmo {
public:
    BinarySmo(const std::vector<double>& gram, const std::vector<double>& y,
              const TrainConfig& config, std::uint64_t seed)
        : gram_(gram),
          y_(y),
          n_(y.size()),
          c_(config.c_reg),
          tol_(config.kkt_tol),
          max_passes_(config.max_passes),
          rng_(seed),
          alpha_(y.size(), 0.0),
          err_(y.size()) {
        for (std::size_t i = 0; i < n_; ++i) err_[i] = -y_[i];
    }

    void solve() {
        std::vector<std::size_t> order(n_);
        for (std::size_t i = 0; i < n_; ++i) order[i] = i;
        bool examine_all = true;
        int zero_full = 0;
        for (int sweep = 0; sweep < kSweepCap; ++sweep) {
            shuffle(order);
            int changed = 0;
            for (std::size_t i : order) {
                if (!examine_all && !non_bound(i)) continue;
                changed += examine(i, order);
            }
            if (examine_all) {
                if (changed == 0) {
                    if (++zero_full >= max_passes_) break;
                } else {
                    zero_full = 0;
                    examine_all = false;
                }
            } else if (changed == 0) {
                examine_all = true;
            }
        }
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double threshold() const { return b_; }

private:
    double k(std::size_t i, std::size_t j) const { return gram_[i * n_ + j]; }
    bool non_bound(std::size_t i) const { return alpha_[i] > 0.0 && alpha_[i] < c_; }

    // Fisher-Yates with explicit draws so every standard library shuffles
    // identically; modulo bias is irrelevant here.
    void shuffle(std::vector<std::size_t>& order) {
        for (std::size_t i = n_ - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng_() % (i + 1));
            std::swap(order[i], order[j]);
        }
    }

    int examine(std::size_t i2, const std::vector<std::size_t>& order) {
        const double y2 = y_[i2], alph2 = alpha_[i2], e2 = err_[i2];
        const double r2 = e2 * y2;
        if (!((r2 < -tol_ && alph2 < c_) || (r2 > tol_ && alph2 > 0.0))) return 0;

        // second-choice heuristic: largest |E1 - E2| among non-bound points
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!non_bound(i)) continue;
            const double gap = std::abs(err_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2)) return 1;

        const std::size_t start = static_cast<std::size_t>(rng_() % n_);
        for (std::size_t t = 0; t < n_; ++t) {
            const std::size_t i1 = order[(start + t) % n_];
            if (non_bound(i1) && take_step(i1, i2)) return 1;
        }
        const std::size_t start2 = static_cast<std::size_t>(rng_() % n_);
        for (std::size_t t = 0; t < n_; ++t) {
            const std::size_t i1 = order[(start2 + t) % n_];
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double alph1 = alpha_[i1], alph2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = err_[i1], e2 = err_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, alph2 - alph1);
            hi = std::min(c_, c_ + alph2 - alph1);
        } else {
            lo = std::max(0.0, alph1 + alph2 - c_);
            hi = std::min(c_, alph1 + alph2);
        }
        if (lo >= hi) return false;

        const double k11 = k(i1, i1), k12 = k(i1, i2), k22 = k(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;
        double a2;
        if (eta > 0.0) {
            a2 = alph2 + y2 * (e1 - e2) / eta;
            a2 = std::clamp(a2, lo, hi);
        } else {
            // objective at both clip ends (Platt's degenerate-curvature case)
            const double f1 = y1 * (e1 + b_) - alph1 * k11 - s * alph2 * k12;
            const double f2 = y2 * (e2 + b_) - s * alph1 * k12 - alph2 * k22;
            const double l1 = alph1 + s * (alph2 - lo);
            const double h1 = alph1 + s * (alph2 - hi);
            const double lobj = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double hobj = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (lobj < hobj - kStepEps)
                a2 = lo;
            else if (lobj > hobj + kStepEps)
                a2 = hi;
            else
                a2 = alph2;
        }
        if (std::abs(a2 - alph2) < kStepEps * (a2 + alph2 + kStepEps)) return false;
        const double a1 = alph1 + s * (alph2 - a2);

        const double d1 = a1 - alph1, d2 = a2 - alph2;
        const double b1 = e1 + y1 * d1 * k11 + y2 * d2 * k12 + b_;
        const double b2 = e2 + y1 * d1 * k12 + y2 * d2 * k22 + b_;
        double b_new;
        if (a1 > 0.0 && a1 < c_)
            b_new = b1;
        else if (a2 > 0.0 && a2 < c_)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);
        const double db = b_new - b_;

        for (std::size_t i = 0; i < n_; ++i)
            err_[i] += y1 * d1 * k(i1, i) + y2 * d2 * k(i2, i) - db;
        alpha_[i1] = a1;
        alpha_[i2] = a2;
        b_ = b_new;
        return true;
    }

    const std::vector<double>& gram_;
    const std::vector<double>& y_;
    std::size_t n_;
    double c_;
    double tol_;
    int max_passes_;
    std::mt19937_64 rng_;
    std::vector<double> alpha_;
    std::vector<double> err_;
    double b_ = 0.0;
};

void check_kernel(const KernelSpec& spec) {
    if (spec.kind == KernelKind::Chi2 && spec.gamma && !(*spec.gamma > 0.0))
        throw ConfigError("chi2 gamma must be positive");
}

double resolved_gamma(const KernelSpec& spec) {
    if (!spec.gamma)
        throw ConfigError("chi2 gamma is unresolved; train() resolves auto gamma");
    return *spec.gamma;
}

}  // namespace

KernelKind kernel_kind_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::Linear;
    if (name == "chi2") return KernelKind::Chi2;
    throw ConfigError("unknown kernel '" + name + "' (expected linear or chi2)");
}

std::string kernel_kind_name(KernelKind kind) {
    return kind == KernelKind::Linear ? "linear" : "chi2";
}

double chi2_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InputError("chi2 distance dimension mismatch: " + std::to_string(x.size()) +
                         " vs " + std::to_string(y.size()));
    double sum = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (x[j] < 0.0 || y[j] < 0.0)
            throw InputError("chi2 distance requires nonnegative entries, found " +
                             std::to_string(x[j] < 0.0 ? x[j] : y[j]) + " at index " +
                             std::to_string(j));
        const double den = x[j] + y[j];
        if (den > 0.0) {
            const double diff = x[j] - y[j];
            sum += diff * diff / den;
        }
    }
    return sum;
}

double kernel_eval(std::span<const double> x, std::span<const double> y,
                   const KernelSpec& spec) {
    check_kernel(spec);
    if (spec.kind == KernelKind::Linear) {
        if (x.size() != y.size())
            throw InputError("kernel dimension mismatch: " + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()));
        double sum = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) sum += x[j] * y[j];
        return sum;
    }
    return std::exp(-resolved_gamma(spec) * chi2_distance(x, y));
}

SvmModel train(const std::vector<std::vector<double>>& features,
               const std::vector<std::string>& labels, const TrainConfig& config,
               const KernelSpec& kernel) {
    if (features.empty()) throw InputError("train needs at least one example");
    if (features.size() != labels.size())
        throw InputError("feature/label count mismatch: " +
                         std::to_string(features.size()) + " vs " +
                         std::to_string(labels.size()));
    const std::size_t n = features.size();
    const std::size_t dim = features[0].size();
    if (dim == 0) throw InputError("features must have at least one dimension");
    for (std::size_t i = 1; i < n; ++i)
        if (features[i].size() != dim)
            throw InputError("feature " + std::to_string(i) + " has dimension " +
                             std::to_string(features[i].size()) + ", expected " +
                             std::to_string(dim));
    if (!(config.c_reg > 0.0)) throw ConfigError("c_reg must be positive");
    if (!(config.kkt_tol > 0.0)) throw ConfigError("kkt_tol must be positive");
    if (config.max_passes < 1) throw ConfigError("max_passes must be at least 1");
    check_kernel(kernel);

    SvmModel model;
    model.dim = dim;
    for (const auto& label : labels)
        if (std::find(model.classes.begin(), model.classes.end(), label) ==
            model.classes.end())
            model.classes.push_back(label);
    if (model.classes.size() < 2)
        throw InputError("train needs at least 2 distinct labels, got " +
                         std::to_string(model.classes.size()));

    model.kernel = kernel;
    if (kernel.kind == KernelKind::Chi2 && !kernel.gamma) {
        double mean = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                mean += chi2_distance(features[i], features[j]);
                ++pairs;
            }
        mean /= static_cast<double>(pairs);
        model.kernel.gamma = 1.0 / std::max(mean, 1e-12);
    }

    std::vector<double> gram(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(features[i], features[j], model.kernel);
            gram[i * n + j] = v;
            gram[j * n + i] = v;
        }

    std::vector<char> used(n, 0);
    std::vector<std::vector<double>> alphas(model.classes.size());
    std::vector<double> thresholds(model.classes.size());
    std::vector<std::vector<double>> ys(model.classes.size());
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = labels[i] == model.classes[c] ? 1.0 : -1.0;
        BinarySmo smo(gram, y, config,
                      config.seed + static_cast<std::uint64_t>(c) * 0x9E3779B97F4A7C15ull);
        smo.solve();
        alphas[c] = smo.alpha();
        thresholds[c] = smo.threshold();
        ys[c] = std::move(y);
        for (std::size_t i = 0; i < n; ++i)
            if (alphas[c][i] > 0.0) used[i] = 1;
    }

    std::vector<std::uint32_t> stored(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (used[i]) {
            stored[i] = static_cast<std::uint32_t>(model.vectors.size());
            model.vectors.push_back(features[i]);
        }

    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        BinaryModel bin;
        for (std::size_t i = 0; i < n; ++i)
            if (alphas[c][i] > 0.0) {
                bin.sv_indices.push_back(stored[i]);
                bin.coeffs.push_back(alphas[c][i] * ys[c][i]);
            }
        bin.bias = -thresholds[c];  // decision value is sum + bias
        model.binaries.push_back(std::move(bin));
    }
    return model;
}

Prediction predict(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.dim)
        throw InputError("probe dimension " + std::to_string(x.size()) +
                         " does not match model dimension " + std::to_string(model.dim));
    Prediction out;
    out.scores.resize(model.binaries.size());
    for (std::size_t c = 0; c < model.binaries.size(); ++c) {
        const BinaryModel& bin = model.binaries[c];
        double score = bin.bias;
        for (std::size_t k = 0; k < bin.sv_indices.size(); ++k)
            score += bin.coeffs[k] *
                     kernel_eval(model.vectors[bin.sv_indices[k]], x, model.kernel);
        out.scores[c] = score;
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < out.scores.size(); ++c)
        if (out.scores[c] > out.scores[best]) best = c;
    out.label = model.classes[best];
    return out;
}

}  // namespace potvid
