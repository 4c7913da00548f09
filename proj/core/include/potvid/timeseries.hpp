#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace potvid {

// Inclusive time window [start, end].
struct Window {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t count() const { return end - start + 1; }
};

// Immutable set of C real-valued channels sampled at T time steps.
// Values are held as doubles regardless of the precision they arrived in.
class MultiChannelSeries {
public:
    // values is channel-major: values[c * length + t]. Throws InputError on
    // empty dimensions, size mismatch, or non-finite values.
    MultiChannelSeries(std::size_t channels, std::size_t length,
                       std::vector<double> values);

    // Builds from a time-major buffer (row = time step, col = channel),
    // the layout used by the PMTX descriptor matrix file.
    static MultiChannelSeries from_time_major(std::size_t rows, std::size_t cols,
                                              std::span<const double> row_major);

    std::size_t channels() const { return channels_; }
    std::size_t length() const { return length_; }

    double at(std::size_t channel, std::size_t t) const {
        return values_[channel * length_ + t];
    }

    std::span<const double> channel(std::size_t c) const {
        return {values_.data() + c * length_, length_};
    }

    std::span<const double> values() const { return values_; }

private:
    std::size_t channels_;
    std::size_t length_;
    std::vector<double> values_;
};

enum class PoolOp { Max, Sum, GradPos, GradNeg, Var };

// Parses one of "max", "sum", "grad_pos", "grad_neg", "var".
// Throws ConfigError on anything else.
PoolOp pool_op_from_name(std::string_view name);
std::string_view pool_op_name(PoolOp op);

// Parses a comma-separated operator list, e.g. "max,sum,var".
std::vector<PoolOp> pool_ops_from_list(std::string_view list);

// max, sum, grad_pos, grad_neg, var.
const std::vector<PoolOp>& default_pool_ops();

// Window pooling operators. All throw InputError for an out-of-range
// channel or window. A single-sample window yields max = sum = the value
// and zero for the gradient sums and the variance.
double pool_max(const MultiChannelSeries& series, std::size_t channel, Window w);
double pool_sum(const MultiChannelSeries& series, std::size_t channel, Window w);

// Sum of positive steps f(t) - f(t-1) for t in [start+1, end].
double pool_grad_pos(const MultiChannelSeries& series, std::size_t channel, Window w);

// Sum of drop magnitudes f(t-1) - f(t) for t in [start+1, end]; never negative.
double pool_grad_neg(const MultiChannelSeries& series, std::size_t channel, Window w);

// Population variance over the window (denominator = sample count).
double pool_var(const MultiChannelSeries& series, std::size_t channel, Window w);

double pool(const MultiChannelSeries& series, PoolOp op, std::size_t channel, Window w);

// Pools every channel with every operator. Layout is channel-major: for
// channel 0..C-1, one value per operator in the given order.
std::vector<double> pool_all(const MultiChannelSeries& series, Window w,
                             std::span<const PoolOp> ops);

}  // namespace potvid
