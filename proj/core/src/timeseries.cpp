#include "potvid/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "potvid/errors.hpp"

namespace potvid {

MultiChannelSeries::MultiChannelSeries(std::size_t channels, std::size_t length,
                                       std::vector<double> values)
    : channels_(channels), length_(length), values_(std::move(values)) {
    if (channels_ == 0 || length_ == 0)
        throw InputError("series needs at least one channel and one time step");
    if (values_.size() != channels_ * length_)
        throw InputError("series value count " + std::to_string(values_.size()) +
                         " does not match " + std::to_string(channels_) + " x " +
                         std::to_string(length_));
    for (double v : values_)
        if (!std::isfinite(v)) throw InputError("series values must be finite");
}

MultiChannelSeries MultiChannelSeries::from_time_major(std::size_t rows, std::size_t cols,
                                                       std::span<const double> row_major) {
    if (rows == 0 || cols == 0)
        throw InputError("series needs at least one channel and one time step");
    if (row_major.size() != rows * cols)
        throw InputError("time-major buffer size does not match rows x cols");
    std::vector<double> values(rows * cols);
    for (std::size_t t = 0; t < rows; ++t)
        for (std::size_t c = 0; c < cols; ++c)
            values[c * rows + t] = row_major[t * cols + c];
    return {cols, rows, std::move(values)};
}

namespace {

void check_domain(const MultiChannelSeries& s, std::size_t channel, Window w) {
    if (channel >= s.channels())
        throw InputError("channel " + std::to_string(channel) + " out of range (C = " +
                         std::to_string(s.channels()) + ")");
    if (w.start > w.end || w.end >= s.length())
        throw InputError("window [" + std::to_string(w.start) + ", " + std::to_string(w.end) +
                         "] invalid for series of length " + std::to_string(s.length()));
}

}  // namespace

double pool_max(const MultiChannelSeries& s, std::size_t channel, Window w) {
    check_domain(s, channel, w);
    double m = s.at(channel, w.start);
    for (std::size_t t = w.start + 1; t <= w.end; ++t) m = std::max(m, s.at(channel, t));
    return m;
}

double pool_sum(const MultiChannelSeries& s, std::size_t channel, Window w) {
    check_domain(s, channel, w);
    double sum = 0.0;
    for (std::size_t t = w.start; t <= w.end; ++t) sum += s.at(channel, t);
    return sum;
}

double pool_grad_pos(const MultiChannelSeries& s, std::size_t channel, Window w) {
    check_domain(s, channel, w);
    double sum = 0.0;
    for (std::size_t t = w.start + 1; t <= w.end; ++t) {
        double d = s.at(channel, t) - s.at(channel, t - 1);
        if (d > 0) sum += d;
    }
    return sum;
}

double pool_grad_neg(const MultiChannelSeries& s, std::size_t channel, Window w) {
    check_domain(s, channel, w);
    double sum = 0.0;
    for (std::size_t t = w.start + 1; t <= w.end; ++t) {
        double d = s.at(channel, t) - s.at(channel, t - 1);
        if (d < 0) sum -= d;
    }
    return sum;
}

double pool_var(const MultiChannelSeries& s, std::size_t channel, Window w) {
    check_domain(s, channel, w);
    const double n = static_cast<double>(w.count());
    double mean = 0.0;
    for (std::size_t t = w.start; t <= w.end; ++t) mean += s.at(channel, t);
    mean /= n;
    double sum = 0.0;
    for (std::size_t t = w.start; t <= w.end; ++t) {
        double d = s.at(channel, t) - mean;
        sum += d * d;
    }
    return sum / n;
}

double pool(const MultiChannelSeries& s, PoolOp op, std::size_t channel, Window w) {
    switch (op) {
        case PoolOp::Max: return pool_max(s, channel, w);
        case PoolOp::Sum: return pool_sum(s, channel, w);
        case PoolOp::GradPos: return pool_grad_pos(s, channel, w);
        case PoolOp::GradNeg: return pool_grad_neg(s, channel, w);
        case PoolOp::Var: return pool_var(s, channel, w);
    }
    throw ConfigError("unknown pooling operator tag");
}

std::vector<double> pool_all(const MultiChannelSeries& s, Window w,
                             std::span<const PoolOp> ops) {
    if (ops.empty()) throw ConfigError("operator list must not be empty");
    check_domain(s, 0, w);
    std::vector<double> out;
    out.reserve(ops.size() * s.channels());
    for (std::size_t c = 0; c < s.channels(); ++c)
        for (PoolOp op : ops) out.push_back(pool(s, op, c, w));
    return out;
}

PoolOp pool_op_from_name(std::string_view name) {
    if (name == "max") return PoolOp::Max;
    if (name == "sum") return PoolOp::Sum;
    if (name == "grad_pos") return PoolOp::GradPos;
    if (name == "grad_neg") return PoolOp::GradNeg;
    if (name == "var") return PoolOp::Var;
    throw ConfigError("unknown pooling operator '" + std::string(name) +
                      "' (expected max, sum, grad_pos, grad_neg or var)");
}

std::string_view pool_op_name(PoolOp op) {
    switch (op) {
        case PoolOp::Max: return "max";
        case PoolOp::Sum: return "sum";
        case PoolOp::GradPos: return "grad_pos";
        case PoolOp::GradNeg: return "grad_neg";
        case PoolOp::Var: return "var";
    }
    return "?";
}

std::vector<PoolOp> pool_ops_from_list(std::string_view list) {
    std::vector<PoolOp> ops;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        std::size_t comma = list.find(',', pos);
        std::string_view item = list.substr(pos, comma == std::string_view::npos
                                                     ? std::string_view::npos
                                                     : comma - pos);
        ops.push_back(pool_op_from_name(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    if (ops.empty()) throw ConfigError("operator list must not be empty");
    return ops;
}

const std::vector<PoolOp>& default_pool_ops() {
    static const std::vector<PoolOp> ops{PoolOp::Max, PoolOp::Sum, PoolOp::GradPos,
                                         PoolOp::GradNeg, PoolOp::Var};
    return ops;
}

}  // namespace potvid
