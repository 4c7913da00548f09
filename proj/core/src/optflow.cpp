#include "potvid/optflow.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "potvid/errors.hpp"

namespace potvid {
namespace {

void check_same_size(const GrayFrame& f1, const GrayFrame& f2) {
    if (f1.width != f2.width || f1.height != f2.height)
        throw InputError("frame dimensions differ: " + std::to_string(f1.width) + "x" +
                         std::to_string(f1.height) + " vs " + std::to_string(f2.width) +
                         "x" + std::to_string(f2.height));
}

// Runs fn(y0, y1) over contiguous row chunks. Every chunk writes disjoint
// rows, so the only cross-thread state is the per-row partials the caller
// reduces afterwards in a fixed order.
template <typename Fn>
void for_each_row_chunk(int height, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, height);
    if (threads == 1) {
        fn(0, height);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        int y0 = static_cast<int>(static_cast<long long>(t) * height / threads);
        int y1 = static_cast<int>(static_cast<long long>(t + 1) * height / threads);
        pool.emplace_back([&fn, y0, y1] { fn(y0, y1); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

ImageDerivatives estimate_derivatives(const GrayFrame& f1, const GrayFrame& f2) {
    check_same_size(f1, f2);
    const int w = f1.width, h = f1.height;
    ImageDerivatives d;
    d.width = w;
    d.height = h;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    d.ex.resize(n);
    d.ey.resize(n);
    d.et.resize(n);

    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
    for (int y = 0; y < h; ++y) {
        const int yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xp = std::min(x + 1, w - 1);
            const double a00 = f1.pixels[idx(x, y)], a10 = f1.pixels[idx(xp, y)];
            const double a01 = f1.pixels[idx(x, yp)], a11 = f1.pixels[idx(xp, yp)];
            const double b00 = f2.pixels[idx(x, y)], b10 = f2.pixels[idx(xp, y)];
            const double b01 = f2.pixels[idx(x, yp)], b11 = f2.pixels[idx(xp, yp)];
            const std::size_t i = idx(x, y);
            d.ex[i] = 0.25 * ((a10 - a00) + (a11 - a01) + (b10 - b00) + (b11 - b01));
            d.ey[i] = 0.25 * ((a01 - a00) + (a11 - a10) + (b01 - b00) + (b11 - b10));
            d.et[i] = 0.25 * ((b00 - a00) + (b10 - a10) + (b01 - a01) + (b11 - a11));
        }
    }
    return d;
}

FlowResult horn_schunck(const GrayFrame& f1, const GrayFrame& f2, const HSParams& params,
                        int threads) {
    validate(f1);
    validate(f2);
    check_same_size(f1, f2);
    if (!(params.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (params.max_iters < 1) throw ConfigError("max_iters must be at least 1");
    if (!(params.tol >= 0.0)) throw ConfigError("tol must be nonnegative");

    const int w = f1.width, h = f1.height;
    const std::size_t n = static_cast<std::size_t>(w) * h;
    const ImageDerivatives d = estimate_derivatives(f1, f2);

    std::vector<double> den(n);
    const double a2 = params.alpha * params.alpha;
    for (std::size_t i = 0; i < n; ++i)
        den[i] = a2 + d.ex[i] * d.ex[i] + d.ey[i] * d.ey[i];

    std::vector<double> u(n, 0.0), v(n, 0.0), nu(n), nv(n);
    std::vector<double> row_delta(static_cast<std::size_t>(h));

    auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
    auto sweep = [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            const int ym = std::max(y - 1, 0), yp = std::min(y + 1, h - 1);
            double delta = 0.0;
            for (int x = 0; x < w; ++x) {
                const int xm = std::max(x - 1, 0), xp = std::min(x + 1, w - 1);
                const double ubar =
                    (u[idx(xm, y)] + u[idx(xp, y)] + u[idx(x, ym)] + u[idx(x, yp)]) / 6.0 +
                    (u[idx(xm, ym)] + u[idx(xp, ym)] + u[idx(xm, yp)] + u[idx(xp, yp)]) / 12.0;
                const double vbar =
                    (v[idx(xm, y)] + v[idx(xp, y)] + v[idx(x, ym)] + v[idx(x, yp)]) / 6.0 +
                    (v[idx(xm, ym)] + v[idx(xp, ym)] + v[idx(xm, yp)] + v[idx(xp, yp)]) / 12.0;
                const std::size_t i = idx(x, y);
                const double t = (d.ex[i] * ubar + d.ey[i] * vbar + d.et[i]) / den[i];
                nu[i] = ubar - d.ex[i] * t;
                nv[i] = vbar - d.ey[i] * t;
                delta += std::abs(nu[i] - u[i]) + std::abs(nv[i] - v[i]);
            }
            row_delta[static_cast<std::size_t>(y)] = delta;
        }
    };

    FlowResult out;
    for (int iter = 0; iter < params.max_iters; ++iter) {
        for_each_row_chunk(h, threads, sweep);
        u.swap(nu);
        v.swap(nv);
        double total = 0.0;
        for (double rd : row_delta) total += rd;  // fixed reduction order
        out.iterations = iter + 1;
        out.mean_update = total / (2.0 * static_cast<double>(n));
        if (out.mean_update < params.tol) break;
    }

    out.flow.width = w;
    out.flow.height = h;
    out.flow.u = std::move(u);
    out.flow.v = std::move(v);
    return out;
}

std::vector<FlowField> flow_sequence(std::span<const GrayFrame> frames,
                                     const HSParams& params, int threads) {
    if (frames.size() < 2)
        throw InputError("flow_sequence needs at least 2 frames, got " +
                         std::to_string(frames.size()));
    std::vector<FlowField> fields;
    fields.reserve(frames.size() - 1);
    for (std::size_t k = 0; k + 1 < frames.size(); ++k)
        fields.push_back(horn_schunck(frames[k], frames[k + 1], params, threads).flow);
    return fields;
}

}  // namespace potvid
