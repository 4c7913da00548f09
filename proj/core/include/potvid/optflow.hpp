#pragma once

#include <span>
#include <vector>

#include "potvid/image.hpp"

namespace potvid {

// Per-pixel displacement field; u is horizontal, v is vertical, in pixels.
struct FlowField {
    int width = 0;
    int height = 0;
    std::vector<double> u;
    std::vector<double> v;
};

struct HSParams {
    double alpha = 1.0;   // smoothness weight, > 0
    int max_iters = 200;  // >= 1
    double tol = 1e-4;    // mean absolute update threshold; 0 disables
};

// Spatial and temporal brightness derivatives, same dimensions as the
// input frames. Estimated with the 2x2x2 cube average of forward
// differences; borders replicate edge pixels.
struct ImageDerivatives {
    int width = 0;
    int height = 0;
    std::vector<double> ex;
    std::vector<double> ey;
    std::vector<double> et;
};

ImageDerivatives estimate_derivatives(const GrayFrame& f1, const GrayFrame& f2);

struct FlowResult {
    FlowField flow;
    int iterations = 0;        // iterations actually run
    double mean_update = 0.0;  // mean absolute update of the last iteration
};

// Iterative solver: u <- ubar - Ex (Ex ubar + Ey vbar + Et) / (a^2 + Ex^2 + Ey^2)
// and symmetrically for v, where ubar/vbar are the weighted 8-neighbor
// averages (sides 1/6, diagonals 1/12, edges replicated). Updates are
// simultaneous (Jacobi), so the result does not depend on traversal order.
// Stops after max_iters or once the mean absolute update over all pixels
// and both components drops below tol. threads = 0 picks the hardware
// count; any thread count produces bit-identical results.
FlowResult horn_schunck(const GrayFrame& f1, const GrayFrame& f2,
                        const HSParams& params = {}, int threads = 0);

// One field per consecutive frame pair: N frames yield N-1 fields.
std::vector<FlowField> flow_sequence(std::span<const GrayFrame> frames,
                                     const HSParams& params = {}, int threads = 0);

}  // namespace potvid
