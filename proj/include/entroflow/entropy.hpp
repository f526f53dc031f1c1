#pragma once

#include <cstdint>
#include <vector>

#include "entroflow/gaussian.hpp"
#include "entroflow/surface.hpp"

namespace entroflow {

/// Multi-start schedule and convergence controls for the entropy supremum.
/// The default schedule is deterministic: the vertex centroid plus
/// `vertex_starts` evenly indexed vertices, each paired with the scales
/// (diam * s)^2 for s in `scale_factors`. A nonzero seed replaces the even
/// indexing with a seeded uniform vertex sample of the same size.
struct EntropyOptions {
    int vertex_starts = 8;
    std::vector<double> scale_factors = {0.25, 0.5, 1.0};
    double gradient_tol = 1e-8;
    int max_iterations = 200;
    std::uint64_t seed = 0;
};

struct EntropyResult {
    double lambda = 0.0;
    GaussianCenter argmax;
    int starts_tried = 0;
    bool converged = false;
    double best_gradient_norm = 0.0;
};

/// Entropy sup_{x0, t0} F(surface; x0, t0) by multi-start quasi-Newton ascent
/// over (x0, log t0). Deterministic given the options; independent starts may
/// run concurrently and ties are broken by smallest start index.
/// Throws OptimizerDiverged if an iterate becomes non-finite.
EntropyResult entropy(const Surface& s, const EntropyOptions& opts = {});

}  // namespace entroflow
