#pragma once

#include "entroflow/surface.hpp"

namespace entroflow {

/// Resamples a polyline by arc length (n = 1) or runs iterative edge
/// split / collapse / flip passes with tangential relaxation (n = 2) toward
/// the requested edge length. The output satisfies all surface invariants and
/// lies within `target_edge` Hausdorff distance of the input.
/// Throws RemeshFailure if manifoldness cannot be preserved.
Surface remesh(const Surface& s, double target_edge);

}  // namespace entroflow
