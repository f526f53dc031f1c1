#pragma once

#include "entroflow/surface.hpp"

namespace entroflow {

/// Distance from a point to the closest element (segment or triangle) of s.
double distance_to_surface(const Eigen::VectorXd& point, const Surface& s);

/// Symmetric Hausdorff distance between the vertex set of each surface and
/// the elements of the other. Exact for the discrete geometries.
/// Throws DimensionMismatch when ambient dimensions differ.
double hausdorff_distance(const Surface& a, const Surface& b);

}  // namespace entroflow
