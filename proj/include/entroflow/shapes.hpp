#pragma once

#include <Eigen/Core>

#include "entroflow/surface.hpp"

namespace entroflow {

/// Regular polygon with `segments` vertices inscribed in the circle of the
/// given radius and center.
Surface make_circle(double radius, int segments,
                    const Eigen::Vector2d& center = Eigen::Vector2d::Zero());

/// Icosphere: icosahedron subdivided `subdivisions` times (0..8), vertices
/// projected to the sphere. Vertex count is 10 * 4^s + 2.
Surface make_icosphere(double radius, int subdivisions,
                       const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

/// Icosphere mapped onto the axis-aligned ellipsoid with the given semi-axes.
Surface make_ellipsoid(const Eigen::Vector3d& semi_axes, int subdivisions,
                       const Eigen::Vector3d& center = Eigen::Vector3d::Zero());

/// Flat hexagonally-triangulated disk of the given radius in the z = 0 plane,
/// with `rings` concentric vertex rings (edge length ~ radius / rings).
/// The result has a boundary; it is valid but not closed.
Surface make_planar_disk(double radius, int rings);

/// Graph z = amplitude * exp(-(x^2 + y^2) / 2) over a planar disk.
Surface make_gaussian_graph(double radius, int rings, double amplitude);

}  // namespace entroflow
