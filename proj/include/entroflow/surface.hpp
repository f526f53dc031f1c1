#pragma once

#include <vector>

#include <Eigen/Core>

#include "entroflow/errors.hpp"

namespace entroflow {

/// Relative degeneracy tolerance, measured against the surface diameter.
inline constexpr double kDegeneracyTol = 1e-12;

/// A discrete closed hypersurface: a closed polyline in R^2 (n = 1) or an
/// oriented triangle mesh in R^3 (n = 2).
///
/// For n = 1 the connectivity is the implicit cyclic order of the vertex rows
/// and `faces` stays empty. For n = 2 `faces` holds oriented vertex-index
/// triples; meshes with boundary (edges on a single triangle) are permitted so
/// that planar patches can be analyzed, but flow and volume operations require
/// a closed mesh.
struct Surface {
    int dim = 1;             // intrinsic dimension n, 1 or 2
    Eigen::MatrixXd vertices;  // #V x (n+1)
    Eigen::MatrixXi faces;     // #F x 3 for n = 2, 0 x 3 for n = 1
    bool outward_oriented = true;  // normals follow the outward convention

    int ambient_dim() const { return dim + 1; }
    Eigen::Index vertex_count() const { return vertices.rows(); }
    Eigen::Index element_count() const {
        return dim == 1 ? vertices.rows() : faces.rows();
    }
};

/// Bounding-box diagonal; the length scale used for tolerances and optimizer
/// start scales.
double diameter(const Surface& s);

/// Total length (n = 1) or area (n = 2).
double total_measure(const Surface& s);

/// Signed enclosed volume: shoelace area for polygons, divergence-theorem sum
/// for triangle meshes. Positive for outward orientation.
double enclosed_volume(const Surface& s);

/// Vertex centroid (unweighted).
Eigen::VectorXd centroid(const Surface& s);

/// Minimum edge length over all elements.
double min_edge_length(const Surface& s);

/// Mean edge length over all elements.
double mean_edge_length(const Surface& s);

/// True when the mesh has no boundary edges (always true for polygons).
bool is_closed(const Surface& s);

/// Per-vertex boundary flags (all false for polygons and closed meshes).
std::vector<bool> boundary_vertices(const Surface& s);

/// Checks all structural invariants: vertex count, non-degenerate elements,
/// manifold connectivity with consistent orientation, and (for polygons)
/// simplicity. Throws DegenerateElement / Error with a description on failure.
/// `require_closed` additionally rejects meshes with boundary.
void validate(const Surface& s, bool require_closed = true);

/// Applies x -> dilation * (rotation * x) + translation to every vertex.
/// The rotation must be orthogonal to 1e-12 and the dilation positive.
Surface transform(const Surface& s, const Eigen::MatrixXd& rotation,
                  const Eigen::VectorXd& translation, double dilation);

}  // namespace entroflow
