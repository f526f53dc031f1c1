#pragma once

#include <Eigen/Core>

#include "entroflow/surface.hpp"

namespace entroflow {

/// Per-vertex curvature data.
///
/// Sign convention: H = div(nu) with nu the outward unit normal, so a sphere
/// of radius R has H = n/R > 0.
struct CurvatureField {
    Eigen::VectorXd mean_curvature;       // H, 1/length
    Eigen::MatrixXd normal;               // unit outward normals, #V x (n+1)
    Eigen::VectorXd vertex_area;          // lumped measure, sums to the total
    Eigen::VectorXd second_form_norm_sq;  // |A|^2 = kappa1^2 + kappa2^2
    // Quadric-fit mean curvature (kappa1 + kappa2); same estimator family as
    // second_form_norm_sq, so |A|^2 >= H_fit^2 / n holds identically.
    Eigen::VectorXd fit_mean_curvature;
};

/// Discrete curvature of a polyline (circumscribed-circle formula with
/// arc-length lumped weights) or a triangle mesh (cotangent Laplacian with
/// mixed-Voronoi areas; |A|^2 from two-ring quadric fits).
CurvatureField compute_curvature(const Surface& s);

/// H, normals, and areas only; second_form fields are left empty. Identical
/// values to compute_curvature for the fields it fills, at a fraction of the
/// cost (no quadric fits). Used in stepping loops.
CurvatureField compute_curvature_basic(const Surface& s);

}  // namespace entroflow
