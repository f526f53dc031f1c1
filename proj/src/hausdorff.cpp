#include "entroflow/hausdorff.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "entroflow/parallel.hpp"

namespace entroflow {

namespace {

double point_segment_dist_sq(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                             const Eigen::Vector2d& b) {
    const Eigen::Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (p - (a + t * ab)).squaredNorm();
}

double point_triangle_dist_sq(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
    // Ericson, Real-Time Collision Detection, 5.1.5.
    const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return ap.squaredNorm();

    const Eigen::Vector3d bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return bp.squaredNorm();

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        const double t = d1 / (d1 - d3);
        return (p - (a + t * ab)).squaredNorm();
    }

    const Eigen::Vector3d cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return cp.squaredNorm();

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        const double t = d2 / (d2 - d6);
        return (p - (a + t * ac)).squaredNorm();
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        const double t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return (p - (b + t * (c - b))).squaredNorm();
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return (p - (a + v * ab + w * ac)).squaredNorm();
}

double point_to_surface_sq(const Eigen::VectorXd& p, const Surface& s) {
    double best = std::numeric_limits<double>::infinity();
    if (s.dim == 1) {
        const Eigen::Vector2d q = p;
        const Eigen::Index v = s.vertices.rows();
        for (Eigen::Index i = 0; i < v; ++i)
            best = std::min(best, point_segment_dist_sq(q, s.vertices.row(i),
                                                        s.vertices.row((i + 1) % v)));
    } else {
        const Eigen::Vector3d q = p;
        for (Eigen::Index f = 0; f < s.faces.rows(); ++f)
            best = std::min(best,
                            point_triangle_dist_sq(q, s.vertices.row(s.faces(f, 0)),
                                                   s.vertices.row(s.faces(f, 1)),
                                                   s.vertices.row(s.faces(f, 2))));
    }
    return best;
}

double one_sided_sq(const Surface& from, const Surface& to) {
    const Eigen::Index v = from.vertices.rows();
    std::vector<double> d(static_cast<size_t>(v));
    parallel_for(static_cast<size_t>(v), [&](size_t i) {
        d[i] = point_to_surface_sq(from.vertices.row(static_cast<Eigen::Index>(i)), to);
    });
    return *std::max_element(d.begin(), d.end());
}

}  // namespace

double distance_to_surface(const Eigen::VectorXd& point, const Surface& s) {
    if (point.size() != s.ambient_dim())
        throw DimensionMismatch("point and surface ambient dimensions differ");
    return std::sqrt(point_to_surface_sq(point, s));
}

double hausdorff_distance(const Surface& a, const Surface& b) {
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("surfaces live in different ambient dimensions");
    return std::sqrt(std::max(one_sided_sq(a, b), one_sided_sq(b, a)));
}

}  // namespace entroflow
