#include "entroflow/surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include <Eigen/Dense>

namespace entroflow {

namespace {

// Squared distance between segments [p1,p2] and [q1,q2] in the plane.
double segment_segment_dist_sq(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                               const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    const Eigen::Vector2d d1 = p2 - p1;
    const Eigen::Vector2d d2 = q2 - q1;
    const Eigen::Vector2d r = p1 - q1;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    double s = 0.0, t = 0.0;
    if (a > 0.0) {
        const double b = d1.dot(d2);
        const double c = d1.dot(r);
        const double denom = a * e - b * b;
        if (denom > 0.0) s = std::clamp((b * f - c * e) / denom, 0.0, 1.0);
        t = e > 0.0 ? std::clamp((b * s + f) / e, 0.0, 1.0) : 0.0;
        s = std::clamp(e > 0.0 ? (b * t - c) / a : -c / a, 0.0, 1.0);
    } else if (e > 0.0) {
        t = std::clamp(f / e, 0.0, 1.0);
    }
    return (p1 + s * d1 - (q1 + t * d2)).squaredNorm();
}

bool segments_properly_intersect(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2,
                                 const Eigen::Vector2d& q1, const Eigen::Vector2d& q2) {
    auto orient = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                     const Eigen::Vector2d& c) {
        return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
    };
    const double o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
    const double o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
    return o1 * o2 < 0.0 && o3 * o4 < 0.0;
}

}  // namespace

double diameter(const Surface& s) {
    if (s.vertices.rows() == 0) return 0.0;
    const Eigen::VectorXd lo = s.vertices.colwise().minCoeff();
    const Eigen::VectorXd hi = s.vertices.colwise().maxCoeff();
    return (hi - lo).norm();
}

double total_measure(const Surface& s) {
    double total = 0.0;
    if (s.dim == 1) {
        const Eigen::Index v = s.vertices.rows();
        for (Eigen::Index i = 0; i < v; ++i)
            total += (s.vertices.row((i + 1) % v) - s.vertices.row(i)).norm();
    } else {
        for (Eigen::Index f = 0; f < s.faces.rows(); ++f) {
            const Eigen::Vector3d a = s.vertices.row(s.faces(f, 0));
            const Eigen::Vector3d b = s.vertices.row(s.faces(f, 1));
            const Eigen::Vector3d c = s.vertices.row(s.faces(f, 2));
            total += 0.5 * (b - a).cross(c - a).norm();
        }
    }
    return total;
}

double enclosed_volume(const Surface& s) {
    if (s.dim == 1) {
        double area2 = 0.0;  // shoelace
        const Eigen::Index v = s.vertices.rows();
        for (Eigen::Index i = 0; i < v; ++i) {
            const auto p = s.vertices.row(i);
            const auto q = s.vertices.row((i + 1) % v);
            area2 += p.x() * q.y() - q.x() * p.y();
        }
        return 0.5 * area2;
    }
    double vol6 = 0.0;
    for (Eigen::Index f = 0; f < s.faces.rows(); ++f) {
        const Eigen::Vector3d a = s.vertices.row(s.faces(f, 0));
        const Eigen::Vector3d b = s.vertices.row(s.faces(f, 1));
        const Eigen::Vector3d c = s.vertices.row(s.faces(f, 2));
        vol6 += a.cross(b).dot(c);
    }
    return vol6 / 6.0;
}

Eigen::VectorXd centroid(const Surface& s) {
    return s.vertices.colwise().mean().transpose();
}

double min_edge_length(const Surface& s) {
    double m = std::numeric_limits<double>::infinity();
    if (s.dim == 1) {
        const Eigen::Index v = s.vertices.rows();
        for (Eigen::Index i = 0; i < v; ++i)
            m = std::min(m, (s.vertices.row((i + 1) % v) - s.vertices.row(i)).norm());
    } else {
        for (Eigen::Index f = 0; f < s.faces.rows(); ++f)
            for (int k = 0; k < 3; ++k)
                m = std::min(m, (s.vertices.row(s.faces(f, k)) -
                                 s.vertices.row(s.faces(f, (k + 1) % 3)))
                                    .norm());
    }
    return m;
}

double mean_edge_length(const Surface& s) {
    double total = 0.0;
    long count = 0;
    if (s.dim == 1) {
        const Eigen::Index v = s.vertices.rows();
        for (Eigen::Index i = 0; i < v; ++i, ++count)
            total += (s.vertices.row((i + 1) % v) - s.vertices.row(i)).norm();
    } else {
        // Each interior edge is visited twice; the mean is unaffected.
        for (Eigen::Index f = 0; f < s.faces.rows(); ++f)
            for (int k = 0; k < 3; ++k, ++count)
                total += (s.vertices.row(s.faces(f, k)) -
                          s.vertices.row(s.faces(f, (k + 1) % 3)))
                             .norm();
    }
    return count > 0 ? total / static_cast<double>(count) : 0.0;
}

namespace {

std::map<std::pair<int, int>, int> undirected_edge_counts(const Surface& s) {
    std::map<std::pair<int, int>, int> counts;
    for (Eigen::Index f = 0; f < s.faces.rows(); ++f) {
        for (int k = 0; k < 3; ++k) {
            int a = s.faces(f, k), b = s.faces(f, (k + 1) % 3);
            if (a > b) std::swap(a, b);
            counts[{a, b}] += 1;
        }
    }
    return counts;
}

}  // namespace

bool is_closed(const Surface& s) {
    if (s.dim == 1) return true;
    for (const auto& [edge, count] : undirected_edge_counts(s))
        if (count != 2) return false;
    return true;
}

std::vector<bool> boundary_vertices(const Surface& s) {
    std::vector<bool> on_boundary(static_cast<size_t>(s.vertices.rows()), false);
    if (s.dim == 1) return on_boundary;
    for (const auto& [edge, count] : undirected_edge_counts(s)) {
        if (count == 1) {
            on_boundary[static_cast<size_t>(edge.first)] = true;
            on_boundary[static_cast<size_t>(edge.second)] = true;
        }
    }
    return on_boundary;
}

void validate(const Surface& s, bool require_closed) {
    if (s.dim != 1 && s.dim != 2) throw Error("surface dimension must be 1 or 2");
    if (s.vertices.cols() != s.ambient_dim())
        throw Error("vertex columns do not match ambient dimension");
    if (s.vertices.rows() < 3) throw Error("surface needs at least 3 vertices");
    if (!s.vertices.allFinite()) throw Error("non-finite vertex coordinates");

    const double diam = diameter(s);
    const double tol = kDegeneracyTol * diam;
    if (!(diam > 0.0)) throw DegenerateElement("surface has zero diameter");

    if (s.dim == 1) {
        const Eigen::Index v = s.vertices.rows();
        if (min_edge_length(s) <= tol)
            throw DegenerateElement("polyline edge below degeneracy tolerance");
        // Simplicity: non-adjacent segments must stay apart.
        for (Eigen::Index i = 0; i < v; ++i) {
            const Eigen::Vector2d p1 = s.vertices.row(i);
            const Eigen::Vector2d p2 = s.vertices.row((i + 1) % v);
            for (Eigen::Index j = i + 2; j < v; ++j) {
                if (i == 0 && j == v - 1) continue;  // shares the closing vertex
                const Eigen::Vector2d q1 = s.vertices.row(j);
                const Eigen::Vector2d q2 = s.vertices.row((j + 1) % v);
                if (segments_properly_intersect(p1, p2, q1, q2) ||
                    segment_segment_dist_sq(p1, p2, q1, q2) <= tol * tol)
                    throw Error("polygon self-intersects");
            }
        }
        return;
    }

    if (s.faces.rows() < 4 && require_closed)
        throw Error("closed mesh needs at least 4 triangles");
    const Eigen::Index v = s.vertices.rows();
    std::map<std::pair<int, int>, int> directed;
    for (Eigen::Index f = 0; f < s.faces.rows(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = s.faces(f, k), b = s.faces(f, (k + 1) % 3);
            if (a < 0 || a >= v || b < 0 || b >= v) throw Error("face index out of range");
            if (a == b) throw DegenerateElement("face repeats a vertex");
            if (++directed[{a, b}] > 1)
                throw Error("directed edge used twice: inconsistent orientation");
        }
        const Eigen::Vector3d p0 = s.vertices.row(s.faces(f, 0));
        const Eigen::Vector3d p1 = s.vertices.row(s.faces(f, 1));
        const Eigen::Vector3d p2 = s.vertices.row(s.faces(f, 2));
        if (0.5 * (p1 - p0).cross(p2 - p0).norm() <= tol * diam)
            throw DegenerateElement("triangle area below degeneracy tolerance");
    }
    if (min_edge_length(s) <= tol)
        throw DegenerateElement("mesh edge below degeneracy tolerance");
    for (const auto& [edge, count] : undirected_edge_counts(s)) {
        if (count > 2) throw Error("non-manifold edge");
        if (count != 2 && require_closed) throw Error("mesh has a boundary edge");
    }
    if (require_closed && s.outward_oriented && enclosed_volume(s) <= 0.0)
        throw Error("orientation is not outward");
}

Surface transform(const Surface& s, const Eigen::MatrixXd& rotation,
                  const Eigen::VectorXd& translation, double dilation) {
    const int d = s.ambient_dim();
    if (rotation.rows() != d || rotation.cols() != d || translation.size() != d)
        throw DimensionMismatch("transform dimensions do not match the surface");
    if (!(dilation > 0.0)) throw Error("dilation must be positive");
    const double ortho_err =
        (rotation.transpose() * rotation - Eigen::MatrixXd::Identity(d, d))
            .cwiseAbs()
            .maxCoeff();
    if (ortho_err > 1e-12) throw Error("rotation is not orthogonal to 1e-12");

    Surface out = s;
    out.vertices = dilation * (s.vertices * rotation.transpose());
    out.vertices.rowwise() += translation.transpose();
    // A reflection flips the outward convention; restore it by reversing.
    if (rotation.determinant() < 0.0) {
        if (s.dim == 1) {
            out.vertices = out.vertices.colwise().reverse().eval();
        } else {
            out.faces.col(1).swap(out.faces.col(2));
        }
    }
    return out;
}

}  // namespace entroflow
