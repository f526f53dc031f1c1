#include "entroflow/curvature.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace entroflow {

namespace {

CurvatureField polyline_curvature(const Surface& s) {
    const Eigen::Index v = s.vertices.rows();
    const double tol = kDegeneracyTol * diameter(s);

    CurvatureField out;
    out.mean_curvature.resize(v);
    out.normal.resize(v, 2);
    out.vertex_area.resize(v);
    out.second_form_norm_sq.resize(v);
    out.fit_mean_curvature.resize(v);

    Eigen::VectorXd edge_len(v);
    Eigen::MatrixXd tangent(v, 2);
    for (Eigen::Index i = 0; i < v; ++i) {
        const Eigen::Vector2d e = s.vertices.row((i + 1) % v) - s.vertices.row(i);
        edge_len(i) = e.norm();
        if (edge_len(i) <= tol) throw DegenerateElement("polyline edge underflow");
        tangent.row(i) = e.transpose() / edge_len(i);
    }

    for (Eigen::Index i = 0; i < v; ++i) {
        const Eigen::Index prev = (i + v - 1) % v;
        const Eigen::Vector2d tp = tangent.row(prev);
        const Eigen::Vector2d tn = tangent.row(i);
        // Turning angle; positive = left turn = convex for CCW orientation.
        const double cross = tp.x() * tn.y() - tp.y() * tn.x();
        const double theta = std::atan2(cross, tp.dot(tn));
        // Circumscribed-circle curvature: kappa = 2 sin(theta) / |chord|,
        // exact on circular arcs.
        const double chord =
            (s.vertices.row((i + 1) % v) - s.vertices.row(prev)).norm();
        const double kappa = chord > tol ? 2.0 * std::sin(theta) / chord
                                         : theta / (0.5 * (edge_len(prev) + edge_len(i)));

        Eigen::Vector2d bis = tp + tn;
        if (bis.norm() <= tol) bis = tn;  // 180-degree spike: fall back to one edge
        bis.normalize();
        out.normal.row(i) = Eigen::Vector2d(bis.y(), -bis.x()).transpose();

        out.mean_curvature(i) = kappa;
        out.vertex_area(i) = 0.5 * (edge_len(prev) + edge_len(i));
        out.second_form_norm_sq(i) = kappa * kappa;
        out.fit_mean_curvature(i) = kappa;
    }
    return out;
}

double cot(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    const double cross = a.cross(b).norm();
    return cross > 0.0 ? a.dot(b) / cross : 0.0;
}

// Principal curvatures from a local height fit h(u,v) over the tangent plane:
// solves the generalized eigenproblem of (I, II) for the Weingarten map, with
// signs chosen so a sphere with outward normals has positive curvatures.
void principal_from_quadric(double a, double b, double c, double d, double e,
                            double& k1, double& k2) {
    const double g = std::sqrt(1.0 + d * d + e * e);
    Eigen::Matrix2d first;
    first << 1.0 + d * d, d * e, d * e, 1.0 + e * e;
    Eigen::Matrix2d second;
    second << 2.0 * a, b, b, 2.0 * c;
    second /= g;
    const Eigen::Matrix2d w = -first.inverse() * second;
    const double tr = w.trace();
    const double det = w.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    k1 = tr / 2.0 + disc;
    k2 = tr / 2.0 - disc;
}

CurvatureField mesh_curvature(const Surface& s, bool with_second_form) {
    const Eigen::Index v = s.vertices.rows();
    const Eigen::Index nf = s.faces.rows();
    const double diam = diameter(s);
    const double tol = kDegeneracyTol * diam;
    const double area_tol = tol * diam;

    CurvatureField out;
    out.mean_curvature = Eigen::VectorXd::Zero(v);
    out.normal = Eigen::MatrixXd::Zero(v, 3);
    out.vertex_area = Eigen::VectorXd::Zero(v);
    out.second_form_norm_sq = Eigen::VectorXd::Zero(v);
    out.fit_mean_curvature = Eigen::VectorXd::Zero(v);

    Eigen::MatrixXd laplace = Eigen::MatrixXd::Zero(v, 3);  // sum w_ij (x_i - x_j)
    std::vector<std::vector<int>> one_ring(static_cast<size_t>(v));

    for (Eigen::Index f = 0; f < nf; ++f) {
        const int i0 = s.faces(f, 0), i1 = s.faces(f, 1), i2 = s.faces(f, 2);
        const Eigen::Vector3d p0 = s.vertices.row(i0);
        const Eigen::Vector3d p1 = s.vertices.row(i1);
        const Eigen::Vector3d p2 = s.vertices.row(i2);
        const Eigen::Vector3d n = (p1 - p0).cross(p2 - p0);
        const double area2 = n.norm();
        if (0.5 * area2 <= tol * std::max({(p1 - p0).norm(), (p2 - p1).norm(),
                                           (p0 - p2).norm()}))
            throw DegenerateElement("triangle mixed area underflow");
        const double area = 0.5 * area2;

        const int idx[3] = {i0, i1, i2};
        const Eigen::Vector3d p[3] = {p0, p1, p2};

        // Tip-angle weighted normals.
        double angle[3];
        double cotangent[3];  // cot of the angle at each corner
        for (int k = 0; k < 3; ++k) {
            const Eigen::Vector3d ea = p[(k + 1) % 3] - p[k];
            const Eigen::Vector3d eb = p[(k + 2) % 3] - p[k];
            angle[k] = std::atan2(ea.cross(eb).norm(), ea.dot(eb));
            cotangent[k] = cot(ea, eb);
            out.normal.row(idx[k]) += angle[k] * n.transpose() / area2;
        }

        // Cotangent Laplacian contributions: the edge opposite corner k picks
        // up weight cot(angle_k) / 2.
        for (int k = 0; k < 3; ++k) {
            const int a = idx[(k + 1) % 3], b = idx[(k + 2) % 3];
            const Eigen::Vector3d diff = s.vertices.row(a) - s.vertices.row(b);
            laplace.row(a) += 0.5 * cotangent[k] * diff.transpose();
            laplace.row(b) -= 0.5 * cotangent[k] * diff.transpose();
        }

        // Mixed Voronoi areas (obtuse triangles split 1/2, 1/4, 1/4).
        int obtuse = -1;
        for (int k = 0; k < 3; ++k)
            if (angle[k] > M_PI_2) obtuse = k;
        if (obtuse < 0) {
            for (int k = 0; k < 3; ++k) {
                const double la = (p[(k + 2) % 3] - p[k]).squaredNorm();
                const double lb = (p[(k + 1) % 3] - p[k]).squaredNorm();
                out.vertex_area(idx[k]) +=
                    (la * cotangent[(k + 1) % 3] + lb * cotangent[(k + 2) % 3]) / 8.0;
            }
        } else {
            for (int k = 0; k < 3; ++k)
                out.vertex_area(idx[k]) += (k == obtuse ? 0.5 : 0.25) * area;
        }

        if (with_second_form) {
            for (int k = 0; k < 3; ++k) {
                one_ring[static_cast<size_t>(idx[k])].push_back(idx[(k + 1) % 3]);
                one_ring[static_cast<size_t>(idx[k])].push_back(idx[(k + 2) % 3]);
            }
        }
    }

    for (Eigen::Index i = 0; i < v; ++i) {
        const double nn = out.normal.row(i).norm();
        if (nn <= 0.0) throw DegenerateElement("isolated or degenerate vertex");
        out.normal.row(i) /= nn;
        if (out.vertex_area(i) <= area_tol)
            throw DegenerateElement("vertex mixed area underflow");
        // -Delta X = H nu with nu outward.
        const Eigen::Vector3d mcv = laplace.row(i).transpose() / out.vertex_area(i);
        out.mean_curvature(i) = mcv.dot(out.normal.row(i).transpose());
    }

    if (!with_second_form) return out;

    // |A|^2 from two-ring quadric fits in the local tangent frame. A stamp
    // array marks visited vertices; it is far cheaper than a hash set in the
    // per-step monitoring loop.
    std::vector<int> stencil;
    std::vector<int> stamp(static_cast<size_t>(v), -1);
    for (Eigen::Index i = 0; i < v; ++i) {
        stencil.clear();
        stamp[static_cast<size_t>(i)] = static_cast<int>(i);
        for (int j : one_ring[static_cast<size_t>(i)]) {
            if (stamp[static_cast<size_t>(j)] != static_cast<int>(i)) {
                stamp[static_cast<size_t>(j)] = static_cast<int>(i);
                stencil.push_back(j);
            }
        }
        const size_t ring1 = stencil.size();
        for (size_t r = 0; r < ring1; ++r) {
            for (int j : one_ring[static_cast<size_t>(stencil[r])]) {
                if (stamp[static_cast<size_t>(j)] != static_cast<int>(i)) {
                    stamp[static_cast<size_t>(j)] = static_cast<int>(i);
                    stencil.push_back(j);
                }
            }
        }

        const Eigen::Vector3d nu = out.normal.row(i);
        Eigen::Vector3d u = nu.unitOrthogonal();
        const Eigen::Vector3d w = nu.cross(u);
        const Eigen::Vector3d origin = s.vertices.row(i);

        const int rows = static_cast<int>(stencil.size());
        if (rows < 5) continue;  // under-determined (tiny boundary patch)
        Eigen::MatrixXd A(rows, 5);
        Eigen::VectorXd h(rows);
        for (int r = 0; r < rows; ++r) {
            const Eigen::Vector3d d = Eigen::Vector3d(s.vertices.row(stencil[r])) - origin;
            const double x = d.dot(u), y = d.dot(w);
            A(r, 0) = x * x;
            A(r, 1) = x * y;
            A(r, 2) = y * y;
            A(r, 3) = x;
            A(r, 4) = y;
            h(r) = d.dot(nu);
        }
        const Eigen::Matrix<double, 5, 5> ata = A.transpose() * A;
        const Eigen::Matrix<double, 5, 1> coeff =
            ata.ldlt().solve(A.transpose() * h);
        double k1, k2;
        principal_from_quadric(coeff(0), coeff(1), coeff(2), coeff(3), coeff(4), k1, k2);
        out.second_form_norm_sq(i) = k1 * k1 + k2 * k2;
        out.fit_mean_curvature(i) = k1 + k2;
    }
    return out;
}

}  // namespace

CurvatureField compute_curvature(const Surface& s) {
    return s.dim == 1 ? polyline_curvature(s) : mesh_curvature(s, true);
}

CurvatureField compute_curvature_basic(const Surface& s) {
    return s.dim == 1 ? polyline_curvature(s) : mesh_curvature(s, false);
}

}  // namespace entroflow
