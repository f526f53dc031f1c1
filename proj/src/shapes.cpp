#include "entroflow/shapes.hpp"

#include <cmath>
#include <map>
#include <vector>

namespace entroflow {

Surface make_circle(double radius, int segments, const Eigen::Vector2d& center) {
    if (!(radius > 0.0)) throw Error("circle radius must be positive");
    if (segments < 3) throw Error("circle needs at least 3 segments");
    Surface s;
    s.dim = 1;
    s.vertices.resize(segments, 2);
    for (int i = 0; i < segments; ++i) {
        const double a = 2.0 * M_PI * i / segments;
        s.vertices(i, 0) = center.x() + radius * std::cos(a);
        s.vertices(i, 1) = center.y() + radius * std::sin(a);
    }
    return s;
}

namespace {

struct IcoBuilder {
    std::vector<Eigen::Vector3d> verts;
    std::vector<Eigen::Vector3i> faces;
    std::map<std::pair<int, int>, int> midpoint_cache;

    int midpoint(int a, int b) {
        const auto key = std::minmax(a, b);
        auto it = midpoint_cache.find(key);
        if (it != midpoint_cache.end()) return it->second;
        verts.push_back(((verts[a] + verts[b]) / 2.0).normalized());
        const int idx = static_cast<int>(verts.size()) - 1;
        midpoint_cache.emplace(key, idx);
        return idx;
    }
};

}  // namespace

Surface make_icosphere(double radius, int subdivisions, const Eigen::Vector3d& center) {
    if (!(radius > 0.0)) throw Error("sphere radius must be positive");
    if (subdivisions < 0 || subdivisions > 8) throw Error("subdivisions must be in 0..8");

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    IcoBuilder b;
    const double raw[12][3] = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                               {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                               {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
    for (const auto& p : raw)
        b.verts.push_back(Eigen::Vector3d(p[0], p[1], p[2]).normalized());
    const int raw_faces[20][3] = {{0, 11, 5}, {0, 5, 1},   {0, 1, 7},   {0, 7, 10},
                                  {0, 10, 11}, {1, 5, 9},  {5, 11, 4},  {11, 10, 2},
                                  {10, 7, 6},  {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
                                  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},   {4, 9, 5},
                                  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (const auto& f : raw_faces) b.faces.emplace_back(f[0], f[1], f[2]);

    for (int level = 0; level < subdivisions; ++level) {
        std::vector<Eigen::Vector3i> next;
        next.reserve(b.faces.size() * 4);
        for (const auto& f : b.faces) {
            const int ab = b.midpoint(f[0], f[1]);
            const int bc = b.midpoint(f[1], f[2]);
            const int ca = b.midpoint(f[2], f[0]);
            next.emplace_back(f[0], ab, ca);
            next.emplace_back(f[1], bc, ab);
            next.emplace_back(f[2], ca, bc);
            next.emplace_back(ab, bc, ca);
        }
        b.faces = std::move(next);
    }

    Surface s;
    s.dim = 2;
    s.vertices.resize(static_cast<Eigen::Index>(b.verts.size()), 3);
    for (size_t i = 0; i < b.verts.size(); ++i)
        s.vertices.row(static_cast<Eigen::Index>(i)) =
            (center + radius * b.verts[i]).transpose();
    s.faces.resize(static_cast<Eigen::Index>(b.faces.size()), 3);
    for (size_t i = 0; i < b.faces.size(); ++i)
        s.faces.row(static_cast<Eigen::Index>(i)) = b.faces[i].transpose();
    return s;
}

Surface make_ellipsoid(const Eigen::Vector3d& semi_axes, int subdivisions,
                       const Eigen::Vector3d& center) {
    if (!(semi_axes.minCoeff() > 0.0)) throw Error("ellipsoid axes must be positive");
    Surface s = make_icosphere(1.0, subdivisions);
    s.vertices = s.vertices.array().rowwise() * semi_axes.transpose().array();
    s.vertices.rowwise() += center.transpose();
    return s;
}

Surface make_planar_disk(double radius, int rings) {
    if (!(radius > 0.0) || rings < 1) throw Error("invalid disk parameters");
    std::vector<Eigen::Vector3d> verts;
    std::vector<Eigen::Vector3i> faces;
    verts.emplace_back(0.0, 0.0, 0.0);
    std::vector<int> ring_start = {0};
    for (int k = 1; k <= rings; ++k) {
        ring_start.push_back(static_cast<int>(verts.size()));
        const double r = radius * k / rings;
        const int m = 6 * k;
        for (int i = 0; i < m; ++i) {
            const double a = 2.0 * M_PI * i / m;
            verts.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
        }
    }
    // Hexagonal band triangulation between ring k-1 (6(k-1) points) and ring k.
    for (int k = 1; k <= rings; ++k) {
        const int inner = ring_start[k - 1], outer = ring_start[k];
        const int mi = k == 1 ? 1 : 6 * (k - 1), mo = 6 * k;
        int i = 0, o = 0;
        // Walk both rings in sync: each outer sector gains one extra triangle.
        for (int sector = 0; sector < 6; ++sector) {
            for (int step = 0; step < k; ++step) {
                const int o_next = (o + 1) % mo;
                faces.emplace_back(outer + o, outer + o_next, inner + (i % mi));
                if (step + 1 < k) {
                    const int i_next = (i + 1) % mi;
                    faces.emplace_back(outer + o_next, inner + i_next, inner + (i % mi));
                    ++i;
                }
                o = o_next;
            }
        }
    }
    Surface s;
    s.dim = 2;
    s.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
    for (size_t i = 0; i < verts.size(); ++i)
        s.vertices.row(static_cast<Eigen::Index>(i)) = verts[i].transpose();
    s.faces.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (size_t i = 0; i < faces.size(); ++i)
        s.faces.row(static_cast<Eigen::Index>(i)) = faces[i].transpose();
    return s;
}

Surface make_gaussian_graph(double radius, int rings, double amplitude) {
    Surface s = make_planar_disk(radius, rings);
    for (Eigen::Index i = 0; i < s.vertices.rows(); ++i) {
        const double r2 = s.vertices(i, 0) * s.vertices(i, 0) +
                          s.vertices(i, 1) * s.vertices(i, 1);
        s.vertices(i, 2) = amplitude * std::exp(-r2 / 2.0);
    }
    return s;
}

}  // namespace entroflow
