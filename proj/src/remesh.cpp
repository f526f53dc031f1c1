#include "entroflow/remesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include <Eigen/Dense>

namespace entroflow {

namespace {

Surface resample_polyline(const Surface& s, double target_edge) {
    const Eigen::Index v = s.vertices.rows();
    // Already within the edge band: the resampling is a fixed point.
    bool in_band = true;
    for (Eigen::Index i = 0; i < v && in_band; ++i) {
        const double len = (s.vertices.row((i + 1) % v) - s.vertices.row(i)).norm();
        in_band = len >= 0.8 * target_edge && len <= 1.2 * target_edge;
    }
    if (in_band) return s;

    std::vector<double> cumulative(static_cast<size_t>(v) + 1, 0.0);
    for (Eigen::Index i = 0; i < v; ++i)
        cumulative[static_cast<size_t>(i) + 1] =
            cumulative[static_cast<size_t>(i)] +
            (s.vertices.row((i + 1) % v) - s.vertices.row(i)).norm();
    const double total = cumulative.back();
    const long count = std::max<long>(3, std::lround(total / target_edge));

    Surface out;
    out.dim = 1;
    out.vertices.resize(count, 2);
    size_t seg = 0;
    for (long k = 0; k < count; ++k) {
        const double arc = total * static_cast<double>(k) / static_cast<double>(count);
        while (seg + 1 < cumulative.size() - 1 && cumulative[seg + 1] <= arc) ++seg;
        const double len = cumulative[seg + 1] - cumulative[seg];
        const double t = len > 0.0 ? (arc - cumulative[seg]) / len : 0.0;
        const Eigen::Index i = static_cast<Eigen::Index>(seg);
        out.vertices.row(k) =
            (1.0 - t) * s.vertices.row(i) + t * s.vertices.row((i + 1) % v);
    }
    return out;
}

// Editable triangle mesh with just enough connectivity for split / collapse /
// flip passes. Faces are tombstoned rather than erased during a pass.
struct EditMesh {
    std::vector<Eigen::Vector3d> verts;
    std::vector<std::array<int, 3>> faces;
    std::vector<bool> dead_face;
    std::vector<bool> dead_vert;

    explicit EditMesh(const Surface& s) {
        verts.reserve(static_cast<size_t>(s.vertices.rows()));
        for (Eigen::Index i = 0; i < s.vertices.rows(); ++i)
            verts.emplace_back(s.vertices.row(i).transpose());
        faces.reserve(static_cast<size_t>(s.faces.rows()));
        for (Eigen::Index f = 0; f < s.faces.rows(); ++f)
            faces.push_back({s.faces(f, 0), s.faces(f, 1), s.faces(f, 2)});
        dead_face.assign(faces.size(), false);
        dead_vert.assign(verts.size(), false);
    }

    Surface to_surface() const {
        std::vector<int> remap(verts.size(), -1);
        int live = 0;
        for (size_t i = 0; i < verts.size(); ++i)
            if (!dead_vert[i]) remap[i] = live++;
        Surface s;
        s.dim = 2;
        s.vertices.resize(live, 3);
        for (size_t i = 0; i < verts.size(); ++i)
            if (remap[i] >= 0) s.vertices.row(remap[i]) = verts[i].transpose();
        std::vector<std::array<int, 3>> live_faces;
        for (size_t f = 0; f < faces.size(); ++f)
            if (!dead_face[f])
                live_faces.push_back({remap[faces[f][0]], remap[faces[f][1]],
                                      remap[faces[f][2]]});
        s.faces.resize(static_cast<Eigen::Index>(live_faces.size()), 3);
        for (size_t f = 0; f < live_faces.size(); ++f)
            for (int k = 0; k < 3; ++k)
                s.faces(static_cast<Eigen::Index>(f), k) = live_faces[f][k];
        return s;
    }
};

// (sorted edge) -> list of adjacent live face indices.
using EdgeMap = std::map<std::pair<int, int>, std::vector<int>>;

EdgeMap build_edges(const EditMesh& m) {
    EdgeMap edges;
    for (size_t f = 0; f < m.faces.size(); ++f) {
        if (m.dead_face[f]) continue;
        for (int k = 0; k < 3; ++k) {
            int a = m.faces[f][k], b = m.faces[f][(k + 1) % 3];
            if (a > b) std::swap(a, b);
            edges[{a, b}].push_back(static_cast<int>(f));
        }
    }
    return edges;
}

double face_area(const EditMesh& m, int f) {
    const auto& t = m.faces[static_cast<size_t>(f)];
    return 0.5 * (m.verts[t[1]] - m.verts[t[0]]).cross(m.verts[t[2]] - m.verts[t[0]]).norm();
}

std::vector<Eigen::Vector3d> vertex_normals(const EditMesh& m) {
    std::vector<Eigen::Vector3d> normals(m.verts.size(), Eigen::Vector3d::Zero());
    for (size_t f = 0; f < m.faces.size(); ++f) {
        if (m.dead_face[f]) continue;
        const auto& t = m.faces[f];
        const Eigen::Vector3d n =
            (m.verts[t[1]] - m.verts[t[0]]).cross(m.verts[t[2]] - m.verts[t[0]]);
        for (int k = 0; k < 3; ++k) normals[t[k]] += n;
    }
    for (auto& n : normals) {
        const double len = n.norm();
        if (len > 0.0) n /= len;
    }
    return normals;
}

// Midpoint of the circular arc through a and b consistent with the vertex
// normals: the chord midpoint plus the sagitta along the mean normal. Plain
// chord midpoints dent curved surfaces by O(h^2 kappa), which is enough to
// flip the local mean curvature sign.
Eigen::Vector3d arc_midpoint(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                             const Eigen::Vector3d& na, const Eigen::Vector3d& nb) {
    const Eigen::Vector3d mid = 0.5 * (a + b);
    Eigen::Vector3d n = na + nb;
    const double nn = n.norm();
    const double theta = std::atan2(na.cross(nb).norm(), na.dot(nb));
    if (nn == 0.0 || theta >= M_PI_2) return mid;
    n /= nn;
    const double chord = (b - a).norm();
    // Convex along the edge (normals tilting forward) bulges outward,
    // concave bulges inward.
    const double bend = (b - a).dot(nb - na);
    const double sagitta = std::min(0.125 * chord * theta, 0.25 * chord);
    return mid + (bend >= 0.0 ? sagitta : -sagitta) * n;
}

Eigen::Vector3d face_normal(const EditMesh& m, int f) {
    const auto& t = m.faces[static_cast<size_t>(f)];
    return (m.verts[t[1]] - m.verts[t[0]]).cross(m.verts[t[2]] - m.verts[t[0]]);
}

int opposite_vertex(const std::array<int, 3>& face, int a, int b) {
    for (int k = 0; k < 3; ++k)
        if (face[k] != a && face[k] != b) return face[k];
    return -1;
}

long split_long_edges(EditMesh& m, double high) {
    const EdgeMap edges = build_edges(m);
    const auto normals = vertex_normals(m);
    std::vector<std::pair<double, std::pair<int, int>>> queue;
    for (const auto& [e, fs] : edges) {
        const double len = (m.verts[e.first] - m.verts[e.second]).norm();
        if (len > high && fs.size() == 2) queue.push_back({len, e});
    }
    std::sort(queue.rbegin(), queue.rend());  // longest first

    long splits = 0;
    for (const auto& [len, e] : queue) {
        const auto it = edges.find(e);
        const auto& fs = it->second;
        if (m.dead_face[fs[0]] || m.dead_face[fs[1]]) continue;

        const int mid = static_cast<int>(m.verts.size());
        m.verts.push_back(arc_midpoint(m.verts[e.first], m.verts[e.second],
                                       normals[e.first], normals[e.second]));
        m.dead_vert.push_back(false);
        for (int f : fs) {
            const auto face = m.faces[static_cast<size_t>(f)];
            m.dead_face[f] = true;
            // Replace the edge endpoints in order, preserving orientation.
            for (int k = 0; k < 3; ++k) {
                const int a = face[k], b = face[(k + 1) % 3];
                if ((a == e.first && b == e.second) || (a == e.second && b == e.first)) {
                    const int c = face[(k + 2) % 3];
                    m.faces.push_back({a, mid, c});
                    m.faces.push_back({mid, b, c});
                    m.dead_face.push_back(false);
                    m.dead_face.push_back(false);
                    ++splits;
                    break;
                }
            }
        }
    }
    return splits;
}

std::vector<std::vector<int>> vertex_neighbors(const EditMesh& m) {
    std::vector<std::set<int>> nb(m.verts.size());
    for (size_t f = 0; f < m.faces.size(); ++f) {
        if (m.dead_face[f]) continue;
        for (int k = 0; k < 3; ++k) {
            nb[m.faces[f][k]].insert(m.faces[f][(k + 1) % 3]);
            nb[m.faces[f][k]].insert(m.faces[f][(k + 2) % 3]);
        }
    }
    std::vector<std::vector<int>> out(m.verts.size());
    for (size_t i = 0; i < nb.size(); ++i) out[i].assign(nb[i].begin(), nb[i].end());
    return out;
}

bool collapse_would_flip(const EditMesh& m, int gone, int kept,
                         const Eigen::Vector3d& target,
                         const std::vector<int>& gone_faces) {
    for (int f : gone_faces) {
        const auto& t = m.faces[static_cast<size_t>(f)];
        if (t[0] == kept || t[1] == kept || t[2] == kept) continue;  // removed anyway
        Eigen::Vector3d p[3], q[3];
        for (int k = 0; k < 3; ++k) {
            p[k] = m.verts[t[k]];
            q[k] = t[k] == gone ? target : m.verts[t[k]];
        }
        const Eigen::Vector3d n0 = (p[1] - p[0]).cross(p[2] - p[0]);
        const Eigen::Vector3d n1 = (q[1] - q[0]).cross(q[2] - q[0]);
        if (n1.norm() < 1e-14 || n0.dot(n1) <= 0.0) return true;
    }
    return false;
}

long collapse_short_edges(EditMesh& m, double low, double high) {
    const EdgeMap edges = build_edges(m);
    const auto normals = vertex_normals(m);
    auto neighbors = vertex_neighbors(m);
    std::vector<std::vector<int>> vert_faces(m.verts.size());
    for (size_t f = 0; f < m.faces.size(); ++f)
        if (!m.dead_face[f])
            for (int k = 0; k < 3; ++k)
                vert_faces[m.faces[f][k]].push_back(static_cast<int>(f));

    long collapses = 0;
    std::vector<bool> touched(m.verts.size(), false);
    for (const auto& [e, fs] : edges) {
        const auto [a, b] = e;
        if (fs.size() != 2) continue;
        if (touched[a] || touched[b] || m.dead_vert[a] || m.dead_vert[b]) continue;
        if ((m.verts[a] - m.verts[b]).norm() >= low) continue;

        // Link condition: shared neighbors must be exactly the two opposite
        // vertices, otherwise the collapse pinches the surface.
        std::set<int> shared;
        std::set<int> na(neighbors[a].begin(), neighbors[a].end());
        for (int j : neighbors[b])
            if (na.count(j)) shared.insert(j);
        std::set<int> opposite;
        for (int f : fs) opposite.insert(opposite_vertex(m.faces[static_cast<size_t>(f)], a, b));
        if (shared != opposite) continue;

        const Eigen::Vector3d target =
            arc_midpoint(m.verts[a], m.verts[b], normals[a], normals[b]);
        // Keep edges from blowing past the upper bound.
        bool too_long = false;
        for (int j : neighbors[a])
            if (j != b && (m.verts[j] - target).norm() > high) too_long = true;
        for (int j : neighbors[b])
            if (j != a && (m.verts[j] - target).norm() > high) too_long = true;
        if (too_long) continue;

        if (collapse_would_flip(m, b, a, target, vert_faces[b]) ||
            collapse_would_flip(m, a, b, target, vert_faces[a]))
            continue;

        // Collapse b into a at the midpoint.
        m.verts[a] = target;
        m.dead_vert[b] = true;
        for (int f : vert_faces[b]) {
            if (m.dead_face[f]) continue;
            auto& t = m.faces[static_cast<size_t>(f)];
            if (t[0] == a || t[1] == a || t[2] == a) {
                m.dead_face[f] = true;  // contained the collapsed edge
            } else {
                for (int k = 0; k < 3; ++k)
                    if (t[k] == b) t[k] = a;
                vert_faces[a].push_back(f);
            }
        }
        touched[a] = true;
        touched[b] = true;
        for (int j : neighbors[a]) touched[j] = true;
        for (int j : neighbors[b]) touched[j] = true;
        ++collapses;
    }
    return collapses;
}

long flip_for_valence(EditMesh& m) {
    auto valence_of = [&](const std::vector<std::vector<int>>& nb, int i) {
        return static_cast<int>(nb[static_cast<size_t>(i)].size());
    };
    const auto nb = vertex_neighbors(m);
    const EdgeMap edges = build_edges(m);
    std::vector<bool> face_touched(m.faces.size(), false);

    long flips = 0;
    for (const auto& [e, fs] : edges) {
        if (fs.size() != 2) continue;
        const auto [a, b] = e;
        const int f0 = fs[0], f1 = fs[1];
        if (m.dead_face[f0] || m.dead_face[f1] || face_touched[f0] || face_touched[f1])
            continue;
        const int c = opposite_vertex(m.faces[static_cast<size_t>(f0)], a, b);
        const int d = opposite_vertex(m.faces[static_cast<size_t>(f1)], a, b);
        if (c < 0 || d < 0 || c == d) continue;

        const int target = 6;
        auto dev = [&](int va, int vb, int vc, int vd) {
            auto sq = [](int x) { return x * x; };
            return sq(va - target) + sq(vb - target) + sq(vc - target) + sq(vd - target);
        };
        const int va = valence_of(nb, a), vb = valence_of(nb, b);
        const int vc = valence_of(nb, c), vd = valence_of(nb, d);
        if (dev(va - 1, vb - 1, vc + 1, vd + 1) >= dev(va, vb, vc, vd)) continue;
        if (va <= 3 || vb <= 3) continue;

        // Geometry guards: the flipped pair must stay near the old plane.
        const Eigen::Vector3d n0 = face_normal(m, f0) + face_normal(m, f1);
        auto tri_normal = [&](int x, int y, int z) {
            return (m.verts[y] - m.verts[x]).cross(m.verts[z] - m.verts[x]);
        };
        // Orientation of the flipped faces follows the winding of f0.
        const auto& t0 = m.faces[static_cast<size_t>(f0)];
        int aa = a, bb = b;
        for (int k = 0; k < 3; ++k)
            if (t0[k] == b && t0[(k + 1) % 3] == a) std::swap(aa, bb);
        const Eigen::Vector3d m0 = tri_normal(aa, d, c);
        const Eigen::Vector3d m1 = tri_normal(bb, c, d);
        if (m0.norm() < 1e-14 || m1.norm() < 1e-14) continue;
        if (m0.dot(n0) <= 0.0 || m1.dot(n0) <= 0.0) continue;

        m.faces[static_cast<size_t>(f0)] = {aa, d, c};
        m.faces[static_cast<size_t>(f1)] = {bb, c, d};
        face_touched[f0] = true;
        face_touched[f1] = true;
        ++flips;
    }
    return flips;
}

void tangential_relax(EditMesh& m, double step) {
    const auto nb = vertex_neighbors(m);
    // Area-weighted vertex normals.
    std::vector<Eigen::Vector3d> normals(m.verts.size(), Eigen::Vector3d::Zero());
    for (size_t f = 0; f < m.faces.size(); ++f) {
        if (m.dead_face[f]) continue;
        const Eigen::Vector3d n = face_normal(m, static_cast<int>(f));
        for (int k = 0; k < 3; ++k) normals[m.faces[f][k]] += n;
    }
    std::vector<Eigen::Vector3d> next = m.verts;
    for (size_t i = 0; i < m.verts.size(); ++i) {
        if (m.dead_vert[i] || nb[i].empty()) continue;
        Eigen::Vector3d g = Eigen::Vector3d::Zero();
        for (int j : nb[i]) g += m.verts[static_cast<size_t>(j)];
        g /= static_cast<double>(nb[i].size());
        Eigen::Vector3d d = g - m.verts[i];
        const double nn = normals[i].norm();
        if (nn > 0.0) {
            const Eigen::Vector3d nu = normals[i] / nn;
            d -= d.dot(nu) * nu;  // tangential component only
        }
        next[i] = m.verts[i] + step * d;
    }
    m.verts = std::move(next);
}

Surface remesh_mesh(const Surface& input, double target_edge) {
    EditMesh m(input);
    const double high = 4.0 / 3.0 * target_edge;
    const double low = 0.66 * target_edge;
    for (int pass = 0; pass < 4; ++pass) {
        long ops = split_long_edges(m, high);
        ops += collapse_short_edges(m, low, high);
        ops += flip_for_valence(m);
        if (ops == 0) break;  // already in band: remeshing is a fixed point
        tangential_relax(m, 0.4);
    }
    Surface out = m.to_surface();
    try {
        validate(out, true);
    } catch (const std::exception& ex) {
        throw RemeshFailure(std::string("remesh broke mesh invariants: ") + ex.what());
    }
    return out;
}

}  // namespace

Surface remesh(const Surface& s, double target_edge) {
    if (!(target_edge > 0.0)) throw Error("target edge must be positive");
    if (s.dim == 1) return resample_polyline(s, target_edge);
    if (!is_closed(s)) throw RemeshFailure("remesh requires a closed mesh");
    return remesh_mesh(s, target_edge);
}

}  // namespace entroflow
