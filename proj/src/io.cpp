#include "entroflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace entroflow {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Surface read_polyline(std::istream& in) {
    std::vector<Eigen::Vector2d> pts;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        double x, y;
        if (!(iss >> x >> y)) throw IoError("malformed polyline line: " + line);
        pts.emplace_back(x, y);
    }
    if (pts.size() < 3) throw IoError("polyline needs at least 3 points");
    Surface s;
    s.dim = 1;
    s.vertices.resize(static_cast<Eigen::Index>(pts.size()), 2);
    for (size_t i = 0; i < pts.size(); ++i)
        s.vertices.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    return s;
}

void write_polyline(std::ostream& out, const Surface& s) {
    if (s.dim != 1) throw IoError("polyline format requires a 1-dimensional surface");
    for (Eigen::Index i = 0; i < s.vertices.rows(); ++i)
        out << format_double(s.vertices(i, 0)) << ' ' << format_double(s.vertices(i, 1))
            << '\n';
}

Surface read_obj(std::istream& in) {
    std::vector<Eigen::Vector3d> verts;
    std::vector<Eigen::Vector3i> faces;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream iss(line);
        std::string tag;
        iss >> tag;
        if (tag == "v") {
            double x, y, z;
            if (!(iss >> x >> y >> z)) throw IoError("malformed OBJ vertex: " + line);
            verts.emplace_back(x, y, z);
        } else if (tag == "f") {
            int idx[3];
            for (int k = 0; k < 3; ++k) {
                std::string field;
                if (!(iss >> field)) throw IoError("malformed OBJ face: " + line);
                // Accept "i", "i/t", "i/t/n", "i//n".
                idx[k] = std::stoi(field.substr(0, field.find('/')));
                if (idx[k] < 1) throw IoError("OBJ face index must be >= 1");
            }
            std::string extra;
            if (iss >> extra) throw IoError("only triangle faces are supported");
            faces.emplace_back(idx[0] - 1, idx[1] - 1, idx[2] - 1);
        }
        // Other records (vn, vt, o, g, s, usemtl, ...) are ignored.
    }
    if (verts.size() < 3 || faces.empty()) throw IoError("OBJ has no usable geometry");
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

void write_obj(std::ostream& out, const Surface& s) {
    if (s.dim != 2) throw IoError("OBJ format requires a 2-dimensional surface");
    for (Eigen::Index i = 0; i < s.vertices.rows(); ++i)
        out << "v " << format_double(s.vertices(i, 0)) << ' '
            << format_double(s.vertices(i, 1)) << ' ' << format_double(s.vertices(i, 2))
            << '\n';
    for (Eigen::Index f = 0; f < s.faces.rows(); ++f)
        out << "f " << s.faces(f, 0) + 1 << ' ' << s.faces(f, 1) + 1 << ' '
            << s.faces(f, 2) + 1 << '\n';
}

namespace {

bool has_suffix(const std::string& path, const std::string& suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

Surface read_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return has_suffix(path, ".obj") ? read_obj(in) : read_polyline(in);
}

void write_surface(const std::string& path, const Surface& s) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (has_suffix(path, ".obj"))
        write_obj(out, s);
    else
        write_polyline(out, s);
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace entroflow
