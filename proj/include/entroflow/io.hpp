#pragma once

#include <iosfwd>
#include <string>

#include "entroflow/surface.hpp"

namespace entroflow {

/// Plain-text closed polyline: one "x y" pair per line, implicit closure.
Surface read_polyline(std::istream& in);
void write_polyline(std::ostream& out, const Surface& s);

/// Wavefront OBJ restricted to v / f records, f indices 1-based.
Surface read_obj(std::istream& in);
void write_obj(std::ostream& out, const Surface& s);

/// Dispatch by extension: ".obj" for meshes, anything else as a polyline.
Surface read_surface(const std::string& path);
void write_surface(const std::string& path, const Surface& s);

/// Full-precision (17 significant digit) formatting used by all writers.
std::string format_double(double v);

}  // namespace entroflow
