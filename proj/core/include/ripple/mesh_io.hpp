#pragma once

#include <iosfwd>
#include <string>

#include "ripple/mesh.hpp"

namespace ripple {

/// Wavefront OBJ: `v` and `f` records, 1-based (or negative) indices,
/// polygons fan-triangulated. Other records are ignored.
RawMesh read_obj(std::istream& in);
/// ASCII PLY with a `vertex` element (x, y, z) and a `face` list element.
RawMesh read_ply(std::istream& in);
/// Dispatches on the file extension (.obj / .ply).
RawMesh read_mesh(const std::string& path);

void write_obj(std::ostream& out, const RawMesh& mesh);
void write_obj(const std::string& path, const RawMesh& mesh);

/// Lattice points mapped back to model units via the mesh's normalization.
RawMesh dequantize_mesh(const QuantizedMesh& mesh);

}  // namespace ripple
