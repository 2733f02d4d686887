#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripple/mesh.hpp"

namespace ripple::procedural {

/// Consistently wound (outward, counterclockwise) closed sphere.
RawMesh icosphere(int subdivisions, double radius = 1.0);
/// 2 * major * minor triangles.
RawMesh torus(int major_segments, int minor_segments, double major_radius = 1.0, double minor_radius = 0.35);
/// nx by ny quads, two triangles each. `amplitude` bends the patch into a wave.
RawMesh grid_patch(int nx, int ny, double amplitude = 0.0);
RawMesh open_cylinder(int segments, int rings, double radius = 0.5, double height = 1.0);
/// `pages` strips hinged on one shared spine edge; page windings alternate so
/// neighbouring pages meet with opposite half-edges and every other pair is
/// co-directional.
RawMesh nonmanifold_book(int pages, int strips_per_page = 2);
/// Two cones sharing only their apex vertex.
RawMesh double_cone(int segments);
/// Unorientable strip.
RawMesh moebius_strip(int segments);
RawMesh cube();
/// `count` small closed shapes laid out on a grid, never touching.
RawMesh assembly(int count, std::uint64_t seed);

RawMesh rotated(RawMesh mesh, double yaw, double pitch, double roll);
RawMesh translated(RawMesh mesh, const Vec3& offset);
RawMesh concatenated(const std::vector<RawMesh>& parts);

struct CorpusEntry {
  std::string name;
  RawMesh mesh;
};

/// Fixed procedural corpus (icospheres at three subdivision levels, tori,
/// grid patches, open cylinders, non-manifold books, vertex-joined double
/// cones, 2-20 component assemblies). Deterministic.
std::vector<CorpusEntry> corpus();

}  // namespace ripple::procedural
