#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ripple {

using Vec3 = std::array<double, 3>;
using IVec3 = std::array<std::int32_t, 3>;
using Tri = std::array<std::uint32_t, 3>;

inline constexpr int kDefaultBins = 256;

/// Real-valued triangle soup as read from disk.
struct RawMesh {
  std::vector<Vec3> vertices;
  std::vector<Tri> faces;

  /// Throws InvalidArgument when a face index is out of range.
  void validate() const;
};

/// Maps model coordinates into the unit cube centered at the origin:
/// x_norm = (x - center) * scale.
struct Normalization {
  Vec3 center{0.0, 0.0, 0.0};
  double scale = 1.0;

  Vec3 to_normalized(const Vec3& p) const;
  Vec3 to_model(const Vec3& p) const;
};

/// Triangle mesh on an integer lattice of `bins` cells per axis.
struct QuantizedMesh {
  int bins = kDefaultBins;
  std::vector<IVec3> vertices;
  std::vector<Tri> faces;
  Normalization normalization;

  /// Cell-center position of a lattice point in normalized coordinates.
  Vec3 dequantize(const IVec3& q) const;
  Vec3 dequantize_vertex(std::uint32_t v) const { return dequantize(vertices[v]); }

  friend bool operator==(const QuantizedMesh& a, const QuantizedMesh& b) {
    return a.bins == b.bins && a.vertices == b.vertices && a.faces == b.faces;
  }
};

int quantize_coord(double normalized, int bins);
double dequantize_coord(int bin, int bins);

/// Strict weak order on lattice points comparing z, then y, then x.
bool zyx_less(const IVec3& a, const IVec3& b) noexcept;

/// Uniform scale by the longest bounding-box axis, then floor+clamp binning.
/// Does not merge or reorder anything.
QuantizedMesh normalize_and_quantize(const RawMesh& mesh, int bins = kDefaultBins);

struct SanitizeStats {
  std::size_t vertices_before = 0;
  std::size_t vertices_after = 0;
  std::size_t merged_vertices = 0;
  std::size_t unreferenced_vertices = 0;
  std::size_t faces_before = 0;
  std::size_t faces_after = 0;
  std::size_t degenerate_faces = 0;
  std::size_t duplicate_faces = 0;

  double vertex_drop_ratio() const noexcept;
};

struct SanitizeResult {
  QuantizedMesh mesh;
  SanitizeStats stats;
  /// Index of the input face each surviving face came from.
  std::vector<std::uint32_t> face_source;
};

SanitizeResult sanitize(const QuantizedMesh& mesh);

/// Vertices reordered by z-y-x, each face rotated to start at its smallest
/// vertex, faces sorted by their vertex tuples. Idempotent.
QuantizedMesh canonical_sort(const QuantizedMesh& mesh);

struct OrientResult {
  QuantizedMesh mesh;
  std::size_t flipped_faces = 0;
  std::size_t components = 0;
  /// Components left untouched because no consistent winding exists.
  std::size_t unorientable_components = 0;

  bool unorientable() const noexcept { return unorientable_components > 0; }
};

/// Propagates winding across manifold edges, component by component, starting
/// from each component's first face. Non-manifold edges do not propagate.
OrientResult orient_faces(const QuantizedMesh& mesh);

struct PreparedMesh {
  QuantizedMesh mesh;
  SanitizeStats sanitize_stats;
  std::size_t flipped_faces = 0;
  bool unorientable = false;
};

/// normalize_and_quantize -> sanitize -> canonical_sort -> orient_faces ->
/// canonical_sort. The result is ready for build_half_edges.
PreparedMesh prepare(const RawMesh& mesh, int bins = kDefaultBins);
/// Sort/orient stages only, for callers that keep the sanitize result.
PreparedMesh prepare(const SanitizeResult& sanitized);

}  // namespace ripple
