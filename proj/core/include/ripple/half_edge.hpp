#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ripple/mesh.hpp"

namespace ripple {

/// Directed half-edges over an oriented triangle mesh. Face f owns half-edges
/// 3f, 3f+1, 3f+2 running v0->v1, v1->v2, v2->v0.
///
/// Twins are every half-edge on the same vertex pair running the opposite
/// way, so a non-manifold edge can give one half-edge several twins while
/// co-directional half-edges are never linked.
class HalfEdgeStructure {
 public:
  struct HalfEdge {
    std::uint32_t origin;
    std::uint32_t face;
    std::uint32_t next;
    std::uint32_t prev;
  };

  HalfEdgeStructure() = default;
  explicit HalfEdgeStructure(QuantizedMesh mesh);

  const QuantizedMesh& mesh() const noexcept { return mesh_; }
  std::size_t size() const noexcept { return edges_.size(); }
  std::size_t face_count() const noexcept { return mesh_.faces.size(); }

  const HalfEdge& operator[](std::uint32_t h) const { return edges_[h]; }
  std::uint32_t destination(std::uint32_t h) const { return edges_[edges_[h].next].origin; }
  std::uint32_t face_entry(std::uint32_t f) const noexcept { return 3 * f; }

  /// Opposite-oriented half-edges on the same vertex pair, ordered by owning face.
  std::span<const std::uint32_t> twins(std::uint32_t h) const {
    return {twin_list_.data() + twin_offsets_[h], twin_list_.data() + twin_offsets_[h + 1]};
  }

  /// Half-edges with no twin.
  std::size_t boundary_count() const;

 private:
  QuantizedMesh mesh_;
  std::vector<HalfEdge> edges_;
  std::vector<std::uint32_t> twin_offsets_;
  std::vector<std::uint32_t> twin_list_;
};

inline HalfEdgeStructure build_half_edges(QuantizedMesh mesh) {
  return HalfEdgeStructure(std::move(mesh));
}

}  // namespace ripple
