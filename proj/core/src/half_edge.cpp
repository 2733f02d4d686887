#include "ripple/half_edge.hpp"

#include <algorithm>

namespace ripple {

HalfEdgeStructure::HalfEdgeStructure(QuantizedMesh mesh) : mesh_(std::move(mesh)) {
  const auto nf = static_cast<std::uint32_t>(mesh_.faces.size());
  edges_.resize(static_cast<std::size_t>(nf) * 3);
  for (std::uint32_t f = 0; f < nf; ++f) {
    for (std::uint32_t k = 0; k < 3; ++k) {
      edges_[3 * f + k] = {mesh_.faces[f][k], f, 3 * f + (k + 1) % 3, 3 * f + (k + 2) % 3};
    }
  }

  // Sort (origin, destination) keys once; twins of a->b are the run keyed b->a.
  struct Keyed {
    std::uint64_t key;
    std::uint32_t h;
  };
  std::vector<Keyed> keyed(edges_.size());
  for (std::uint32_t h = 0; h < edges_.size(); ++h) {
    keyed[h] = {(static_cast<std::uint64_t>(edges_[h].origin) << 32) | destination(h), h};
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    return a.key != b.key ? a.key < b.key : a.h < b.h;
  });

  twin_offsets_.assign(edges_.size() + 1, 0);
  std::vector<std::pair<std::size_t, std::size_t>> range(edges_.size());
  for (std::uint32_t h = 0; h < edges_.size(); ++h) {
    const std::uint64_t want = (static_cast<std::uint64_t>(destination(h)) << 32) | edges_[h].origin;
    auto lo = std::lower_bound(keyed.begin(), keyed.end(), want,
                               [](const Keyed& k, std::uint64_t v) { return k.key < v; });
    auto hi = lo;
    while (hi != keyed.end() && hi->key == want) ++hi;
    range[h] = {static_cast<std::size_t>(lo - keyed.begin()), static_cast<std::size_t>(hi - keyed.begin())};
    twin_offsets_[h + 1] = twin_offsets_[h] + static_cast<std::uint32_t>(range[h].second - range[h].first);
  }
  twin_list_.resize(twin_offsets_.back());
  for (std::uint32_t h = 0; h < edges_.size(); ++h) {
    auto out = twin_list_.begin() + twin_offsets_[h];
    for (auto i = range[h].first; i < range[h].second; ++i) *out++ = keyed[i].h;
  }
}

std::size_t HalfEdgeStructure::boundary_count() const {
  std::size_t n = 0;
  for (std::uint32_t h = 0; h < edges_.size(); ++h) {
    if (twin_offsets_[h] == twin_offsets_[h + 1]) ++n;
  }
  return n;
}

}  // namespace ripple
