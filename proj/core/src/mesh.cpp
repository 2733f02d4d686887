#include "ripple/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "ripple/error.hpp"

namespace ripple {

namespace {

std::uint64_t pack(const IVec3& q) noexcept {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(q[0])) & 0x1FFFFF) |
         ((static_cast<std::uint64_t>(static_cast<std::uint32_t>(q[1])) & 0x1FFFFF) << 21) |
         ((static_cast<std::uint64_t>(static_cast<std::uint32_t>(q[2])) & 0x1FFFFF) << 42);
}

std::uint64_t edge_key(std::uint32_t a, std::uint32_t b) noexcept {
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Rotation of a face with the smallest index first; orientation preserved.
Tri rotate_min_first(const Tri& f) noexcept {
  std::size_t k = 0;
  if (f[1] < f[k]) k = 1;
  if (f[2] < f[k]) k = 2;
  return {f[k], f[(k + 1) % 3], f[(k + 2) % 3]};
}

struct TriHash {
  std::size_t operator()(const Tri& t) const noexcept {
    std::uint64_t h = t[0];
    h = h * 0x9E3779B97F4A7C15ull ^ t[1];
    h = h * 0x9E3779B97F4A7C15ull ^ t[2];
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace

void RawMesh::validate() const {
  const auto n = vertices.size();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    for (auto v : faces[i]) {
      if (v >= n) {
        throw Error(ErrorCode::InvalidArgument,
                    "face " + std::to_string(i) + " references vertex " + std::to_string(v) +
                        " but mesh has " + std::to_string(n) + " vertices");
      }
    }
  }
}

Vec3 Normalization::to_normalized(const Vec3& p) const {
  return {(p[0] - center[0]) * scale, (p[1] - center[1]) * scale, (p[2] - center[2]) * scale};
}

Vec3 Normalization::to_model(const Vec3& p) const {
  return {p[0] / scale + center[0], p[1] / scale + center[1], p[2] / scale + center[2]};
}

int quantize_coord(double normalized, int bins) {
  const double cell = std::floor((normalized + 0.5) * bins);
  if (!(cell > 0.0)) return 0;  // also catches NaN
  if (cell >= bins - 1) return bins - 1;
  return static_cast<int>(cell);
}

double dequantize_coord(int bin, int bins) {
  return (static_cast<double>(bin) + 0.5) / bins - 0.5;
}

Vec3 QuantizedMesh::dequantize(const IVec3& q) const {
  return {dequantize_coord(q[0], bins), dequantize_coord(q[1], bins), dequantize_coord(q[2], bins)};
}

bool zyx_less(const IVec3& a, const IVec3& b) noexcept {
  if (a[2] != b[2]) return a[2] < b[2];
  if (a[1] != b[1]) return a[1] < b[1];
  return a[0] < b[0];
}

QuantizedMesh normalize_and_quantize(const RawMesh& mesh, int bins) {
  if (mesh.vertices.empty() || mesh.faces.empty()) {
    throw Error(ErrorCode::EmptyInput, "mesh has no vertices or no faces");
  }
  if (bins < 2 || bins > 0xFFFF - 16) {
    throw Error(ErrorCode::InvalidArgument, "bins must lie in [2, 65519], got " + std::to_string(bins));
  }
  mesh.validate();

  Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity()};
  Vec3 hi{-lo[0], -lo[1], -lo[2]};
  for (const auto& p : mesh.vertices) {
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(p[a])) {
        throw Error(ErrorCode::DegenerateGeometry, "non-finite vertex coordinate");
      }
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  const double extent = std::max({hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]});
  if (!(extent > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "bounding box has zero extent on every axis");
  }

  QuantizedMesh out;
  out.bins = bins;
  out.normalization.center = {(lo[0] + hi[0]) * 0.5, (lo[1] + hi[1]) * 0.5, (lo[2] + hi[2]) * 0.5};
  out.normalization.scale = 1.0 / extent;
  out.vertices.reserve(mesh.vertices.size());
  for (const auto& p : mesh.vertices) {
    const Vec3 n = out.normalization.to_normalized(p);
    out.vertices.push_back({quantize_coord(n[0], bins), quantize_coord(n[1], bins), quantize_coord(n[2], bins)});
  }
  out.faces = mesh.faces;
  return out;
}

double SanitizeStats::vertex_drop_ratio() const noexcept {
  if (vertices_before == 0) return 0.0;
  return static_cast<double>(vertices_before - vertices_after) / static_cast<double>(vertices_before);
}

SanitizeResult sanitize(const QuantizedMesh& mesh) {
  SanitizeResult res;
  auto& stats = res.stats;
  stats.vertices_before = mesh.vertices.size();
  stats.faces_before = mesh.faces.size();

  // First occurrence of each lattice point is the representative.
  std::unordered_map<std::uint64_t, std::uint32_t> first;
  first.reserve(mesh.vertices.size() * 2);
  std::vector<std::uint32_t> merged_index(mesh.vertices.size());
  std::vector<IVec3> unique;
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    auto [it, inserted] = first.try_emplace(pack(mesh.vertices[i]), static_cast<std::uint32_t>(unique.size()));
    if (inserted) unique.push_back(mesh.vertices[i]);
    merged_index[i] = it->second;
  }
  stats.merged_vertices = mesh.vertices.size() - unique.size();

  std::unordered_set<Tri, TriHash> seen;
  seen.reserve(mesh.faces.size() * 2);
  std::vector<Tri> faces;
  faces.reserve(mesh.faces.size());
  for (std::size_t i = 0; i < mesh.faces.size(); ++i) {
    const auto& f = mesh.faces[i];
    Tri m{merged_index.at(f[0]), merged_index.at(f[1]), merged_index.at(f[2])};
    if (m[0] == m[1] || m[1] == m[2] || m[0] == m[2]) {
      ++stats.degenerate_faces;
      continue;
    }
    if (!seen.insert(rotate_min_first(m)).second) {
      ++stats.duplicate_faces;
      continue;
    }
    faces.push_back(m);
    res.face_source.push_back(static_cast<std::uint32_t>(i));
  }
  if (faces.empty()) {
    throw Error(ErrorCode::EmptyAfterSanitize, "every face is degenerate after vertex merge");
  }

  // Drop vertices no surviving face references, keeping first-occurrence order.
  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> compact(unique.size(), kUnset);
  std::vector<bool> used(unique.size(), false);
  for (const auto& f : faces) {
    for (auto v : f) used[v] = true;
  }
  auto& out = res.mesh;
  out.bins = mesh.bins;
  out.normalization = mesh.normalization;
  for (std::size_t v = 0; v < unique.size(); ++v) {
    if (!used[v]) continue;
    compact[v] = static_cast<std::uint32_t>(out.vertices.size());
    out.vertices.push_back(unique[v]);
  }
  for (auto& f : faces) {
    for (auto& v : f) v = compact[v];
  }
  out.faces = std::move(faces);

  stats.unreferenced_vertices = unique.size() - out.vertices.size();
  stats.vertices_after = out.vertices.size();
  stats.faces_after = out.faces.size();
  return res;
}

QuantizedMesh canonical_sort(const QuantizedMesh& mesh) {
  std::vector<std::uint32_t> order(mesh.vertices.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return zyx_less(mesh.vertices[a], mesh.vertices[b]);
  });
  std::vector<std::uint32_t> rank(mesh.vertices.size());
  QuantizedMesh out;
  out.bins = mesh.bins;
  out.normalization = mesh.normalization;
  out.vertices.reserve(mesh.vertices.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    rank[order[i]] = static_cast<std::uint32_t>(i);
    out.vertices.push_back(mesh.vertices[order[i]]);
  }
  out.faces.reserve(mesh.faces.size());
  for (const auto& f : mesh.faces) {
    out.faces.push_back(rotate_min_first({rank[f[0]], rank[f[1]], rank[f[2]]}));
  }
  // Vertex ranks follow z-y-x order, so index tuples compare like coordinate tuples.
  std::stable_sort(out.faces.begin(), out.faces.end());
  return out;
}

OrientResult orient_faces(const QuantizedMesh& mesh) {
  const std::size_t nf = mesh.faces.size();

  struct Incidence {
    std::uint32_t face;
    bool forward;  // traverses the edge from its smaller to its larger vertex
  };
  std::unordered_map<std::uint64_t, std::vector<Incidence>> edges;
  edges.reserve(nf * 3);
  for (std::uint32_t f = 0; f < nf; ++f) {
    const auto& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      const auto a = t[k];
      const auto b = t[(k + 1) % 3];
      edges[edge_key(std::min(a, b), std::max(a, b))].push_back({f, a < b});
    }
  }

  OrientResult res;
  res.mesh = mesh;
  std::vector<std::int8_t> flip(nf, -1);
  std::vector<std::uint32_t> component;
  std::queue<std::uint32_t> work;

  for (std::uint32_t seed = 0; seed < nf; ++seed) {
    if (flip[seed] >= 0) continue;
    ++res.components;
    component.clear();
    bool conflict = false;
    flip[seed] = 0;
    work.push(seed);
    while (!work.empty()) {
      const auto f = work.front();
      work.pop();
      component.push_back(f);
      const auto& t = mesh.faces[f];
      for (int k = 0; k < 3; ++k) {
        const auto a = t[k];
        const auto b = t[(k + 1) % 3];
        const auto& inc = edges[edge_key(std::min(a, b), std::max(a, b))];
        if (inc.size() != 2 || inc[0].face == inc[1].face) continue;
        const auto& self = inc[0].face == f ? inc[0] : inc[1];
        const auto& other = inc[0].face == f ? inc[1] : inc[0];
        const std::int8_t want = static_cast<std::int8_t>(flip[f] ^ (self.forward == other.forward ? 1 : 0));
        if (flip[other.face] < 0) {
          flip[other.face] = want;
          work.push(other.face);
        } else if (flip[other.face] != want) {
          conflict = true;
        }
      }
    }
    if (conflict) {
      ++res.unorientable_components;
      for (auto f : component) flip[f] = 0;
    }
  }

  for (std::size_t f = 0; f < nf; ++f) {
    if (flip[f] == 1) {
      auto& t = res.mesh.faces[f];
      std::swap(t[1], t[2]);
      ++res.flipped_faces;
    }
  }
  return res;
}

PreparedMesh prepare(const RawMesh& mesh, int bins) { return prepare(sanitize(normalize_and_quantize(mesh, bins))); }

PreparedMesh prepare(const SanitizeResult& sanitized) {
  auto oriented = orient_faces(canonical_sort(sanitized.mesh));
  PreparedMesh out;
  out.mesh = oriented.flipped_faces > 0 ? canonical_sort(oriented.mesh) : std::move(oriented.mesh);
  out.sanitize_stats = sanitized.stats;
  out.flipped_faces = oriented.flipped_faces;
  out.unorientable = oriented.unorientable();
  return out;
}

}  // namespace ripple
