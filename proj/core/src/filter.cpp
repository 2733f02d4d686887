#include "ripple/filter.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ripple/binary_io.hpp"
#include "ripple/error.hpp"
#include "ripple/geometry.hpp"
#include "ripple/half_edge.hpp"
#include "ripple/tokenizer.hpp"

namespace ripple {

namespace {

using nlohmann::json;

geom::LatticeTriangle lattice_triangle(const QuantizedMesh& m, const Tri& f) {
  geom::LatticeTriangle t{};
  for (int k = 0; k < 3; ++k) {
    for (int a = 0; a < 3; ++a) t[k][a] = m.vertices[f[k]][a];
  }
  return t;
}

geom::Triangle<double> raw_triangle(const RawMesh& m, const Tri& f) {
  return {m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]};
}

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

Vec3 minus(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0u); }
  std::uint32_t find(std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

struct Box {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  void add(const Vec3& p) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  double distance(const Vec3& p) const {
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
      const double d = std::max({lo[a] - p[a], 0.0, p[a] - hi[a]});
      s += d * d;
    }
    return std::sqrt(s);
  }
};

FilterCheck make_check(std::string name, double value, double threshold, bool pass) {
  return {std::move(name), value, threshold, pass};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void FilterConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
  };
  if (face_count_range.first == 0 || face_count_range.first > face_count_range.second) {
    throw Error(ErrorCode::InvalidArgument, "face_count_range must be a positive ordered pair");
  }
  positive(vertex_face_ratio_max, "vertex_face_ratio_max");
  positive(narrow_angle_deg, "narrow_angle_deg");
  positive(narrow_face_frac_max, "narrow_face_frac_max");
  positive(static_cast<double>(bfs_displacement_max), "bfs_displacement_max");
  positive(static_cast<double>(boundary_len_max), "boundary_len_max");
  positive(static_cast<double>(components_max), "components_max");
  positive(static_cast<double>(prune_cluster_faces), "prune_cluster_faces");
  positive(prune_distance, "prune_distance");
  positive(merge_vertex_drop_max, "merge_vertex_drop_max");
  positive(bad_face_frac_max, "bad_face_frac_max");
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "bins must be at least 2");
}

FilterConfig FilterConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("filter config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::FormatError, "filter config must be a JSON object");

  FilterConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "face_count_range") {
        if (!v.is_array() || v.size() != 2) throw Error(ErrorCode::FormatError, "face_count_range must be [lo, hi]");
        c.face_count_range = {v[0].get<std::size_t>(), v[1].get<std::size_t>()};
      } else if (key == "vertex_face_ratio_max") {
        c.vertex_face_ratio_max = v.get<double>();
      } else if (key == "narrow_angle_deg") {
        c.narrow_angle_deg = v.get<double>();
      } else if (key == "narrow_face_frac_max") {
        c.narrow_face_frac_max = v.get<double>();
      } else if (key == "bfs_displacement_max") {
        c.bfs_displacement_max = v.get<std::int64_t>();
      } else if (key == "boundary_len_max") {
        c.boundary_len_max = v.get<std::size_t>();
      } else if (key == "components_max") {
        c.components_max = v.get<std::size_t>();
      } else if (key == "prune_cluster_faces") {
        c.prune_cluster_faces = v.get<std::size_t>();
      } else if (key == "prune_distance") {
        c.prune_distance = v.get<double>();
      } else if (key == "merge_vertex_drop_max") {
        c.merge_vertex_drop_max = v.get<double>();
      } else if (key == "bad_face_frac_max") {
        c.bad_face_frac_max = v.get<double>();
      } else if (key == "bins") {
        c.bins = v.get<int>();
      } else {
        throw Error(ErrorCode::FormatError, "unknown filter config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("filter config: ") + e.what());
  }
  c.validate();
  return c;
}

FilterConfig FilterConfig::load(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return from_json(std::string(bytes.begin(), bytes.end()));
}

std::string FilterConfig::to_json() const {
  json j = {{"face_count_range", {face_count_range.first, face_count_range.second}},
            {"vertex_face_ratio_max", vertex_face_ratio_max},
            {"narrow_angle_deg", narrow_angle_deg},
            {"narrow_face_frac_max", narrow_face_frac_max},
            {"bfs_displacement_max", bfs_displacement_max},
            {"boundary_len_max", boundary_len_max},
            {"components_max", components_max},
            {"prune_cluster_faces", prune_cluster_faces},
            {"prune_distance", prune_distance},
            {"merge_vertex_drop_max", merge_vertex_drop_max},
            {"bad_face_frac_max", bad_face_frac_max},
            {"bins", bins}};
  return j.dump(2);
}

const std::vector<std::string>& filter_check_names() {
  static const std::vector<std::string> names{"face_count", "vertex_face_ratio", "narrow_faces",  "components",
                                              "boundary",   "bfs_displacement",  "merge_drop",    "bad_faces"};
  return names;
}

const FilterCheck* FilterReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string FilterReport::to_json() const {
  json j;
  j["source"] = source;
  j["pass"] = pass;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}});
  }
  j["details"] = {{"faces", details.faces},
                  {"vertices", details.vertices},
                  {"narrow_faces", details.narrow_faces},
                  {"raw_components", details.raw_components},
                  {"pruned_clusters", details.pruned_clusters},
                  {"boundary_length", details.boundary_length},
                  {"max_root_distance", details.max_root_distance},
                  {"bad_faces", details.bad_faces},
                  {"preexisting_bad_faces", details.preexisting_bad_faces},
                  {"candidate_pairs", details.candidate_pairs}};
  j["seconds"] = seconds;
  return j.dump();
}

std::string FilterReport::csv_header() {
  std::string h = "source,pass";
  for (const auto& n : filter_check_names()) h += "," + n;
  return h;
}

std::string FilterReport::csv_row() const {
  std::ostringstream os;
  os.precision(10);
  os << csv_escape(source) << ',' << (pass ? 1 : 0);
  for (const auto& n : filter_check_names()) {
    os << ',';
    if (const auto* c = check(n)) os << c->value;
  }
  return os.str();
}

double min_angle_deg(const Vec3& a, const Vec3& b, const Vec3& c) {
  const std::array<Vec3, 3> p{a, b, c};
  double best = 180.0;
  for (int k = 0; k < 3; ++k) {
    const Vec3 u = minus(p[(k + 1) % 3], p[k]);
    const Vec3 v = minus(p[(k + 2) % 3], p[k]);
    const Vec3 x{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double angle = std::atan2(norm(x), u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) * 180.0 / std::numbers::pi;
    best = std::min(best, angle);
  }
  return best;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> bad_face_pairs(const QuantizedMesh& mesh,
                                                                    std::size_t* candidates) {
  const auto n = static_cast<std::uint32_t>(mesh.faces.size());
  std::vector<geom::LatticeTriangle> tris(n);
  std::vector<std::array<std::int64_t, 6>> boxes(n);
  std::vector<bool> live(n);
  double extent_sum = 0.0;
  std::size_t live_count = 0;
  for (std::uint32_t f = 0; f < n; ++f) {
    tris[f] = lattice_triangle(mesh, mesh.faces[f]);
    live[f] = !geom::degenerate(tris[f]);
    auto& b = boxes[f];
    for (int a = 0; a < 3; ++a) {
      b[a] = std::min({tris[f][0][a], tris[f][1][a], tris[f][2][a]});
      b[a + 3] = std::max({tris[f][0][a], tris[f][1][a], tris[f][2][a]});
    }
    if (live[f]) {
      extent_sum += static_cast<double>(std::max({b[3] - b[0], b[4] - b[1], b[5] - b[2]}));
      ++live_count;
    }
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (live_count < 2) return out;

  // Cell edge close to the mean face extent keeps both the per-face cell
  // count and the per-cell population small.
  const auto cell = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(extent_sum / live_count)));
  const std::int64_t dim = (mesh.bins + cell - 1) / cell + 1;
  auto cell_of = [&](std::int64_t x) { return x / cell; };

  std::vector<std::pair<std::uint64_t, std::uint32_t>> entries;
  for (std::uint32_t f = 0; f < n; ++f) {
    if (!live[f]) continue;
    const auto& b = boxes[f];
    for (auto z = cell_of(b[2]); z <= cell_of(b[5]); ++z) {
      for (auto y = cell_of(b[1]); y <= cell_of(b[4]); ++y) {
        for (auto x = cell_of(b[0]); x <= cell_of(b[3]); ++x) {
          entries.push_back({static_cast<std::uint64_t>((z * dim + y) * dim + x), f});
        }
      }
    }
  }
  std::sort(entries.begin(), entries.end());

  std::size_t tested = 0;
  for (std::size_t lo = 0; lo < entries.size();) {
    std::size_t hi = lo;
    while (hi < entries.size() && entries[hi].first == entries[lo].first) ++hi;
    const auto key = static_cast<std::int64_t>(entries[lo].first);
    const std::int64_t cx = key % dim;
    const std::int64_t cy = (key / dim) % dim;
    const std::int64_t cz = key / (dim * dim);
    for (std::size_t i = lo; i < hi; ++i) {
      for (std::size_t j = i + 1; j < hi; ++j) {
        const auto fa = entries[i].second;
        const auto fb = entries[j].second;
        const auto& a = boxes[fa];
        const auto& b = boxes[fb];
        bool overlap = true;
        std::array<std::int64_t, 3> first{};
        for (int k = 0; k < 3; ++k) {
          overlap = overlap && a[k] <= b[k + 3] && b[k] <= a[k + 3];
          first[k] = cell_of(std::max(a[k], b[k]));
        }
        // Each pair is handled once, in the lowest cell both boxes share.
        if (!overlap || first[0] != cx || first[1] != cy || first[2] != cz) continue;
        ++tested;
        if (geom::triangles_intersect(tris[fa], tris[fb])) out.push_back({std::min(fa, fb), std::max(fa, fb)});
      }
    }
    lo = hi;
  }
  std::sort(out.begin(), out.end());
  if (candidates) *candidates = tested;
  return out;
}

FilterReport filter_mesh(const RawMesh& raw, const FilterConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  FilterReport rep;
  auto& d = rep.details;

  const auto sanitized = sanitize(normalize_and_quantize(raw, cfg.bins));
  const auto prepared = prepare(sanitized);
  const QuantizedMesh& mesh = prepared.mesh;
  const HalfEdgeStructure he(mesh);
  const std::size_t F = mesh.faces.size();
  d.faces = F;
  d.vertices = mesh.vertices.size();

  rep.checks.push_back(make_check("face_count", static_cast<double>(F), static_cast<double>(cfg.face_count_range.second),
                                  F >= cfg.face_count_range.first && F <= cfg.face_count_range.second));

  const double ratio = static_cast<double>(d.vertices) / static_cast<double>(F);
  rep.checks.push_back(make_check("vertex_face_ratio", ratio, cfg.vertex_face_ratio_max, ratio <= cfg.vertex_face_ratio_max));

  for (const auto& f : mesh.faces) {
    const double angle = min_angle_deg(mesh.dequantize_vertex(f[0]), mesh.dequantize_vertex(f[1]), mesh.dequantize_vertex(f[2]));
    if (angle < cfg.narrow_angle_deg) ++d.narrow_faces;
  }
  const double narrow = static_cast<double>(d.narrow_faces) / static_cast<double>(F);
  rep.checks.push_back(make_check("narrow_faces", narrow, cfg.narrow_face_frac_max, narrow <= cfg.narrow_face_frac_max));

  // Edge-connected components, as traversed by the tokenizer.
  UnionFind uf(F);
  for (std::uint32_t h = 0; h < he.size(); ++h) {
    for (auto t : he.twins(h)) uf.unite(he[h].face, he[t].face);
  }
  std::vector<std::uint32_t> comp_of(F);
  std::vector<std::uint32_t> root_index(F, UINT32_MAX);
  std::vector<std::size_t> comp_faces;
  std::vector<Box> comp_box;
  std::vector<Vec3> comp_centroid_sum;
  for (std::uint32_t f = 0; f < F; ++f) {
    const auto r = uf.find(f);
    if (root_index[r] == UINT32_MAX) {
      root_index[r] = static_cast<std::uint32_t>(comp_faces.size());
      comp_faces.push_back(0);
      comp_box.emplace_back();
      comp_centroid_sum.push_back({0.0, 0.0, 0.0});
    }
    const auto c = comp_of[f] = root_index[r];
    ++comp_faces[c];
    for (auto v : mesh.faces[f]) {
      const Vec3 p = mesh.dequantize_vertex(v);
      comp_box[c].add(p);
      for (int a = 0; a < 3; ++a) comp_centroid_sum[c][a] += p[a] / 3.0;
    }
  }
  d.raw_components = comp_faces.size();
  std::size_t kept = 0;
  for (std::size_t c = 0; c < comp_faces.size(); ++c) {
    if (comp_faces[c] >= cfg.prune_cluster_faces) {
      ++kept;
      continue;
    }
    const double inv = 1.0 / static_cast<double>(comp_faces[c]);
    const Vec3 centroid{comp_centroid_sum[c][0] * inv, comp_centroid_sum[c][1] * inv, comp_centroid_sum[c][2] * inv};
    bool near_valid = false;
    for (std::size_t o = 0; o < comp_faces.size() && !near_valid; ++o) {
      near_valid = comp_faces[o] >= cfg.prune_cluster_faces && comp_box[o].distance(centroid) <= cfg.prune_distance;
    }
    if (near_valid) {
      ++d.pruned_clusters;
    } else {
      ++kept;
    }
  }
  rep.checks.push_back(make_check("components", static_cast<double>(kept), static_cast<double>(cfg.components_max),
                                  kept <= cfg.components_max));

  std::size_t boundary = 0;
  for (std::uint32_t h = 0; h < he.size(); ++h) {
    if (!he.twins(h).empty()) continue;
    ++boundary;
    d.boundary_length += norm(minus(mesh.dequantize_vertex(he.destination(h)), mesh.dequantize_vertex(he[h].origin)));
  }
  rep.checks.push_back(make_check("boundary", static_cast<double>(boundary), static_cast<double>(cfg.boundary_len_max),
                                  boundary <= cfg.boundary_len_max));

  const auto stats = compression_stats(tokenize(he, ControlVocab(cfg.bins)));
  d.max_root_distance = stats.max_root_distance;
  rep.checks.push_back(make_check("bfs_displacement", stats.max_delta, static_cast<double>(cfg.bfs_displacement_max),
                                  stats.max_delta < cfg.bfs_displacement_max));

  const double drop = prepared.sanitize_stats.vertex_drop_ratio();
  rep.checks.push_back(make_check("merge_drop", drop, cfg.merge_vertex_drop_max, drop <= cfg.merge_vertex_drop_max));

  // A face counts when it intersects or overlaps another face after
  // quantization while its source faces did not in the input mesh.
  const auto pairs = bad_face_pairs(sanitized.mesh, &d.candidate_pairs);
  std::vector<bool> introduced(sanitized.mesh.faces.size(), false);
  std::vector<bool> any(sanitized.mesh.faces.size(), false);
  for (const auto& [a, b] : pairs) {
    any[a] = any[b] = true;
    const auto ra = raw_triangle(raw, raw.faces[sanitized.face_source[a]]);
    const auto rb = raw_triangle(raw, raw.faces[sanitized.face_source[b]]);
    const bool before = !geom::degenerate(ra) && !geom::degenerate(rb) && geom::triangles_intersect(ra, rb);
    if (!before) introduced[a] = introduced[b] = true;
  }
  d.bad_faces = static_cast<std::size_t>(std::count(introduced.begin(), introduced.end(), true));
  d.preexisting_bad_faces = static_cast<std::size_t>(std::count(any.begin(), any.end(), true)) - d.bad_faces;
  const double bad = static_cast<double>(d.bad_faces) / static_cast<double>(F);
  rep.checks.push_back(make_check("bad_faces", bad, cfg.bad_face_frac_max, bad <= cfg.bad_face_frac_max));

  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const FilterCheck& c) { return c.pass; });
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace ripple
