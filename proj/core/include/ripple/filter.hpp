#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ripple/mesh.hpp"

namespace ripple {

struct FilterConfig {
  std::pair<std::size_t, std::size_t> face_count_range{500, 20000};
  double vertex_face_ratio_max = 0.8;
  double narrow_angle_deg = 5.0;
  double narrow_face_frac_max = 0.20;
  /// Pass iff max offset < this, so the offsets fit a head of this many classes.
  std::int64_t bfs_displacement_max = 100;
  std::size_t boundary_len_max = 500;
  std::size_t components_max = 20;
  std::size_t prune_cluster_faces = 10;
  double prune_distance = 0.05;
  double merge_vertex_drop_max = 0.50;
  double bad_face_frac_max = 0.10;
  int bins = kDefaultBins;

  /// Throws InvalidArgument on non-positive thresholds or an unordered range.
  void validate() const;

  static FilterConfig from_json(const std::string& text);
  static FilterConfig load(const std::string& path);
  std::string to_json() const;
};

struct FilterCheck {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Quantities measured along the way that are not themselves checked.
struct FilterDetails {
  std::size_t faces = 0;
  std::size_t vertices = 0;
  std::size_t narrow_faces = 0;
  std::size_t raw_components = 0;
  std::size_t pruned_clusters = 0;
  double boundary_length = 0.0;
  std::uint32_t max_root_distance = 0;
  std::size_t bad_faces = 0;
  std::size_t preexisting_bad_faces = 0;
  std::size_t candidate_pairs = 0;
};

struct FilterReport {
  std::string source;
  bool pass = false;
  std::vector<FilterCheck> checks;
  FilterDetails details;
  double seconds = 0.0;

  const FilterCheck* check(const std::string& name) const;
  std::string to_json() const;

  static std::string csv_header();
  std::string csv_row() const;
};

/// Check names in evaluation order.
const std::vector<std::string>& filter_check_names();

FilterReport filter_mesh(const RawMesh& raw, const FilterConfig& cfg = {});

/// Pairs of faces of a lattice mesh whose interiors intersect or, when
/// coplanar, overlap. Zero-area faces are skipped. Candidates come from a
/// uniform spatial hash; `candidates` receives the number of pairs tested.
std::vector<std::pair<std::uint32_t, std::uint32_t>> bad_face_pairs(const QuantizedMesh& mesh,
                                                                    std::size_t* candidates = nullptr);

/// Smallest interior angle of a triangle in degrees; 0 for collinear points.
double min_angle_deg(const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace ripple
