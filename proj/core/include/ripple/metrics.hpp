#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ripple/mesh.hpp"

namespace ripple {

inline constexpr std::size_t kDefaultSamples = 1024;

struct SurfaceSamples {
  std::vector<Vec3> points;
  /// Unit normal of the face each point was drawn from.
  std::vector<Vec3> normals;
};

/// Area-weighted uniform surface sampling. Throws EmptyInput or
/// DegenerateGeometry (zero total area).
SurfaceSamples sample_surface(const RawMesh& mesh, std::size_t samples, std::uint64_t seed);

struct EvalOptions {
  std::size_t samples = kDefaultSamples;
  std::uint64_t seed = 0;
  /// Chamfer averages squared nearest distances; false averages plain distances.
  bool squared_chamfer = true;
};

struct EvalResult {
  /// Mean of the two directed nearest-neighbor averages, scaled by 1e3.
  double chamfer = 0.0;
  double hausdorff = 0.0;
  double normal_consistency = 0.0;
  std::size_t samples = 0;
  bool squared_chamfer = true;

  std::string to_json() const;
};

/// Both meshes are sampled with the same seed, in their own coordinates.
EvalResult evaluate(const RawMesh& pred, const RawMesh& gt, const EvalOptions& options = {});

}  // namespace ripple
