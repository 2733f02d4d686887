#include "ripple/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>

#include "ripple/error.hpp"

namespace ripple {

namespace {

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double dot(const Vec3& u, const Vec3& v) { return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]; }

double dist2(const Vec3& a, const Vec3& b) {
  const double x = a[0] - b[0];
  const double y = a[1] - b[1];
  const double z = a[2] - b[2];
  return x * x + y * y + z * z;
}

struct Directed {
  double mean = 0.0;
  double max = 0.0;
  double cosine_sum = 0.0;
};

// Brute-force nearest neighbors from `from` into `to`; the first minimum wins.
Directed directed(const SurfaceSamples& from, const SurfaceSamples& to, bool squared) {
  Directed out;
  for (std::size_t i = 0; i < from.points.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < to.points.size(); ++j) {
      const double d = dist2(from.points[i], to.points[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    out.mean += squared ? best : std::sqrt(best);
    out.max = std::max(out.max, std::sqrt(best));
    const auto& a = from.normals[i];
    const auto& b = to.normals[arg];
    out.cosine_sum += dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
  }
  out.mean /= static_cast<double>(from.points.size());
  return out;
}

}  // namespace

SurfaceSamples sample_surface(const RawMesh& mesh, std::size_t samples, std::uint64_t seed) {
  if (mesh.faces.empty()) throw Error(ErrorCode::EmptyInput, "mesh has no faces to sample");
  if (samples == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  mesh.validate();

  std::vector<double> cumulative(mesh.faces.size());
  std::vector<Vec3> normals(mesh.faces.size());
  double total = 0.0;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const auto& a = mesh.vertices[mesh.faces[f][0]];
    const auto& b = mesh.vertices[mesh.faces[f][1]];
    const auto& c = mesh.vertices[mesh.faces[f][2]];
    const Vec3 n = cross({b[0] - a[0], b[1] - a[1], b[2] - a[2]}, {c[0] - a[0], c[1] - a[1], c[2] - a[2]});
    const double len = std::sqrt(dot(n, n));
    total += 0.5 * len;
    cumulative[f] = total;
    normals[f] = len > 0.0 ? Vec3{n[0] / len, n[1] / len, n[2] / len} : Vec3{0.0, 0.0, 0.0};
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::DegenerateGeometry, "mesh has zero surface area");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SurfaceSamples out;
  out.points.reserve(samples);
  out.normals.reserve(samples);
  for (std::size_t s = 0; s < samples; ++s) {
    const double pick = unit(rng) * total;
    auto f = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pick) - cumulative.begin());
    f = std::min(f, mesh.faces.size() - 1);
    const double r1 = std::sqrt(unit(rng));
    const double r2 = unit(rng);
    const double wa = 1.0 - r1;
    const double wb = r1 * (1.0 - r2);
    const double wc = r1 * r2;
    const auto& a = mesh.vertices[mesh.faces[f][0]];
    const auto& b = mesh.vertices[mesh.faces[f][1]];
    const auto& c = mesh.vertices[mesh.faces[f][2]];
    out.points.push_back({wa * a[0] + wb * b[0] + wc * c[0], wa * a[1] + wb * b[1] + wc * c[1],
                          wa * a[2] + wb * b[2] + wc * c[2]});
    out.normals.push_back(normals[f]);
  }
  return out;
}

EvalResult evaluate(const RawMesh& pred, const RawMesh& gt, const EvalOptions& options) {
  const auto p = sample_surface(pred, options.samples, options.seed);
  const auto q = sample_surface(gt, options.samples, options.seed);
  const auto pq = directed(p, q, options.squared_chamfer);
  const auto qp = directed(q, p, options.squared_chamfer);

  EvalResult r;
  r.samples = options.samples;
  r.squared_chamfer = options.squared_chamfer;
  r.chamfer = 0.5 * (pq.mean + qp.mean) * 1e3;
  r.hausdorff = std::max(pq.max, qp.max);
  r.normal_consistency = (pq.cosine_sum + qp.cosine_sum) / static_cast<double>(2 * options.samples);
  return r;
}

std::string EvalResult::to_json() const {
  nlohmann::json j = {{"CD", chamfer},
                      {"HD", hausdorff},
                      {"NC", normal_consistency},
                      {"samples", samples},
                      {"cd_scale", 1000},
                      {"cd_squared", squared_chamfer}};
  return j.dump();
}

}  // namespace ripple
