#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "../support/helpers.hpp"
#include "ripple/metrics.hpp"
#include "ripple/procedural.hpp"

using namespace ripple;
using support::throws_code;

namespace {

RawMesh flipped(RawMesh m) {
  for (auto& f : m.faces) std::swap(f[1], f[2]);
  return m;
}

}  // namespace

TEST(Sampling, PointsLieOnTheSurface) {
  const auto s = sample_surface(procedural::icosphere(2), 2000, 3);
  ASSERT_EQ(s.points.size(), 2000u);
  ASSERT_EQ(s.normals.size(), 2000u);
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    EXPECT_GT(r, 0.95);
    EXPECT_LE(r, 1.0 + 1e-12);
    const auto& n = s.normals[i];
    EXPECT_NEAR(n[0] * n[0] + n[1] * n[1] + n[2] * n[2], 1.0, 1e-12);
    EXPECT_GT(n[0] * p[0] + n[1] * p[1] + n[2] * p[2], 0.0);  // outward
  }
}

TEST(Sampling, AreaWeighted) {
  // Two triangles with areas 1:3; counts follow the ratio.
  RawMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {5, 0, 0}, {8, 0, 0}, {5, 1, 0}};
  m.faces = {{0, 1, 2}, {3, 4, 5}};
  const auto s = sample_surface(m, 40000, 9);
  std::size_t small = 0;
  for (const auto& p : s.points) small += p[0] < 2.0;
  EXPECT_NEAR(static_cast<double>(small) / 40000.0, 0.25, 0.01);
}

TEST(Sampling, Errors) {
  EXPECT_TRUE(throws_code([] { sample_surface(RawMesh{}, 10, 0); }, ErrorCode::EmptyInput));
  EXPECT_TRUE(throws_code([] { sample_surface(procedural::cube(), 0, 0); }, ErrorCode::InvalidArgument));
  RawMesh flat;
  flat.vertices = {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}};
  flat.faces = {{0, 1, 2}};
  EXPECT_TRUE(throws_code([&] { sample_surface(flat, 10, 0); }, ErrorCode::DegenerateGeometry));
}

TEST(Evaluate, SelfComparisonIsExact) {
  const auto m = procedural::torus(30, 12);
  const auto r = evaluate(m, m);
  EXPECT_EQ(r.chamfer, 0.0);
  EXPECT_EQ(r.hausdorff, 0.0);
  EXPECT_EQ(r.normal_consistency, 1.0);
  EXPECT_EQ(r.samples, kDefaultSamples);
}

TEST(Evaluate, TranslationShowsUpInHausdorff) {
  const auto m = procedural::icosphere(2);
  for (double t : {0.01, 0.05, 0.2}) {
    const auto r = evaluate(procedural::translated(m, {t, 0, 0}), m);
    EXPECT_NEAR(r.hausdorff, t, 0.02 * t);
    EXPECT_GT(r.chamfer, 0.0);
    EXPECT_GT(r.normal_consistency, 0.9);
  }
}

TEST(Evaluate, ChamferScalingAndSymmetry) {
  const auto a = procedural::icosphere(2);
  const auto b = procedural::translated(a, {0.1, 0.0, 0.0});
  const auto ab = evaluate(a, b), ba = evaluate(b, a);
  EXPECT_DOUBLE_EQ(ab.chamfer, ba.chamfer);
  EXPECT_DOUBLE_EQ(ab.hausdorff, ba.hausdorff);
  EXPECT_DOUBLE_EQ(ab.normal_consistency, ba.normal_consistency);
  // Squared nearest distances are bounded by t^2 each way.
  EXPECT_LE(ab.chamfer, 0.1 * 0.1 * 1e3 + 1e-9);
  EvalOptions plain;
  plain.squared_chamfer = false;
  const auto p = evaluate(a, b, plain);
  EXPECT_FALSE(p.squared_chamfer);
  EXPECT_GT(p.chamfer, ab.chamfer);
  EXPECT_LE(p.chamfer, 0.1 * 1e3 + 1e-9);
}

TEST(Evaluate, FlippedWindingGivesNegativeConsistency) {
  const auto m = procedural::icosphere(2);
  // Reversed winding reorders barycentric samples, so points shift slightly
  // and a few nearest neighbours land on adjacent faces.
  const auto r = evaluate(flipped(m), m);
  EXPECT_LT(r.normal_consistency, -0.99);
  EXPECT_GT(evaluate(m, m).normal_consistency, 0.99);
}

TEST(Evaluate, JsonKeys) {
  EvalOptions o;
  o.samples = 256;
  const auto r = evaluate(procedural::cube(), procedural::cube(), o);
  const auto j = nlohmann::json::parse(r.to_json());
  for (const char* key : {"CD", "HD", "NC", "samples", "cd_scale", "cd_squared"}) EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["samples"], 256);
  EXPECT_EQ(j["cd_scale"], 1000.0);
  EXPECT_TRUE(throws_code([] { evaluate(RawMesh{}, procedural::cube()); }, ErrorCode::EmptyInput));
}
