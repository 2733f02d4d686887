#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "../support/generators.hpp"
#include "../support/helpers.hpp"
#include "ripple/filter.hpp"
#include "ripple/geometry.hpp"
#include "ripple/procedural.hpp"

using namespace ripple;
using support::throws_code;

namespace {

// Each face gets its own copy of its vertices.
RawMesh unwelded(const RawMesh& m) {
  RawMesh out;
  for (const auto& f : m.faces) {
    const auto base = static_cast<std::uint32_t>(out.vertices.size());
    for (auto v : f) out.vertices.push_back(m.vertices[v]);
    out.faces.push_back({base, base + 1, base + 2});
  }
  return out;
}

RawMesh with_triangles(RawMesh m, const std::vector<std::array<Vec3, 3>>& tris) {
  for (const auto& t : tris) {
    const auto base = static_cast<std::uint32_t>(m.vertices.size());
    for (const auto& p : t) m.vertices.push_back(p);
    m.faces.push_back({base, base + 1, base + 2});
  }
  return m;
}

RawMesh lifted_grid(int n, double z) {
  auto g = procedural::grid_patch(n, n);
  for (auto& v : g.vertices) v[2] = z;
  return g;
}

const FilterCheck& get(const FilterReport& r, const std::string& name) {
  const auto* c = r.check(name);
  if (!c) throw std::runtime_error("missing check " + name);
  return *c;
}

}  // namespace

TEST(Filter, ChecksInOrderAndCleanMeshPasses) {
  const auto rep = filter_mesh(procedural::icosphere(3));
  ASSERT_EQ(rep.checks.size(), filter_check_names().size());
  for (std::size_t i = 0; i < rep.checks.size(); ++i) EXPECT_EQ(rep.checks[i].name, filter_check_names()[i]);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.details.faces, 1280u);
  EXPECT_EQ(rep.details.vertices, 642u);
  EXPECT_DOUBLE_EQ(get(rep, "vertex_face_ratio").value, 642.0 / 1280.0);
  EXPECT_EQ(get(rep, "boundary").value, 0.0);
  EXPECT_EQ(get(rep, "components").value, 1.0);
  EXPECT_EQ(rep.details.bad_faces, 0u);
  EXPECT_GT(rep.details.candidate_pairs, 0u);
}

TEST(Filter, SmallMeshFailsFaceCountOnly) {
  const auto rep = filter_mesh(procedural::grid_patch(10, 20));
  EXPECT_FALSE(rep.pass);
  EXPECT_EQ(get(rep, "face_count").value, 400.0);
  EXPECT_FALSE(get(rep, "face_count").pass);
  EXPECT_TRUE(get(rep, "narrow_faces").pass);
  EXPECT_TRUE(get(rep, "bad_faces").pass);
}

TEST(Filter, AllChecksEvaluatedEvenAfterFailure) {
  // Fails vertex ratio and boundary at once.
  const auto rep = filter_mesh(procedural::grid_patch(250, 1));
  EXPECT_EQ(rep.checks.size(), filter_check_names().size());
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(get(rep, "vertex_face_ratio").pass);
  EXPECT_EQ(get(rep, "boundary").value, 502.0);
  EXPECT_FALSE(get(rep, "boundary").pass);
}

TEST(Filter, NarrowFaceFraction) {
  // Fan around a point close to the bottom edge: one of four faces is a sliver.
  RawMesh m;
  const double qy = 0.5 * std::tan(3.0 * std::numbers::pi / 180.0);
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0.5, qy, 0}};
  m.faces = {{0, 1, 4}, {1, 2, 4}, {2, 3, 4}, {3, 0, 4}};
  const auto rep = filter_mesh(m);
  EXPECT_EQ(rep.details.narrow_faces, 1u);
  EXPECT_DOUBLE_EQ(get(rep, "narrow_faces").value, 0.25);
  EXPECT_FALSE(get(rep, "narrow_faces").pass);
  EXPECT_NEAR(min_angle_deg({0, 0, 0}, {1, 0, 0}, {0.5, qy, 0}), 3.0, 1e-9);
  EXPECT_EQ(min_angle_deg({0, 0, 0}, {1, 1, 1}, {2, 2, 2}), 0.0);
}

TEST(Filter, ComponentsCountAndPruning) {
  std::vector<RawMesh> parts;
  for (int i = 0; i < 25; ++i) parts.push_back(procedural::translated(procedural::icosphere(0, 0.3), {i * 1.0, 0, 0}));
  const auto many = filter_mesh(procedural::concatenated(parts));
  EXPECT_EQ(get(many, "components").value, 25.0);
  EXPECT_FALSE(get(many, "components").pass);

  // Three specks hovering just above a grid are pruned, a distant one is not.
  auto m = lifted_grid(20, 0.0);
  m = with_triangles(m, {{{{0.2, 0.2, 0.02}, {0.25, 0.2, 0.02}, {0.2, 0.25, 0.02}}},
                         {{{0.5, 0.5, 0.02}, {0.55, 0.5, 0.02}, {0.5, 0.55, 0.02}}},
                         {{{0.7, 0.2, 0.03}, {0.75, 0.2, 0.03}, {0.7, 0.25, 0.03}}},
                         {{{0.5, 0.5, 0.6}, {0.55, 0.5, 0.6}, {0.5, 0.55, 0.6}}}});
  const auto rep = filter_mesh(m);
  EXPECT_EQ(rep.details.raw_components, 5u);
  EXPECT_EQ(rep.details.pruned_clusters, 3u);
  EXPECT_EQ(get(rep, "components").value, 2.0);
}

TEST(Filter, MergeDropFailsOnTriangleSoup) {
  const auto ico = procedural::icosphere(3);
  const auto rep = filter_mesh(unwelded(ico));
  EXPECT_NEAR(get(rep, "merge_drop").value, 1.0 - 642.0 / (3.0 * 1280.0), 1e-12);
  EXPECT_FALSE(get(rep, "merge_drop").pass);
  EXPECT_TRUE(get(filter_mesh(ico), "merge_drop").pass);
}

TEST(Filter, DisplacementMatchesTokenizerStats) {
  for (const auto& e : support::prepared_corpus()) {
    if (e.mesh.faces.size() < 500) continue;
    const auto stats = compression_stats(e.sequence);
    const auto rep = filter_mesh(procedural::corpus()[&e - support::prepared_corpus().data()].mesh);
    EXPECT_EQ(get(rep, "bfs_displacement").value, stats.max_delta) << e.name;
    EXPECT_EQ(get(rep, "bfs_displacement").pass, stats.max_delta < 100) << e.name;
    EXPECT_EQ(rep.details.max_root_distance, stats.max_root_distance) << e.name;
  }
}

TEST(Filter, QuantizationIntroducedOverlaps) {
  // Two stacked triangles 0.0005 apart collapse into the same z bin and
  // overlap; 2 of 20 faces is exactly the limit.
  auto m = with_triangles(lifted_grid(3, 1.0), {{{{0.2, 0.2, 0.30}, {0.6, 0.2, 0.30}, {0.2, 0.6, 0.30}}},
                                                {{{0.3, 0.3, 0.3005}, {0.7, 0.3, 0.3005}, {0.3, 0.7, 0.3005}}}});
  const auto rep = filter_mesh(m);
  EXPECT_EQ(rep.details.bad_faces, 2u);
  EXPECT_EQ(rep.details.preexisting_bad_faces, 0u);
  EXPECT_DOUBLE_EQ(get(rep, "bad_faces").value, 0.10);
  EXPECT_TRUE(get(rep, "bad_faces").pass);

  // Crossing in the input already: not blamed on quantization.
  auto crossing = with_triangles(lifted_grid(3, 1.0), {{{{0.2, 0.2, 0.2}, {0.8, 0.2, 0.2}, {0.2, 0.8, 0.2}}},
                                                       {{{0.3, 0.3, 0.0}, {0.3, 0.3, 0.5}, {0.35, 0.4, 0.5}}}});
  const auto rep2 = filter_mesh(crossing);
  EXPECT_EQ(rep2.details.bad_faces, 0u);
  EXPECT_EQ(rep2.details.preexisting_bad_faces, 2u);
}

TEST(Filter, SpatialHashFindsEveryPair) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    QuantizedMesh q;
    try {
      q = sanitize(normalize_and_quantize(gen::random_soup(rng, 120, 60), 64)).mesh;
    } catch (const Error&) {
      continue;
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> expected;
    auto lattice = [&](std::uint32_t f) {
      geom::LatticeTriangle t;
      for (int k = 0; k < 3; ++k) {
        for (int a = 0; a < 3; ++a) t[k][a] = q.vertices[q.faces[f][k]][a];
      }
      return t;
    };
    for (std::uint32_t a = 0; a < q.faces.size(); ++a) {
      for (std::uint32_t b = a + 1; b < q.faces.size(); ++b) {
        const auto ta = lattice(a), tb = lattice(b);
        if (geom::degenerate(ta) || geom::degenerate(tb)) continue;
        if (geom::triangles_intersect(ta, tb)) expected.push_back({a, b});
      }
    }
    std::size_t tested = 0;
    EXPECT_EQ(bad_face_pairs(q, &tested), expected);
    EXPECT_GE(tested, expected.size());
  }
}

TEST(Filter, DeterministicRows) {
  const auto m = procedural::torus(40, 20);
  const auto a = filter_mesh(m), b = filter_mesh(m);
  EXPECT_EQ(a.csv_row(), b.csv_row());
  EXPECT_EQ(FilterReport::csv_header().find("seconds"), std::string::npos);
}

TEST(FilterConfig, JsonRoundTripAndValidation) {
  FilterConfig c;
  c.components_max = 7;
  c.prune_distance = 0.1;
  c.face_count_range = {10, 99};
  const auto back = FilterConfig::from_json(c.to_json());
  EXPECT_EQ(back.components_max, 7u);
  EXPECT_DOUBLE_EQ(back.prune_distance, 0.1);
  EXPECT_EQ(back.face_count_range, (std::pair<std::size_t, std::size_t>{10, 99}));
  EXPECT_EQ(back.to_json(), c.to_json());

  const auto partial = FilterConfig::from_json(R"({"narrow_angle_deg": 2.5})");
  EXPECT_DOUBLE_EQ(partial.narrow_angle_deg, 2.5);
  EXPECT_EQ(partial.components_max, FilterConfig{}.components_max);

  EXPECT_TRUE(throws_code([] { FilterConfig::from_json(R"({"colour": 1})"); }, ErrorCode::FormatError));
  EXPECT_TRUE(throws_code([] { FilterConfig::from_json("[1, 2]"); }, ErrorCode::FormatError));
  EXPECT_TRUE(throws_code([] { FilterConfig::from_json("{"); }, ErrorCode::FormatError));
  EXPECT_TRUE(throws_code([] { FilterConfig::from_json(R"({"bins": "x"})"); }, ErrorCode::FormatError));
  EXPECT_TRUE(throws_code([] { FilterConfig::load("/nonexistent/filters.json"); }, ErrorCode::IoError));

  FilterConfig bad;
  bad.bad_face_frac_max = -1;
  EXPECT_TRUE(throws_code([&] { bad.validate(); }, ErrorCode::InvalidArgument));
  bad = {};
  bad.face_count_range = {100, 10};
  EXPECT_TRUE(throws_code([&] { filter_mesh(procedural::cube(), bad); }, ErrorCode::InvalidArgument));
}
