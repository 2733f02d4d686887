#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "../oracles/frontier_oracle.hpp"
#include "../support/helpers.hpp"
#include "ripple/half_edge.hpp"
#include "ripple/procedural.hpp"
#include "ripple/tokenizer.hpp"

using namespace ripple;
using support::prepared_corpus;
using support::throws_code;

TEST(HalfEdge, TwinsMatchBruteForce) {
  for (const auto& e : prepared_corpus()) {
    const HalfEdgeStructure he(e.mesh);
    const auto adj = oracle::brute_force_adjacency(e.mesh);
    ASSERT_EQ(he.size(), 3 * e.mesh.faces.size());
    std::size_t boundary = 0;
    for (std::uint32_t f = 0; f < e.mesh.faces.size(); ++f) {
      for (std::uint32_t k = 0; k < 3; ++k) {
        const std::uint32_t h = 3 * f + k;
        EXPECT_EQ(he[h].origin, e.mesh.faces[f][k]);
        EXPECT_EQ(he[h].face, f);
        EXPECT_EQ(he.destination(h), e.mesh.faces[f][(k + 1) % 3]);
        EXPECT_EQ(he[he[h].next].prev, h);
        std::vector<std::uint32_t> expected;
        for (const auto& nb : adj[f][k]) expected.push_back(3 * nb.face + nb.edge);
        const auto twins = he.twins(h);
        EXPECT_EQ(std::vector<std::uint32_t>(twins.begin(), twins.end()), expected) << e.name;
        boundary += expected.empty();
      }
    }
    EXPECT_EQ(he.boundary_count(), boundary) << e.name;
  }
}

TEST(HalfEdge, NonManifoldSpineHasSeveralTwins) {
  const auto mesh = prepare(procedural::nonmanifold_book(5)).mesh;
  const HalfEdgeStructure he(mesh);
  std::size_t max_twins = 0;
  for (std::uint32_t h = 0; h < he.size(); ++h) max_twins = std::max(max_twins, he.twins(h).size());
  EXPECT_GE(max_twins, 2u);
}

TEST(HalfEdge, OpenCylinderBoundary) {
  const auto mesh = prepare(procedural::open_cylinder(16, 4)).mesh;
  EXPECT_EQ(HalfEdgeStructure(mesh).boundary_count(), 32u);
}

TEST(Vocab, LayoutAndControlTable) {
  const ControlVocab v(256, {"N", "chair", "table"});
  EXPECT_EQ(v.bos(), 256);
  EXPECT_EQ(v.eos(), 257);
  EXPECT_EQ(v.pad(), 258);
  EXPECT_EQ(v.separator(0), 259);
  EXPECT_EQ(v.separator(2), 261);
  EXPECT_EQ(v.size(), 262u);
  EXPECT_TRUE(v.is_coordinate(255));
  EXPECT_FALSE(v.is_coordinate(256));
  EXPECT_TRUE(v.is_separator(260));
  EXPECT_EQ(v.label(260), "chair");
  EXPECT_EQ(ControlVocab::from_control_table(256, v.control_table()), v);
  EXPECT_TRUE(throws_code([] { ControlVocab(256, {"a", "a"}); }, ErrorCode::InvalidArgument));
  EXPECT_TRUE(throws_code([] { ControlVocab(256, {}); }, ErrorCode::InvalidArgument));
  EXPECT_TRUE(throws_code([&] { v.separator(3); }, ErrorCode::InvalidArgument));
}

TEST(Tokenize, SingleTriangle) {
  RawMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  m.faces = {{0, 1, 2}};
  const ControlVocab vocab;
  const auto seq = tokenize(HalfEdgeStructure(prepare(m).mesh), vocab);
  ASSERT_EQ(seq.tokens.size(), 12u);
  EXPECT_EQ(seq.tokens.front(), vocab.bos());
  EXPECT_EQ(seq.tokens[1], vocab.separator(0));
  EXPECT_EQ(seq.tokens.back(), vocab.eos());
  EXPECT_EQ(seq.delta, std::vector<std::int32_t>{kSeedDelta});
  EXPECT_TRUE(seq.frontier(0).empty());
}

TEST(Tokenize, MatchesQueueSimulation) {
  const ControlVocab vocab;
  for (const auto& e : prepared_corpus()) {
    const auto& seq = e.sequence;
    const auto sim = oracle::simulate(e.mesh, vocab);
    EXPECT_EQ(seq.tokens, sim.tokens) << e.name;
    EXPECT_EQ(seq.root, sim.root) << e.name;
    EXPECT_EQ(seq.delta, sim.delta) << e.name;
    for (std::size_t i = 0; i < seq.face_count(); ++i) {
      const auto b = seq.frontier(i);
      std::vector<std::uint32_t> interval;
      for (auto j = b.head; j < b.end; ++j) interval.push_back(j);
      ASSERT_EQ(interval, sim.queue[i]) << e.name << " face " << i;
      if (!seq.is_seed(i)) {
        EXPECT_EQ(seq.root[i], sim.queue[i].front());
        EXPECT_GE(seq.delta[i], 0);
      }
    }
  }
}

TEST(Tokenize, StructuralCounts) {
  const ControlVocab vocab;
  for (const auto& e : prepared_corpus()) {
    const auto& seq = e.sequence;
    const std::size_t controls = static_cast<std::size_t>(std::count_if(
        seq.tokens.begin(), seq.tokens.end(), [&](Token t) { return !vocab.is_coordinate(t); }));
    EXPECT_EQ(seq.tokens.size(), 9 * e.mesh.faces.size() + controls);
    EXPECT_EQ(controls, seq.component_count() + 2);
    EXPECT_EQ(seq.control_count(), controls);
    EXPECT_EQ(seq.face_count(), e.mesh.faces.size());
    for (auto t : seq.tokens) {
      if (vocab.is_coordinate(t)) {
        EXPECT_LT(t, 256);
      }
    }
    for (std::size_t i = 0; i < seq.face_count(); ++i) {
      EXPECT_EQ(seq.face_of_token(seq.face_offset[i] + 8), i);
    }
    EXPECT_FALSE(seq.face_of_token(0).has_value());
  }
}

TEST(Tokenize, EveryFaceOnceAndDetokenizeRecoversMesh) {
  const ControlVocab vocab;
  for (const auto& e : prepared_corpus()) {
    const auto back = detokenize(e.sequence, vocab);
    EXPECT_EQ(canonical_sort(back.mesh), e.mesh) << e.name;
    EXPECT_EQ(back.component_separator.size(), e.sequence.component_count());
  }
}

TEST(Tokenize, ComponentsMatchAssemblyCount) {
  const ControlVocab vocab;
  for (int k = 2; k <= 20; k += 6) {
    const auto mesh = prepare(procedural::assembly(k, 5)).mesh;
    const auto seq = tokenize(HalfEdgeStructure(mesh), vocab);
    EXPECT_EQ(seq.component_count(), static_cast<std::size_t>(k));
  }
  // Vertex-joined cones are two edge components.
  const auto cone = tokenize(HalfEdgeStructure(prepare(procedural::double_cone(8)).mesh), vocab);
  EXPECT_EQ(cone.component_count(), 2u);
}

TEST(Tokenize, SemanticSeparators) {
  const ControlVocab vocab(256, {"N", "chair", "lamp"});
  const auto mesh = prepare(procedural::assembly(3, 9)).mesh;
  const std::vector<std::uint16_t> seps{1, 2, 1};
  const auto seq = tokenize(HalfEdgeStructure(mesh), vocab, seps);
  const auto back = detokenize(seq, vocab);
  EXPECT_EQ(back.component_labels, (std::vector<std::string>{"chair", "lamp", "chair"}));
  EXPECT_TRUE(throws_code([&] { tokenize(HalfEdgeStructure(mesh), ControlVocab(128)); }, ErrorCode::InvalidArgument));
}

TEST(Detokenize, Errors) {
  const ControlVocab v;
  const Token B = v.bos(), E = v.eos(), N = v.separator(0), P = v.pad();
  using T = std::vector<Token>;
  auto code = [&](const T& t, ErrorCode c) { return throws_code([&] { detokenize(t, v); }, c); };
  EXPECT_TRUE(code(T{}, ErrorCode::MalformedSequence));
  EXPECT_TRUE(code(T{N, 1, 2, 3, 4, 5, 6, 7, 8, 9, E}, ErrorCode::MalformedSequence));
  EXPECT_TRUE(code(T{B, N, 1, 2, 3, 4, 5, 6, 7, 8, 9}, ErrorCode::MalformedSequence));
  EXPECT_TRUE(code(T{B, N, 1, 2, 3, 4, 5, 6, 7, 8, 9, E, N}, ErrorCode::MalformedSequence));
  EXPECT_TRUE(code(T{B, 1, 2, 3, 4, 5, 6, 7, 8, 9, E}, ErrorCode::MissingSeparator));
  EXPECT_TRUE(code(T{B, N, 1, 2, 3, 4, 5, 6, 7, 8, E}, ErrorCode::TruncatedFace));
  EXPECT_TRUE(code(T{B, N, 1, 2, 3, 4, 5, 6, 7, 8, 9, 999, E}, ErrorCode::UnknownToken));
  EXPECT_TRUE(code(T{B, N, 1, 2, 3, 4, 5, 6, 7, 8, 9, P, E}, ErrorCode::MalformedSequence));
  EXPECT_TRUE(code(T{B, N, N, 1, 2, 3, 4, 5, 6, 7, 8, 9, E}, ErrorCode::MalformedSequence));
  EXPECT_TRUE(code(T{B, N, E}, ErrorCode::MalformedSequence));
  EXPECT_NO_THROW(detokenize(T{B, N, 1, 2, 3, 4, 5, 6, 7, 8, 9, E}, v));
}

TEST(Window, SplitsPadsAndCarriesSeparators) {
  const ControlVocab vocab;
  const auto mesh = prepare(procedural::torus(50, 25)).mesh;  // 2500 faces
  const auto seq = tokenize(HalfEdgeStructure(mesh), vocab);
  const auto ws = window(seq, 1000, vocab);
  ASSERT_EQ(ws.size(), 3u);
  EXPECT_EQ(ws[2].first_face, 2000u);
  EXPECT_EQ(ws[2].face_count, 500u);
  EXPECT_EQ(ws[2].tokens.size(), 9000u);
  EXPECT_TRUE(std::all_of(ws[2].tokens.begin() + 4500, ws[2].tokens.end(), [&](Token t) { return t == vocab.pad(); }));
  EXPECT_EQ(ws[0].separator[0], vocab.separator(0));
  EXPECT_EQ(ws[0].separator[1], -1);
  for (const auto& w : ws) {
    for (std::uint32_t k = 0; k < w.face_count; ++k) {
      EXPECT_EQ(w.root[k], seq.root[w.first_face + k]);
      EXPECT_TRUE(std::equal(w.tokens.begin() + 9 * k, w.tokens.begin() + 9 * k + 9,
                             seq.tokens.begin() + seq.face_offset[w.first_face + k]));
    }
  }
  const auto one = window(seq, 5000, vocab);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].slots, 5000u);
  EXPECT_TRUE(throws_code([&] { window(seq, 0, vocab); }, ErrorCode::InvalidArgument));
}

TEST(Stats, CompressionStats) {
  const auto& e = prepared_corpus().front();
  const auto s = compression_stats(e.sequence);
  EXPECT_EQ(s.faces, e.mesh.faces.size());
  EXPECT_EQ(s.tokens, e.sequence.tokens.size());
  EXPECT_NEAR(s.tokens_per_face, static_cast<double>(s.tokens) / s.faces, 1e-12);
  std::size_t total = 0;
  for (const auto& [size, count] : s.frontier_histogram) total += count;
  EXPECT_EQ(total, s.faces);
  std::uint32_t worst = 0;
  for (std::size_t i = 0; i < s.faces; ++i) {
    if (!e.sequence.is_seed(i)) worst = std::max<std::uint32_t>(worst, i - e.sequence.root[i]);
  }
  EXPECT_EQ(s.max_root_distance, worst);
}
