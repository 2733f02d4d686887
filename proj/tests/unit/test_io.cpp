#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "../support/helpers.hpp"
#include "ripple/binary_io.hpp"
#include "ripple/mesh_io.hpp"
#include "ripple/procedural.hpp"
#include "ripple/ripl_format.hpp"

using namespace ripple;
using support::throws_code;

namespace fs = std::filesystem;

TEST(Ripl, RoundTripsEveryCorpusMesh) {
  const ControlVocab vocab;
  for (const auto& e : support::prepared_corpus()) {
    const auto bytes = encode_ripl(e.sequence, vocab);
    const auto file = decode_ripl(bytes);
    EXPECT_EQ(file.vocab, vocab);
    EXPECT_EQ(file.sequence.tokens, e.sequence.tokens);
    EXPECT_EQ(file.sequence.root, e.sequence.root);
    EXPECT_EQ(file.sequence.delta, e.sequence.delta);
    EXPECT_EQ(file.sequence.frontier_head, e.sequence.frontier_head);
    EXPECT_EQ(file.sequence.face_offset, e.sequence.face_offset);
    EXPECT_EQ(file.sequence.component_seed, e.sequence.component_seed);
    EXPECT_EQ(encode_ripl(file.sequence, file.vocab), bytes);
  }
}

TEST(Ripl, HeaderLayout) {
  const ControlVocab vocab(256, {"N", "sofa"});
  const auto& seq = support::prepared_corpus().front().sequence;
  const auto bytes = encode_ripl(seq, vocab);
  ASSERT_GT(bytes.size(), 8u);
  // magic is little-endian 0x5249504C
  EXPECT_EQ(bytes[0], 0x4C);
  EXPECT_EQ(bytes[1], 0x50);
  EXPECT_EQ(bytes[2], 0x49);
  EXPECT_EQ(bytes[3], 0x52);
  ByteReader r(bytes);
  EXPECT_EQ(r.get<std::uint32_t>(), kRiplMagic);
  EXPECT_EQ(r.get<std::uint16_t>(), kRiplVersion);
  EXPECT_EQ(r.get<std::uint16_t>(), 256);
  EXPECT_EQ(r.get<std::uint16_t>(), 5);
  EXPECT_EQ(decode_ripl(bytes).vocab, vocab);
}

TEST(Ripl, RejectsCorruption) {
  const ControlVocab vocab;
  const auto bytes = encode_ripl(support::prepared_corpus().front().sequence, vocab);
  auto bad_magic = bytes;
  bad_magic[0] ^= 0xFF;
  EXPECT_TRUE(throws_code([&] { decode_ripl(bad_magic); }, ErrorCode::FormatError));
  std::vector<std::uint8_t> truncated(bytes.begin(), bytes.end() - 3);
  EXPECT_TRUE(throws_code([&] { decode_ripl(truncated); }, ErrorCode::FormatError));
  auto trailing = bytes;
  trailing.push_back(0);
  EXPECT_TRUE(throws_code([&] { decode_ripl(trailing); }, ErrorCode::FormatError));
  EXPECT_TRUE(throws_code([] { read_ripl("/nonexistent/x.ripl"); }, ErrorCode::IoError));
}

TEST(Ripl, JsonlHasOneLinePerRecord) {
  const ControlVocab vocab;
  const auto& seq = support::prepared_corpus().front().sequence;
  const auto text = to_jsonl(seq, vocab);
  const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
  EXPECT_EQ(lines, 1 + seq.face_count() + seq.control_count());
}

TEST(MeshIo, ObjVariants) {
  std::istringstream in(
      "# comment\n"
      "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
      "vn 0 0 1\nvt 0 0\n"
      "f 1/1/1 2/1/1 3/1/1 4/1/1\n"
      "f -4//1 -2//1 -1//1\n"
      "o name\ns off\n");
  const auto m = read_obj(in);
  ASSERT_EQ(m.vertices.size(), 4u);
  ASSERT_EQ(m.faces.size(), 3u);
  EXPECT_EQ(m.faces[0], (Tri{0, 1, 2}));
  EXPECT_EQ(m.faces[1], (Tri{0, 2, 3}));
  EXPECT_EQ(m.faces[2], (Tri{0, 2, 3}));
  std::istringstream bad("v 0 0 0\nf 1 2 7\n");
  EXPECT_TRUE(throws_code([&] { read_obj(bad); }, ErrorCode::FormatError));
  std::istringstream junk("v 0 zero 0\n");
  EXPECT_TRUE(throws_code([&] { read_obj(junk); }, ErrorCode::FormatError));
}

TEST(MeshIo, AsciiPly) {
  std::istringstream in(
      "ply\nformat ascii 1.0\nelement vertex 4\nproperty float x\nproperty float y\nproperty float z\n"
      "element face 1\nproperty list uchar int vertex_indices\nend_header\n"
      "0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  const auto m = read_ply(in);
  EXPECT_EQ(m.vertices.size(), 4u);
  EXPECT_EQ(m.faces.size(), 2u);
}

TEST(MeshIo, WriteReadRoundTrip) {
  const auto dir = fs::temp_directory_path() / "ripple_io_test";
  fs::create_directories(dir);
  const auto path = (dir / "torus.obj").string();
  const auto mesh = procedural::torus(10, 6);
  write_obj(path, mesh);
  const auto back = read_mesh(path);
  EXPECT_EQ(back.faces, mesh.faces);
  ASSERT_EQ(back.vertices.size(), mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], mesh.vertices[i]);
  EXPECT_TRUE(throws_code([] { read_mesh("/nonexistent/mesh.obj"); }, ErrorCode::IoError));
  EXPECT_TRUE(throws_code([&] { read_mesh((dir / "mesh.stl").string()); }, ErrorCode::IoError));
  fs::remove_all(dir);
}

TEST(MeshIo, DequantizeMeshUsesNormalization) {
  const auto q = normalize_and_quantize(procedural::cube(), 256);
  const auto raw = dequantize_mesh(q);
  for (std::size_t v = 0; v < raw.vertices.size(); ++v) {
    const auto n = q.normalization.to_normalized(raw.vertices[v]);
    for (int a = 0; a < 3; ++a) EXPECT_EQ(quantize_coord(n[a], 256), q.vertices[v][a]);
  }
}
