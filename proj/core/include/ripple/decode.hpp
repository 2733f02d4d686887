#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "ripple/error.hpp"
#include "ripple/mesh.hpp"
#include "ripple/tokenizer.hpp"

namespace ripple {

using FaceCoords = std::array<IVec3, 3>;
using EdgeCoords = std::array<IVec3, 2>;

/// Which candidate edges may attach to the root. FirstEdge checks only the
/// serialized v0->v1 edge; AnyEdge accepts any of the three.
enum class AttachMode { FirstEdge, AnyEdge };

struct Proposal {
  enum class Kind { Face, Separator, Eos };

  Kind kind = Kind::Face;
  FaceCoords face{};
  std::uint16_t separator = 0;
  /// Root advance applied before a non-seed face.
  std::int32_t delta = kSeedDelta;

  static Proposal make_face(const FaceCoords& f, std::int32_t delta) { return {Kind::Face, f, 0, delta}; }
  static Proposal make_separator(std::uint16_t index) { return {Kind::Separator, {}, index, kSeedDelta}; }
  static Proposal make_eos() { return {Kind::Eos, {}, 0, kSeedDelta}; }
};

class DecodeError : public Error {
 public:
  DecodeError(ErrorCode code, const std::string& what, std::uint32_t position, std::optional<std::uint32_t> root,
              std::optional<EdgeCoords> edge)
      : Error(code, what), position_(position), root_(root), edge_(edge) {}

  std::uint32_t position() const noexcept { return position_; }
  std::optional<std::uint32_t> root() const noexcept { return root_; }
  std::optional<EdgeCoords> edge() const noexcept { return edge_; }

 private:
  std::uint32_t position_;
  std::optional<std::uint32_t> root_;
  std::optional<EdgeCoords> edge_;
};

/// Inference-time state: emitted faces, FIFO frontier of emission ordinals
/// whose front is the current root, and per-face root/offset records.
class DecodeState {
 public:
  explicit DecodeState(ControlVocab vocab = ControlVocab(), AttachMode mode = AttachMode::FirstEdge);

  /// Applies a separator, face or EOS. Throws DecodeError (ConstraintViolation,
  /// SequenceClosed) and leaves the state untouched on rejection.
  void step(const Proposal& candidate);
  /// Moves the root `delta` positions along the queue, popping everything
  /// before it. Throws DecodeError(RootOutOfRange).
  void advance_root(std::int32_t delta);

  const ControlVocab& vocab() const noexcept { return vocab_; }
  std::size_t face_count() const noexcept { return faces_.size(); }
  const std::vector<FaceCoords>& faces() const noexcept { return faces_; }
  const std::deque<std::uint32_t>& queue() const noexcept { return queue_; }
  std::optional<std::uint32_t> root() const;
  bool closed() const noexcept { return closed_; }
  /// True right after a separator: the next face is an unconstrained seed.
  bool constraint_lifted() const noexcept { return lifted_; }
  bool started() const noexcept { return !component_separator_.empty(); }
  std::size_t component_count() const noexcept { return component_separator_.size(); }
  std::optional<std::uint16_t> current_component_separator() const;

  /// Half-edges of an emitted face with no reverse half-edge emitted yet.
  std::vector<EdgeCoords> open_edges(std::uint32_t ordinal) const;

  const std::vector<std::uint32_t>& roots() const noexcept { return roots_; }
  const std::vector<std::int32_t>& deltas() const noexcept { return deltas_; }
  const std::vector<std::uint32_t>& heads() const noexcept { return heads_; }
  /// Literal queue contents at each face's emission.
  const std::vector<std::vector<std::uint32_t>>& frontiers() const noexcept { return frontiers_; }

  /// Token stream accepted so far; ends with EOS once closed.
  std::vector<Token> tokens() const;

 private:
  bool attaches(const FaceCoords& root, const FaceCoords& candidate) const;
  [[noreturn]] void reject(ErrorCode code, const std::string& why, std::optional<EdgeCoords> edge = std::nullopt) const;
  std::optional<std::uint64_t> edge_key(const IVec3& from, const IVec3& to) const;
  std::uint32_t vertex_id(const IVec3& p);

  ControlVocab vocab_;
  AttachMode mode_;
  std::vector<FaceCoords> faces_;
  std::deque<std::uint32_t> queue_;
  std::vector<std::uint16_t> component_separator_;
  std::vector<std::uint32_t> roots_;
  std::vector<std::int32_t> deltas_;
  std::vector<std::uint32_t> heads_;
  std::vector<std::vector<std::uint32_t>> frontiers_;
  std::vector<Token> tokens_;
  std::unordered_map<std::uint64_t, std::uint32_t> vertex_ids_;
  std::unordered_map<std::uint64_t, std::uint32_t> half_edges_;
  bool lifted_ = false;
  bool closed_ = false;
};

class FaceProposer {
 public:
  virtual ~FaceProposer() = default;
  virtual Proposal next_candidate(const DecodeState& state) = 0;
};

/// Replays a tokenizer stream verbatim, with its recorded offsets.
class ReplayProposer : public FaceProposer {
 public:
  ReplayProposer(const TokenSequence& seq, const ControlVocab& vocab);
  Proposal next_candidate(const DecodeState& state) override;

 private:
  std::vector<Proposal> script_;
  std::size_t cursor_ = 0;
};

/// Random policy that only proposes valid moves: it advances the root past
/// fully expanded faces, then grows a random open edge of the root.
class RandomValidPolicy : public FaceProposer {
 public:
  RandomValidPolicy(std::uint64_t seed, std::size_t target_faces, std::size_t components = 1);
  Proposal next_candidate(const DecodeState& state) override;

 private:
  FaceCoords random_seed_face(int bins);

  std::mt19937_64 rng_;
  std::size_t target_faces_;
  std::size_t components_;
};

struct TraceEntry {
  std::uint32_t step = 0;
  std::string action;  // "separator", "face", "advance", "eos", "truncated"
  std::optional<std::uint32_t> root;
  std::int32_t delta = 0;
  std::uint32_t queue_len = 0;
  bool accepted = true;
};

struct RunLimits {
  std::size_t max_faces = 20000;
  /// Guards proposers that never emit EOS.
  std::size_t max_steps = 1000000;
};

struct RunResult {
  QuantizedMesh mesh;
  std::vector<std::uint32_t> face_component;
  std::vector<TraceEntry> trace;
  std::vector<Token> tokens;
  bool truncated = false;
  DecodeState state;
};

/// Drives the state machine until EOS or a limit. Step errors propagate.
RunResult run(FaceProposer& proposer, const RunLimits& limits, const ControlVocab& vocab,
              AttachMode mode = AttachMode::FirstEdge);

std::string trace_to_jsonl(const std::vector<TraceEntry>& trace);

}  // namespace ripple
