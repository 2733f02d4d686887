#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ripple/half_edge.hpp"
#include "ripple/mesh.hpp"

namespace ripple {

using Token = std::uint16_t;

/// Token id layout: [0, bins) coordinates, then BOS, EOS, PAD, then one id
/// per component separator. The default vocabulary has the single separator N;
/// semantic vocabularies replace it with category labels.
class ControlVocab {
 public:
  explicit ControlVocab(int bins = kDefaultBins, std::vector<std::string> separator_labels = {"N"});

  int bins() const noexcept { return bins_; }
  Token bos() const noexcept { return static_cast<Token>(bins_); }
  Token eos() const noexcept { return static_cast<Token>(bins_ + 1); }
  Token pad() const noexcept { return static_cast<Token>(bins_ + 2); }
  Token separator(std::size_t index) const;
  std::size_t separator_count() const noexcept { return labels_.size(); }
  const std::vector<std::string>& separator_labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(bins_) + 3 + labels_.size(); }

  bool is_coordinate(Token t) const noexcept { return t < bins_; }
  bool is_separator(Token t) const noexcept { return t >= bins_ + 3 && t < size(); }
  std::size_t separator_index(Token t) const noexcept { return t - static_cast<std::size_t>(bins_) - 3; }
  /// Printable name of any token: the coordinate value or the control label.
  std::string label(Token t) const;

  /// Every control id with its label, in id order.
  std::vector<std::pair<Token, std::string>> control_table() const;
  static ControlVocab from_control_table(int bins, const std::vector<std::pair<Token, std::string>>& table);

  friend bool operator==(const ControlVocab&, const ControlVocab&) = default;

 private:
  int bins_;
  std::vector<std::string> labels_;
};

inline constexpr std::int32_t kSeedDelta = -1;

/// Emission-ordinal interval [head, end) of faces held in the FIFO frontier
/// queue at the moment a face is emitted. Empty for component seeds.
struct FrontierSnapshot {
  std::uint32_t head = 0;
  std::uint32_t end = 0;

  std::uint32_t size() const noexcept { return end - head; }
  bool empty() const noexcept { return end == head; }
  bool contains(std::uint32_t j) const noexcept { return j >= head && j < end; }
};

struct TokenSequence {
  int bins = kDefaultBins;
  std::vector<Token> tokens;
  /// Per emitted face: root emission ordinal. Seeds hold their own ordinal.
  std::vector<std::uint32_t> root;
  /// Per emitted face: root offset from the previous face, kSeedDelta for seeds.
  std::vector<std::int32_t> delta;
  /// Per emitted face: emission ordinal at the front of the queue.
  std::vector<std::uint32_t> frontier_head;
  /// Per emitted face: position of its first coordinate token in `tokens`.
  std::vector<std::uint32_t> face_offset;
  /// Per component: ordinal of its seed face.
  std::vector<std::uint32_t> component_seed;

  std::size_t face_count() const noexcept { return root.size(); }
  std::size_t control_count() const noexcept { return tokens.size() - 9 * face_count(); }
  std::size_t component_count() const noexcept { return component_seed.size(); }
  bool is_seed(std::size_t i) const noexcept { return delta[i] == kSeedDelta; }
  FrontierSnapshot frontier(std::size_t i) const noexcept {
    return is_seed(i) ? FrontierSnapshot{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i)}
                      : FrontierSnapshot{frontier_head[i], static_cast<std::uint32_t>(i)};
  }
  /// Face ordinal owning a token position, or nullopt for control tokens.
  std::optional<std::uint32_t> face_of_token(std::size_t position) const;
};

/// Breadth-first face serialization over half-edges with root registration.
/// `component_separators[c]` picks the separator index emitted before
/// component c (defaults to separator 0).
TokenSequence tokenize(const HalfEdgeStructure& structure, const ControlVocab& vocab,
                       std::span<const std::uint16_t> component_separators = {});

/// Rebuilds per-face records (offsets, components, frontier heads) from the
/// token stream and stored root/delta arrays. Used by format readers.
void rebuild_face_index(TokenSequence& seq, const ControlVocab& vocab);

struct DetokenizeResult {
  QuantizedMesh mesh;
  /// Component ordinal of each face.
  std::vector<std::uint32_t> face_component;
  /// Separator index that opened each component.
  std::vector<std::uint16_t> component_separator;
  std::vector<std::string> component_labels;
};

DetokenizeResult detokenize(std::span<const Token> tokens, const ControlVocab& vocab);
inline DetokenizeResult detokenize(const TokenSequence& seq, const ControlVocab& vocab) {
  return detokenize(seq.tokens, vocab);
}

/// Fixed-length training window. Slots beyond `face_count` are padding.
struct Window {
  std::uint32_t index = 0;
  std::uint32_t first_face = 0;
  std::uint32_t face_count = 0;
  std::uint32_t slots = 0;
  /// 9 coordinate tokens per slot; padding slots hold PAD.
  std::vector<Token> tokens;
  /// Absolute emission ordinals, one per real face.
  std::vector<std::uint32_t> root;
  std::vector<std::int32_t> delta;
  std::vector<std::uint32_t> frontier_head;
  /// Separator token opening the component of a seed face, or -1.
  std::vector<std::int32_t> separator;
};

inline constexpr std::uint32_t kDefaultWindowFaces = 1000;

std::vector<Window> window(const TokenSequence& seq, std::uint32_t window_faces, const ControlVocab& vocab);

struct CompressionStats {
  std::size_t faces = 0;
  std::size_t tokens = 0;
  std::size_t control_tokens = 0;
  std::size_t components = 0;
  double tokens_per_face = 0.0;
  std::int32_t max_delta = 0;
  /// Largest i - r_i over non-seed faces.
  std::uint32_t max_root_distance = 0;
  /// Frontier size |B_i| -> number of faces.
  std::map<std::uint32_t, std::size_t> frontier_histogram;
};

CompressionStats compression_stats(const TokenSequence& seq);

}  // namespace ripple
