#include "ripple/tokenizer.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "ripple/error.hpp"

namespace ripple {

ControlVocab::ControlVocab(int bins, std::vector<std::string> separator_labels)
    : bins_(bins), labels_(std::move(separator_labels)) {
  if (bins_ < 2) throw Error(ErrorCode::InvalidArgument, "bins must be >= 2");
  if (labels_.empty()) throw Error(ErrorCode::InvalidArgument, "vocabulary needs at least one separator");
  if (size() > 0x10000) throw Error(ErrorCode::InvalidArgument, "vocabulary does not fit 16-bit token ids");
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    for (std::size_t j = i + 1; j < labels_.size(); ++j) {
      if (labels_[i] == labels_[j]) {
        throw Error(ErrorCode::InvalidArgument, "duplicate separator label '" + labels_[i] + "'");
      }
    }
  }
}

Token ControlVocab::separator(std::size_t index) const {
  if (index >= labels_.size()) {
    throw Error(ErrorCode::InvalidArgument, "separator index " + std::to_string(index) + " out of range");
  }
  return static_cast<Token>(bins_ + 3 + index);
}

std::string ControlVocab::label(Token t) const {
  if (is_coordinate(t)) return std::to_string(t);
  if (t == bos()) return "<BOS>";
  if (t == eos()) return "<EOS>";
  if (t == pad()) return "<PAD>";
  if (is_separator(t)) return labels_[separator_index(t)];
  return "<UNK:" + std::to_string(t) + ">";
}

std::vector<std::pair<Token, std::string>> ControlVocab::control_table() const {
  std::vector<std::pair<Token, std::string>> table;
  table.emplace_back(bos(), "<BOS>");
  table.emplace_back(eos(), "<EOS>");
  table.emplace_back(pad(), "<PAD>");
  for (std::size_t i = 0; i < labels_.size(); ++i) table.emplace_back(separator(i), labels_[i]);
  return table;
}

ControlVocab ControlVocab::from_control_table(int bins, const std::vector<std::pair<Token, std::string>>& table) {
  if (table.size() < 4) throw Error(ErrorCode::FormatError, "control table needs BOS, EOS, PAD and a separator");
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].first != bins + i) {
      throw Error(ErrorCode::FormatError, "control ids must be consecutive from bins");
    }
    if (i >= 3) labels.push_back(table[i].second);
  }
  return ControlVocab(bins, std::move(labels));
}

std::optional<std::uint32_t> TokenSequence::face_of_token(std::size_t position) const {
  auto it = std::upper_bound(face_offset.begin(), face_offset.end(), position);
  if (it == face_offset.begin()) return std::nullopt;
  --it;
  if (position - *it >= 9) return std::nullopt;
  return static_cast<std::uint32_t>(it - face_offset.begin());
}

namespace {

void emit_face(TokenSequence& seq, const HalfEdgeStructure& he, std::uint32_t entry) {
  seq.face_offset.push_back(static_cast<std::uint32_t>(seq.tokens.size()));
  const auto& verts = he.mesh().vertices;
  for (std::uint32_t h : {entry, he[entry].next, he[entry].prev}) {
    const auto& p = verts[he[h].origin];
    seq.tokens.push_back(static_cast<Token>(p[0]));
    seq.tokens.push_back(static_cast<Token>(p[1]));
    seq.tokens.push_back(static_cast<Token>(p[2]));
  }
}

}  // namespace

TokenSequence tokenize(const HalfEdgeStructure& he, const ControlVocab& vocab,
                       std::span<const std::uint16_t> component_separators) {
  if (he.mesh().bins != vocab.bins()) {
    throw Error(ErrorCode::InvalidArgument, "vocabulary bins " + std::to_string(vocab.bins()) +
                                                " do not match mesh bins " + std::to_string(he.mesh().bins));
  }
  const auto nf = static_cast<std::uint32_t>(he.face_count());

  TokenSequence seq;
  seq.bins = vocab.bins();
  seq.tokens.reserve(9 * static_cast<std::size_t>(nf) + 8);
  seq.root.reserve(nf);
  seq.delta.reserve(nf);
  seq.frontier_head.reserve(nf);
  seq.face_offset.reserve(nf);

  std::vector<bool> visited(nf, false);
  std::vector<std::uint32_t> ordinal(nf, 0);
  // Every face enters the queue exactly once, so a flat array with a read
  // cursor is the FIFO.
  std::vector<std::uint32_t> queue;
  queue.reserve(nf);
  std::size_t cursor = 0;

  seq.tokens.push_back(vocab.bos());
  for (std::uint32_t f = 0; f < nf; ++f) {
    if (visited[f]) continue;
    const std::size_t component = seq.component_seed.size();
    const std::size_t sep = component < component_separators.size() ? component_separators[component] : 0;
    seq.tokens.push_back(vocab.separator(sep));

    const std::uint32_t seed = he.face_entry(f);
    const auto seed_ordinal = static_cast<std::uint32_t>(seq.root.size());
    visited[f] = true;
    ordinal[f] = seed_ordinal;
    seq.component_seed.push_back(seed_ordinal);
    emit_face(seq, he, seed);
    seq.root.push_back(seed_ordinal);
    seq.delta.push_back(kSeedDelta);
    seq.frontier_head.push_back(seed_ordinal);
    std::uint32_t last_root = seed_ordinal;
    queue.push_back(seed);

    while (cursor < queue.size()) {
      const std::uint32_t h = queue[cursor++];
      const std::uint32_t root = ordinal[he[h].face];
      for (std::uint32_t side : {he[h].prev, he[h].next, h}) {
        for (std::uint32_t twin : he.twins(side)) {
          const std::uint32_t g = he[twin].face;
          if (visited[g]) continue;
          visited[g] = true;
          ordinal[g] = static_cast<std::uint32_t>(seq.root.size());
          emit_face(seq, he, twin);
          seq.root.push_back(root);
          seq.delta.push_back(static_cast<std::int32_t>(root - last_root));
          seq.frontier_head.push_back(root);
          last_root = root;
          queue.push_back(twin);
        }
      }
    }
  }
  seq.tokens.push_back(vocab.eos());
  return seq;
}

void rebuild_face_index(TokenSequence& seq, const ControlVocab& vocab) {
  seq.face_offset.clear();
  seq.component_seed.clear();
  std::size_t pos = 0;
  while (pos < seq.tokens.size()) {
    const Token t = seq.tokens[pos];
    if (vocab.is_coordinate(t)) {
      if (pos + 9 > seq.tokens.size()) throw Error(ErrorCode::TruncatedFace, "stream ends inside a face");
      seq.face_offset.push_back(static_cast<std::uint32_t>(pos));
      pos += 9;
      continue;
    }
    if (vocab.is_separator(t)) seq.component_seed.push_back(static_cast<std::uint32_t>(seq.face_offset.size()));
    ++pos;
  }
  if (seq.face_offset.size() != seq.root.size() || seq.root.size() != seq.delta.size()) {
    throw Error(ErrorCode::FormatError, "face count disagrees with root/delta arrays");
  }
  seq.frontier_head = seq.root;
}

DetokenizeResult detokenize(std::span<const Token> tokens, const ControlVocab& vocab) {
  DetokenizeResult out;
  out.mesh.bins = vocab.bins();
  if (tokens.empty() || tokens.front() != vocab.bos()) {
    throw Error(ErrorCode::MalformedSequence, "sequence must start with BOS");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] >= vocab.size()) {
      throw Error(ErrorCode::UnknownToken,
                  "token " + std::to_string(tokens[i]) + " at position " + std::to_string(i));
    }
  }

  std::unordered_map<std::uint64_t, std::uint32_t> vertex_of;
  auto vertex = [&](const Token* c) {
    const std::uint64_t key = (static_cast<std::uint64_t>(c[0]) << 32) |
                              (static_cast<std::uint64_t>(c[1]) << 16) | c[2];
    auto [it, inserted] = vertex_of.try_emplace(key, static_cast<std::uint32_t>(out.mesh.vertices.size()));
    if (inserted) out.mesh.vertices.push_back({c[0], c[1], c[2]});
    return it->second;
  };

  bool closed = false;
  bool component_has_face = true;
  std::size_t pos = 1;
  while (pos < tokens.size()) {
    const Token t = tokens[pos];
    if (closed) throw Error(ErrorCode::MalformedSequence, "tokens after EOS at position " + std::to_string(pos));
    if (vocab.is_coordinate(t)) {
      if (out.component_separator.empty()) {
        throw Error(ErrorCode::MissingSeparator, "coordinate token before any separator at position " +
                                                     std::to_string(pos));
      }
      std::size_t run = 0;
      while (run < 9 && pos + run < tokens.size() && vocab.is_coordinate(tokens[pos + run])) ++run;
      if (run < 9) {
        throw Error(ErrorCode::TruncatedFace, "face at position " + std::to_string(pos) + " has " +
                                                  std::to_string(run) + " coordinate tokens");
      }
      const Token* c = tokens.data() + pos;
      out.mesh.faces.push_back({vertex(c), vertex(c + 3), vertex(c + 6)});
      out.face_component.push_back(static_cast<std::uint32_t>(out.component_separator.size() - 1));
      component_has_face = true;
      pos += 9;
      continue;
    }
    if (vocab.is_separator(t)) {
      if (!component_has_face) {
        throw Error(ErrorCode::MalformedSequence, "empty component at position " + std::to_string(pos));
      }
      const auto index = vocab.separator_index(t);
      out.component_separator.push_back(static_cast<std::uint16_t>(index));
      out.component_labels.push_back(vocab.separator_labels()[index]);
      component_has_face = false;
    } else if (t == vocab.eos()) {
      if (!component_has_face) {
        throw Error(ErrorCode::MalformedSequence, "empty component before EOS");
      }
      closed = true;
    } else {
      throw Error(ErrorCode::MalformedSequence,
                  vocab.label(t) + " is not allowed at position " + std::to_string(pos));
    }
    ++pos;
  }
  if (!closed) throw Error(ErrorCode::MalformedSequence, "sequence does not end with EOS");
  return out;
}

std::vector<Window> window(const TokenSequence& seq, std::uint32_t window_faces, const ControlVocab& vocab) {
  if (window_faces == 0) throw Error(ErrorCode::InvalidArgument, "window_faces must be >= 1");
  std::vector<std::int32_t> opens(seq.face_count(), -1);
  for (std::uint32_t c = 0; c < seq.component_seed.size(); ++c) {
    const auto seed = seq.component_seed[c];
    // The separator sits directly before the seed's first coordinate token.
    opens[seed] = seq.tokens[seq.face_offset[seed] - 1];
  }

  std::vector<Window> out;
  const auto nf = static_cast<std::uint32_t>(seq.face_count());
  for (std::uint32_t first = 0; first < nf; first += window_faces) {
    Window w;
    w.index = static_cast<std::uint32_t>(out.size());
    w.first_face = first;
    w.face_count = std::min(window_faces, nf - first);
    w.slots = window_faces;
    w.tokens.assign(9 * static_cast<std::size_t>(window_faces), vocab.pad());
    for (std::uint32_t k = 0; k < w.face_count; ++k) {
      const auto i = first + k;
      std::copy_n(seq.tokens.begin() + seq.face_offset[i], 9, w.tokens.begin() + 9 * static_cast<std::size_t>(k));
      w.root.push_back(seq.root[i]);
      w.delta.push_back(seq.delta[i]);
      w.frontier_head.push_back(seq.frontier_head[i]);
      w.separator.push_back(opens[i]);
    }
    out.push_back(std::move(w));
  }
  return out;
}

CompressionStats compression_stats(const TokenSequence& seq) {
  CompressionStats s;
  s.faces = seq.face_count();
  s.tokens = seq.tokens.size();
  s.control_tokens = seq.control_count();
  s.components = seq.component_count();
  s.tokens_per_face = s.faces ? static_cast<double>(s.tokens) / static_cast<double>(s.faces) : 0.0;
  for (std::size_t i = 0; i < s.faces; ++i) {
    s.frontier_histogram[seq.frontier(i).size()]++;
    if (seq.is_seed(i)) continue;
    s.max_delta = std::max(s.max_delta, seq.delta[i]);
    s.max_root_distance = std::max(s.max_root_distance, static_cast<std::uint32_t>(i - seq.root[i]));
  }
  return s;
}

}  // namespace ripple
