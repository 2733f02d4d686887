#pragma once

#include <string>
#include <vector>

#include "ripple/error.hpp"
#include "ripple/half_edge.hpp"
#include "ripple/procedural.hpp"
#include "ripple/tokenizer.hpp"

namespace support {

struct PreparedEntry {
  std::string name;
  ripple::QuantizedMesh mesh;
  ripple::TokenSequence sequence;
};

// Prepared and tokenized procedural corpus, built once per process.
inline const std::vector<PreparedEntry>& prepared_corpus() {
  static const std::vector<PreparedEntry> entries = [] {
    std::vector<PreparedEntry> out;
    const ripple::ControlVocab vocab;
    for (const auto& e : ripple::procedural::corpus()) {
      auto mesh = ripple::prepare(e.mesh).mesh;
      auto seq = ripple::tokenize(ripple::HalfEdgeStructure(mesh), vocab);
      out.push_back({e.name, std::move(mesh), std::move(seq)});
    }
    return out;
  }();
  return entries;
}

template <class Fn>
bool throws_code(Fn&& fn, ripple::ErrorCode expected) {
  try {
    fn();
  } catch (const ripple::Error& e) {
    return e.code() == expected;
  }
  return false;
}

}  // namespace support
