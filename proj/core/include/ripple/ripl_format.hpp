#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ripple/tokenizer.hpp"

namespace ripple {

/// "RIPL" token container. Little-endian throughout:
///   u32 magic 0x5249504C, u16 version (1), u16 bins,
///   u16 control count, then per control: u16 id, u16 byte length, UTF-8 label,
///   u32 face count, u32 token count,
///   u16 tokens[token count], u32 roots[face count], i32 deltas[face count] (-1 = seed).
inline constexpr std::uint32_t kRiplMagic = 0x5249504C;
inline constexpr std::uint16_t kRiplVersion = 1;

std::vector<std::uint8_t> encode_ripl(const TokenSequence& seq, const ControlVocab& vocab);

struct RiplFile {
  ControlVocab vocab;
  TokenSequence sequence;
};

RiplFile decode_ripl(std::span<const std::uint8_t> bytes);

void write_ripl(const std::string& path, const TokenSequence& seq, const ControlVocab& vocab);
RiplFile read_ripl(const std::string& path);

/// Debug mirror: a header line, then one JSON object per control token or face.
std::string to_jsonl(const TokenSequence& seq, const ControlVocab& vocab);

}  // namespace ripple
