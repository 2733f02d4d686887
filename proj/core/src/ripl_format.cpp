#include "ripple/ripl_format.hpp"

#include <nlohmann/json.hpp>
#include <sstream>

#include "ripple/binary_io.hpp"
#include "ripple/error.hpp"

namespace ripple {

std::vector<std::uint8_t> encode_ripl(const TokenSequence& seq, const ControlVocab& vocab) {
  ByteWriter w;
  w.put(kRiplMagic);
  w.put(kRiplVersion);
  w.put(static_cast<std::uint16_t>(vocab.bins()));
  const auto table = vocab.control_table();
  w.put(static_cast<std::uint16_t>(table.size()));
  for (const auto& [id, label] : table) {
    w.put(id);
    w.put_string(label);
  }
  w.put(static_cast<std::uint32_t>(seq.face_count()));
  w.put(static_cast<std::uint32_t>(seq.tokens.size()));
  w.put_all<Token>(seq.tokens);
  w.put_all<std::uint32_t>(seq.root);
  w.put_all<std::int32_t>(seq.delta);
  return std::move(w).take();
}

RiplFile decode_ripl(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (r.get<std::uint32_t>() != kRiplMagic) throw Error(ErrorCode::FormatError, "bad RIPL magic");
  const auto version = r.get<std::uint16_t>();
  if (version != kRiplVersion) {
    throw Error(ErrorCode::FormatError, "unsupported RIPL version " + std::to_string(version));
  }
  const int bins = r.get<std::uint16_t>();
  const auto controls = r.get<std::uint16_t>();
  std::vector<std::pair<Token, std::string>> table;
  for (std::uint16_t i = 0; i < controls; ++i) {
    const auto id = r.get<Token>();
    table.emplace_back(id, r.get_string());
  }
  RiplFile file{ControlVocab::from_control_table(bins, table), {}};
  auto& seq = file.sequence;
  seq.bins = bins;
  const auto faces = r.get<std::uint32_t>();
  const auto tokens = r.get<std::uint32_t>();
  seq.tokens = r.get_all<Token>(tokens);
  seq.root = r.get_all<std::uint32_t>(faces);
  seq.delta = r.get_all<std::int32_t>(faces);
  if (!r.done()) throw Error(ErrorCode::FormatError, "trailing bytes after RIPL payload");
  rebuild_face_index(seq, file.vocab);
  return file;
}

void write_ripl(const std::string& path, const TokenSequence& seq, const ControlVocab& vocab) {
  write_file_bytes(path, encode_ripl(seq, vocab));
}

RiplFile read_ripl(const std::string& path) { return decode_ripl(read_file_bytes(path)); }

std::string to_jsonl(const TokenSequence& seq, const ControlVocab& vocab) {
  std::ostringstream os;
  nlohmann::json header = {{"format", "ripl-jsonl"},
                           {"version", kRiplVersion},
                           {"bins", vocab.bins()},
                           {"faces", seq.face_count()},
                           {"tokens", seq.tokens.size()},
                           {"separators", vocab.separator_labels()}};
  os << header.dump() << '\n';
  std::size_t pos = 0;
  std::uint32_t face = 0;
  while (pos < seq.tokens.size()) {
    const Token t = seq.tokens[pos];
    if (vocab.is_coordinate(t)) {
      nlohmann::json line = {{"face", face},
                             {"tokens", std::vector<Token>(seq.tokens.begin() + static_cast<std::ptrdiff_t>(pos),
                                                           seq.tokens.begin() + static_cast<std::ptrdiff_t>(pos + 9))},
                             {"root", seq.root[face]},
                             {"delta", seq.delta[face]},
                             {"head", seq.frontier_head[face]}};
      os << line.dump() << '\n';
      pos += 9;
      ++face;
    } else {
      os << nlohmann::json{{"control", vocab.label(t)}, {"id", t}}.dump() << '\n';
      ++pos;
    }
  }
  return os.str();
}

}  // namespace ripple
