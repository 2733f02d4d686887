#include "ripple/decode.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

namespace ripple {

namespace {

std::string describe(const IVec3& p) {
  return "(" + std::to_string(p[0]) + "," + std::to_string(p[1]) + "," + std::to_string(p[2]) + ")";
}

std::uint64_t pack_coords(const IVec3& p) {
  return (static_cast<std::uint64_t>(p[0]) << 32) | (static_cast<std::uint64_t>(p[1]) << 16) |
         static_cast<std::uint64_t>(p[2]);
}

bool collinear(const FaceCoords& f) {
  const IVec3 u{f[1][0] - f[0][0], f[1][1] - f[0][1], f[1][2] - f[0][2]};
  const IVec3 v{f[2][0] - f[0][0], f[2][1] - f[0][1], f[2][2] - f[0][2]};
  const std::int64_t cx = static_cast<std::int64_t>(u[1]) * v[2] - static_cast<std::int64_t>(u[2]) * v[1];
  const std::int64_t cy = static_cast<std::int64_t>(u[2]) * v[0] - static_cast<std::int64_t>(u[0]) * v[2];
  const std::int64_t cz = static_cast<std::int64_t>(u[0]) * v[1] - static_cast<std::int64_t>(u[1]) * v[0];
  return cx == 0 && cy == 0 && cz == 0;
}

}  // namespace

DecodeState::DecodeState(ControlVocab vocab, AttachMode mode) : vocab_(std::move(vocab)), mode_(mode) {
  tokens_.push_back(vocab_.bos());
}

std::optional<std::uint32_t> DecodeState::root() const {
  if (queue_.empty() || lifted_) return std::nullopt;
  return queue_.front();
}

std::optional<std::uint16_t> DecodeState::current_component_separator() const {
  if (component_separator_.empty()) return std::nullopt;
  return component_separator_.back();
}

void DecodeState::reject(ErrorCode code, const std::string& why, std::optional<EdgeCoords> edge) const {
  throw DecodeError(code, why + " at face position " + std::to_string(faces_.size()),
                    static_cast<std::uint32_t>(faces_.size()), root(), edge);
}

std::optional<std::uint64_t> DecodeState::edge_key(const IVec3& from, const IVec3& to) const {
  const auto a = vertex_ids_.find(pack_coords(from));
  const auto b = vertex_ids_.find(pack_coords(to));
  if (a == vertex_ids_.end() || b == vertex_ids_.end()) return std::nullopt;
  return (static_cast<std::uint64_t>(a->second) << 32) | b->second;
}

std::uint32_t DecodeState::vertex_id(const IVec3& p) {
  return vertex_ids_.try_emplace(pack_coords(p), static_cast<std::uint32_t>(vertex_ids_.size())).first->second;
}

bool DecodeState::attaches(const FaceCoords& root, const FaceCoords& candidate) const {
  const int edges = mode_ == AttachMode::FirstEdge ? 1 : 3;
  for (int e = 0; e < edges; ++e) {
    const auto& a = candidate[e];
    const auto& b = candidate[(e + 1) % 3];
    for (int k = 0; k < 3; ++k) {
      if (root[k] == b && root[(k + 1) % 3] == a) return true;
    }
  }
  return false;
}

void DecodeState::step(const Proposal& candidate) {
  if (closed_) reject(ErrorCode::SequenceClosed, "proposal after EOS");

  switch (candidate.kind) {
    case Proposal::Kind::Separator: {
      if (lifted_) reject(ErrorCode::ConstraintViolation, "separator opens an empty component");
      if (candidate.separator >= vocab_.separator_count()) {
        reject(ErrorCode::UnknownToken, "separator index " + std::to_string(candidate.separator));
      }
      queue_.clear();
      lifted_ = true;
      component_separator_.push_back(candidate.separator);
      tokens_.push_back(vocab_.separator(candidate.separator));
      return;
    }
    case Proposal::Kind::Eos: {
      if (lifted_) reject(ErrorCode::ConstraintViolation, "EOS right after a separator");
      closed_ = true;
      tokens_.push_back(vocab_.eos());
      return;
    }
    case Proposal::Kind::Face: break;
  }

  const FaceCoords& f = candidate.face;
  for (const auto& p : f) {
    for (int c = 0; c < 3; ++c) {
      if (p[c] < 0 || p[c] >= vocab_.bins()) reject(ErrorCode::UnknownToken, "coordinate outside the lattice " + describe(p));
    }
  }
  if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) reject(ErrorCode::ConstraintViolation, "degenerate face");
  if (!started()) reject(ErrorCode::ConstraintViolation, "face before any separator");

  const auto ordinal = static_cast<std::uint32_t>(faces_.size());
  if (lifted_) {
    roots_.push_back(ordinal);
    deltas_.push_back(kSeedDelta);
    heads_.push_back(ordinal);
    frontiers_.emplace_back();
    lifted_ = false;
  } else {
    const std::uint32_t r = queue_.front();
    if (!attaches(faces_[r], f)) {
      reject(ErrorCode::ConstraintViolation,
             "face does not attach to root " + std::to_string(r) + " via edge " + describe(f[0]) + "->" + describe(f[1]),
             EdgeCoords{f[0], f[1]});
    }
    deltas_.push_back(static_cast<std::int32_t>(r - roots_.back()));
    roots_.push_back(r);
    heads_.push_back(r);
    frontiers_.emplace_back(queue_.begin(), queue_.end());
  }

  faces_.push_back(f);
  queue_.push_back(ordinal);
  for (int k = 0; k < 3; ++k) {
    const auto a = vertex_id(f[k]);
    const auto b = vertex_id(f[(k + 1) % 3]);
    ++half_edges_[(static_cast<std::uint64_t>(a) << 32) | b];
  }
  for (const auto& p : f) {
    for (int c = 0; c < 3; ++c) tokens_.push_back(static_cast<Token>(p[c]));
  }
}

void DecodeState::advance_root(std::int32_t delta) {
  if (closed_) reject(ErrorCode::SequenceClosed, "root advance after EOS");
  if (lifted_ || delta < 0 || static_cast<std::size_t>(delta) >= queue_.size()) {
    reject(ErrorCode::RootOutOfRange,
           "offset " + std::to_string(delta) + " with queue length " + std::to_string(lifted_ ? 0 : queue_.size()));
  }
  for (std::int32_t k = 0; k < delta; ++k) queue_.pop_front();
}

std::vector<EdgeCoords> DecodeState::open_edges(std::uint32_t ordinal) const {
  std::vector<EdgeCoords> out;
  const auto& f = faces_.at(ordinal);
  for (int k = 0; k < 3; ++k) {
    const auto& a = f[k];
    const auto& b = f[(k + 1) % 3];
    const auto reverse = edge_key(b, a);
    if (!reverse || !half_edges_.contains(*reverse)) out.push_back({a, b});
  }
  return out;
}

std::vector<Token> DecodeState::tokens() const { return tokens_; }

ReplayProposer::ReplayProposer(const TokenSequence& seq, const ControlVocab& vocab) {
  std::size_t face = 0;
  std::size_t pos = 0;
  while (pos < seq.tokens.size()) {
    const Token t = seq.tokens[pos];
    if (vocab.is_coordinate(t)) {
      FaceCoords f{};
      for (int v = 0; v < 3; ++v) {
        for (int c = 0; c < 3; ++c) f[v][c] = seq.tokens[pos + 3 * v + c];
      }
      script_.push_back(Proposal::make_face(f, seq.delta[face]));
      ++face;
      pos += 9;
      continue;
    }
    if (vocab.is_separator(t)) {
      script_.push_back(Proposal::make_separator(static_cast<std::uint16_t>(vocab.separator_index(t))));
    } else if (t == vocab.eos()) {
      script_.push_back(Proposal::make_eos());
    }
    ++pos;
  }
}

Proposal ReplayProposer::next_candidate(const DecodeState&) {
  if (cursor_ >= script_.size()) return Proposal::make_eos();
  return script_[cursor_++];
}

RandomValidPolicy::RandomValidPolicy(std::uint64_t seed, std::size_t target_faces, std::size_t components)
    : rng_(seed), target_faces_(target_faces), components_(std::max<std::size_t>(1, components)) {}

FaceCoords RandomValidPolicy::random_seed_face(int bins) {
  std::uniform_int_distribution<int> coord(0, bins - 1);
  FaceCoords f{};
  do {
    for (auto& p : f) p = {coord(rng_), coord(rng_), coord(rng_)};
  } while (collinear(f));
  return f;
}

Proposal RandomValidPolicy::next_candidate(const DecodeState& state) {
  const int bins = state.vocab().bins();
  if (!state.started()) return Proposal::make_separator(0);
  if (state.face_count() >= target_faces_) return Proposal::make_eos();
  if (state.constraint_lifted()) return Proposal::make_face(random_seed_face(bins), kSeedDelta);

  const auto& queue = state.queue();
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const auto open = state.open_edges(queue[k]);
    if (open.empty()) continue;  // fully expanded front
    const auto& edge = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng_)];
    std::uniform_int_distribution<int> jitter(-12, 12);
    for (int attempt = 0; attempt < 64; ++attempt) {
      IVec3 c{};
      for (int a = 0; a < 3; ++a) {
        c[a] = std::clamp((edge[0][a] + edge[1][a]) / 2 + jitter(rng_), 0, bins - 1);
      }
      const FaceCoords f{edge[1], edge[0], c};
      if (c == edge[0] || c == edge[1] || collinear(f)) continue;
      return Proposal::make_face(f, static_cast<std::int32_t>(k));
    }
  }
  // Nothing left to grow: open another component or stop.
  if (state.component_count() < components_) return Proposal::make_separator(0);
  return Proposal::make_eos();
}

RunResult run(FaceProposer& proposer, const RunLimits& limits, const ControlVocab& vocab, AttachMode mode) {
  RunResult res;
  res.state = DecodeState(vocab, mode);
  auto& state = res.state;

  auto record = [&](std::uint32_t step, std::string action, std::int32_t delta, bool accepted) {
    const auto queue_len = static_cast<std::uint32_t>(state.constraint_lifted() ? 0 : state.queue().size());
    res.trace.push_back({step, std::move(action), state.root(), delta, queue_len, accepted});
  };

  for (std::uint32_t step = 0; !state.closed(); ++step) {
    if (state.face_count() >= limits.max_faces || step >= limits.max_steps) {
      res.truncated = true;
      record(step, "truncated", 0, false);
      break;
    }
    const Proposal p = proposer.next_candidate(state);
    try {
      switch (p.kind) {
        case Proposal::Kind::Separator:
          state.step(p);
          record(step, "separator", 0, true);
          break;
        case Proposal::Kind::Eos:
          state.step(p);
          record(step, "eos", 0, true);
          break;
        case Proposal::Kind::Face:
          if (!state.constraint_lifted() && state.started() && !state.closed()) {
            state.advance_root(p.delta);
            record(step, "advance", p.delta, true);
          }
          state.step(p);
          record(step, "face", state.deltas().back(), true);
          break;
      }
    } catch (const DecodeError&) {
      record(step, p.kind == Proposal::Kind::Face ? "face" : "control", p.delta, false);
      throw;
    }
  }

  res.tokens = state.tokens();
  std::vector<Token> closed_stream = res.tokens;
  if (!state.closed()) {
    if (state.constraint_lifted()) closed_stream.pop_back();  // dangling separator
    closed_stream.push_back(vocab.eos());
  }
  auto mesh = detokenize(closed_stream, vocab);
  res.mesh = std::move(mesh.mesh);
  res.face_component = std::move(mesh.face_component);
  return res;
}

std::string trace_to_jsonl(const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  for (const auto& e : trace) {
    nlohmann::json line = {{"step", e.step},
                           {"action", e.action},
                           {"root", e.root ? nlohmann::json(*e.root) : nlohmann::json(nullptr)},
                           {"delta", e.delta},
                           {"queue_len", e.queue_len},
                           {"accepted", e.accepted}};
    os << line.dump() << '\n';
  }
  return os.str();
}

}  // namespace ripple
