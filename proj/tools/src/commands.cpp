#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "jobs.hpp"
#include "ripple/binary_io.hpp"
#include "ripple/decode.hpp"
#include "ripple/error.hpp"
#include "ripple/filter.hpp"
#include "ripple/half_edge.hpp"
#include "ripple/masks.hpp"
#include "ripple/mesh_io.hpp"
#include "ripple/metrics.hpp"
#include "ripple/procedural.hpp"
#include "ripple/ripl_format.hpp"
#include "ripple/tokenizer.hpp"

namespace ripple::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kMeshExt{".obj", ".ply"};
const std::vector<std::string> kSequenceExt{".obj", ".ply", ".ripl"};

ControlVocab load_vocab(const JobConfig& cfg) {
  if (cfg.vocab_file.empty()) return ControlVocab(cfg.bins);
  const auto bytes = read_file_bytes(cfg.vocab_file);
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    auto labels = j.at("separators").get<std::vector<std::string>>();
    if (labels.empty()) throw Error(ErrorCode::FormatError, "vocab needs at least one separator label");
    return ControlVocab(cfg.bins, std::move(labels));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::FormatError, cfg.vocab_file + ": " + e.what());
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create output directory " + dir);
}

std::string out_path(const JobConfig& cfg, const std::string& input, const std::string& suffix) {
  return (fs::path(cfg.output_dir) / (fs::path(input).stem().string() + suffix)).string();
}

void write_text(const std::string& path, const std::string& text) {
  write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

bool is_ripl(const std::string& path) { return fs::path(path).extension() == ".ripl"; }

struct Loaded {
  ControlVocab vocab;
  TokenSequence sequence;
};

// A .ripl file carries its own vocabulary; meshes are prepared and tokenized.
Loaded load_sequence(const std::string& path, const ControlVocab& vocab) {
  if (is_ripl(path)) {
    auto f = read_ripl(path);
    return {std::move(f.vocab), std::move(f.sequence)};
  }
  const auto prepared = prepare(read_mesh(path), vocab.bins());
  return {vocab, tokenize(HalfEdgeStructure(prepared.mesh), vocab)};
}

// Runs `fn` on each input in parallel and reports per-file failures.
template <class Fn>
int for_each_input(const std::vector<std::string>& inputs, unsigned jobs, const char* verb, Fn&& fn) {
  std::vector<char> ok(inputs.size(), 0);
  parallel_for(inputs.size(), jobs, [&](std::size_t i) {
    try {
      fn(i);
      ok[i] = 1;
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", verb, inputs[i], e.what());
    }
  });
  const auto failed = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  spdlog::info("{}: {} of {} inputs succeeded", verb, inputs.size() - failed, inputs.size());
  return failed == 0 ? kOk : kPartialFailure;
}

std::vector<std::uint8_t> roundtrip_bytes(const QuantizedMesh& mesh, const ControlVocab& vocab,
                                          std::vector<std::uint8_t>& again) {
  const auto seq = tokenize(HalfEdgeStructure(mesh), vocab);
  auto bytes = encode_ripl(seq, vocab);
  const auto back = detokenize(seq, vocab);
  std::vector<std::uint16_t> seps = back.component_separator;
  const auto seq2 = tokenize(HalfEdgeStructure(canonical_sort(back.mesh)), vocab, seps);
  again = encode_ripl(seq2, vocab);
  return bytes;
}

}  // namespace

int cmd_tokenize(const JobConfig& cfg) {
  const auto vocab = load_vocab(cfg);
  const auto inputs = expand_inputs(cfg.inputs, kMeshExt);
  ensure_dir(cfg.output_dir);
  std::vector<std::string> rows(inputs.size());
  const int rc = for_each_input(inputs, cfg.jobs, "tokenize", [&](std::size_t i) {
    const auto prepared = prepare(read_mesh(inputs[i]), cfg.bins);
    const auto seq = tokenize(HalfEdgeStructure(prepared.mesh), vocab);
    if (cfg.format == "jsonl") {
      write_text(out_path(cfg, inputs[i], ".jsonl"), to_jsonl(seq, vocab));
    } else {
      write_ripl(out_path(cfg, inputs[i], ".ripl"), seq, vocab);
    }
    const auto s = compression_stats(seq);
    std::ostringstream row;
    row << fs::path(inputs[i]).stem().string() << ',' << s.faces << ',' << s.tokens << ',' << s.control_tokens << ','
        << s.components << ',' << s.max_delta << ',' << s.max_root_distance << ',' << prepared.flipped_faces << ','
        << (prepared.unorientable ? 1 : 0);
    rows[i] = row.str();
    spdlog::debug("tokenized {} ({} faces, {} tokens)", inputs[i], s.faces, s.tokens);
  });
  std::string csv = "mesh,faces,tokens,control_tokens,components,max_delta,max_root_distance,flipped_faces,unorientable\n";
  for (const auto& r : rows) {
    if (!r.empty()) csv += r + "\n";
  }
  write_text((fs::path(cfg.output_dir) / "tokenize_stats.csv").string(), csv);
  return rc;
}

int cmd_detokenize(const JobConfig& cfg) {
  const auto inputs = expand_inputs(cfg.inputs, {".ripl"});
  ensure_dir(cfg.output_dir);
  return for_each_input(inputs, cfg.jobs, "detokenize", [&](std::size_t i) {
    const auto file = read_ripl(inputs[i]);
    const auto res = detokenize(file.sequence, file.vocab);
    write_obj(out_path(cfg, inputs[i], ".obj"), dequantize_mesh(res.mesh));
  });
}

int cmd_roundtrip(const JobConfig& cfg, bool use_corpus) {
  const auto vocab = load_vocab(cfg);
  std::vector<std::string> names;
  std::vector<RawMesh> corpus_meshes;
  if (use_corpus) {
    for (auto& e : procedural::corpus()) {
      names.push_back(e.name);
      corpus_meshes.push_back(std::move(e.mesh));
    }
  }
  const auto files = expand_inputs(cfg.inputs, kMeshExt);
  names.insert(names.end(), files.begin(), files.end());

  return for_each_input(names, cfg.jobs, "roundtrip", [&](std::size_t i) {
    const RawMesh raw = i < corpus_meshes.size() ? corpus_meshes[i] : read_mesh(names[i]);
    std::vector<std::uint8_t> again;
    const auto first = roundtrip_bytes(prepare(raw, cfg.bins).mesh, vocab, again);
    if (first != again) throw Error(ErrorCode::MalformedSequence, "RIPL bytes differ after detokenize + retokenize");
    spdlog::debug("roundtrip {} ok ({} bytes)", names[i], first.size());
  });
}

int cmd_masks(const JobConfig& cfg, const MaskOptions& opt) {
  const auto vocab = load_vocab(cfg);
  const auto inputs = expand_inputs(cfg.inputs, kSequenceExt);
  ensure_dir(cfg.output_dir);
  const NscaParams params{opt.block_size, opt.top_k, opt.local_kernel, opt.local_stride};
  return for_each_input(inputs, cfg.jobs, "masks", [&](std::size_t i) {
    const auto loaded = load_sequence(inputs[i], vocab);
    const auto& seq = loaded.sequence;
    const auto faces = static_cast<std::uint32_t>(seq.face_count());
    const auto layout = nsca_plan(faces, params);
    const auto emb = face_embeddings(seq, opt.embed_dim, cfg.seed);
    const auto compressed = compress_blocks(emb, layout);
    const auto snapshots = frontier_snapshots(seq);
    const auto windows = window(seq, cfg.window, loaded.vocab);
    for (const auto& w : windows) {
      const auto mask = frontier_mask(snapshots, w.first_face, w.face_count);
      std::vector<std::vector<std::uint32_t>> selected(w.face_count);
      for (std::uint32_t r = 0; r < w.face_count; ++r) {
        selected[r] = select_blocks(emb.row(w.first_face + r), compressed, layout, w.first_face + r);
      }
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, ".w%03u.ripm", w.index);
      write_file_bytes(out_path(cfg, inputs[i], suffix), encode_mask_window(w.index, mask, layout, selected));
    }
    spdlog::debug("masks {}: {} windows", inputs[i], windows.size());
  });
}

int cmd_filter(const JobConfig& cfg) {
  FilterConfig fc = cfg.filter_file.empty() ? FilterConfig{} : FilterConfig::load(cfg.filter_file);
  if (cfg.filter_file.empty()) fc.bins = cfg.bins;
  const auto inputs = expand_inputs(cfg.inputs, kMeshExt);
  ensure_dir(cfg.output_dir);
  std::vector<std::optional<FilterReport>> reports(inputs.size());
  const int rc = for_each_input(inputs, cfg.jobs, "filter", [&](std::size_t i) {
    auto rep = filter_mesh(read_mesh(inputs[i]), fc);
    rep.source = inputs[i];
    spdlog::debug("filter {}: {}", inputs[i], rep.pass ? "pass" : "fail");
    reports[i] = std::move(rep);
  });

  std::string jsonl;
  std::string csv = FilterReport::csv_header() + "\n";
  std::size_t passed = 0;
  for (const auto& r : reports) {
    if (!r) continue;
    jsonl += r->to_json() + "\n";
    csv += r->csv_row() + "\n";
    passed += r->pass ? 1 : 0;
  }
  write_text((fs::path(cfg.output_dir) / "filter_report.jsonl").string(), jsonl);
  write_text((fs::path(cfg.output_dir) / "filter_summary.csv").string(), csv);
  spdlog::info("filter: {} meshes pass all checks", passed);
  return rc;
}

int cmd_eval(const JobConfig& cfg, const EvalCliOptions& opt) {
  if (cfg.inputs.size() != 2) {
    spdlog::error("eval expects exactly two meshes: PRED GT");
    return kUsage;
  }
  EvalOptions eo;
  eo.samples = opt.samples;
  eo.seed = cfg.seed;
  eo.squared_chamfer = !opt.plain_chamfer;
  try {
    const auto res = evaluate(read_mesh(cfg.inputs[0]), read_mesh(cfg.inputs[1]), eo);
    if (opt.output.empty()) {
      std::fputs((res.to_json() + "\n").c_str(), stdout);
    } else {
      write_text(opt.output, res.to_json() + "\n");
    }
  } catch (const std::exception& e) {
    spdlog::error("eval: {}", e.what());
    return kPartialFailure;
  }
  return kOk;
}

int cmd_replay(const JobConfig& cfg, bool any_edge, bool write_trace) {
  const auto vocab = load_vocab(cfg);
  const auto inputs = expand_inputs(cfg.inputs, kSequenceExt);
  if (write_trace) ensure_dir(cfg.output_dir);
  const auto mode = any_edge ? AttachMode::AnyEdge : AttachMode::FirstEdge;
  return for_each_input(inputs, cfg.jobs, "replay", [&](std::size_t i) {
    const auto loaded = load_sequence(inputs[i], vocab);
    ReplayProposer proposer(loaded.sequence, loaded.vocab);
    RunLimits limits;
    limits.max_faces = std::max(limits.max_faces, loaded.sequence.face_count());
    RunResult res;
    try {
      res = run(proposer, limits, loaded.vocab, mode);
    } catch (const DecodeError& e) {
      spdlog::warn("replay {}: {} at face {}", inputs[i], error_name(e.code()), e.position());
      throw;
    }
    if (res.tokens != loaded.sequence.tokens) throw Error(ErrorCode::MalformedSequence, "replayed stream differs");
    if (write_trace) write_text(out_path(cfg, inputs[i], ".trace.jsonl"), trace_to_jsonl(res.trace));
  });
}

int cmd_corpus(const JobConfig& cfg) {
  ensure_dir(cfg.output_dir);
  const auto entries = procedural::corpus();
  for (const auto& e : entries) write_obj((fs::path(cfg.output_dir) / (e.name + ".obj")).string(), e.mesh);
  spdlog::info("corpus: wrote {} meshes to {}", entries.size(), cfg.output_dir);
  return kOk;
}

}  // namespace ripple::cli
