#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>

#include "commands.hpp"

using namespace ripple::cli;

namespace {

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("ripple");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::info);
  if (const char* env = std::getenv("RIPPLE_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

void add_common(CLI::App* cmd, JobConfig& cfg, bool inputs_required = true) {
  cmd->add_option("inputs", cfg.inputs, "Input files, directories or globs")->required(inputs_required);
  cmd->add_option("-o,--output", cfg.output_dir, "Output directory");
  cmd->add_option("--bins", cfg.bins, "Quantization bins per axis")->check(CLI::Range(2, 65519));
  cmd->add_option("--vocab", cfg.vocab_file, "JSON vocabulary with a \"separators\" label list")->check(CLI::ExistingFile);
  cmd->add_option("--jobs,-j", cfg.jobs, "Parallel workers")->check(CLI::Range(1u, 1024u));
  cmd->add_option("--seed", cfg.seed, "Seed for randomized steps");
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"ripple: frontier-aware mesh serialization toolkit"};
  app.require_subcommand(1);
  JobConfig cfg;

  auto* tok = app.add_subcommand("tokenize", "Mesh files to RIPL token streams plus tokenize_stats.csv");
  add_common(tok, cfg);
  tok->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"ripl", "jsonl"}));

  auto* detok = app.add_subcommand("detokenize", "RIPL files back to OBJ meshes");
  add_common(detok, cfg);

  bool use_corpus = false;
  auto* rt = app.add_subcommand("roundtrip", "Check tokenize/detokenize fixpoints");
  add_common(rt, cfg, false);
  rt->add_flag("--corpus", use_corpus, "Include the built-in procedural corpus");

  MaskOptions mask_opt;
  auto* masks = app.add_subcommand("masks", "Frontier masks and NSCA plans per training window");
  add_common(masks, cfg);
  masks->add_option("--window", cfg.window, "Faces per window")->check(CLI::PositiveNumber);
  masks->add_option("--block", mask_opt.block_size, "NSCA block size")->check(CLI::PositiveNumber);
  masks->add_option("--top-k", mask_opt.top_k, "NSCA selected blocks");
  masks->add_option("--kernel", mask_opt.local_kernel, "NSCA local kernel")->check(CLI::PositiveNumber);
  masks->add_option("--stride", mask_opt.local_stride, "NSCA local stride")->check(CLI::PositiveNumber);
  masks->add_option("--dim", mask_opt.embed_dim, "Face embedding width")->check(CLI::PositiveNumber);

  auto* filt = app.add_subcommand("filter", "Dataset curation filters; writes filter_report.jsonl and filter_summary.csv");
  add_common(filt, cfg);
  filt->add_option("--filters", cfg.filter_file, "JSON filter configuration")->check(CLI::ExistingFile);

  EvalCliOptions eval_opt;
  auto* ev = app.add_subcommand("eval", "CD/HD/NC between PRED and GT as JSON");
  ev->add_option("inputs", cfg.inputs, "PRED GT")->required()->expected(2);
  ev->add_option("--samples", eval_opt.samples, "Surface samples per mesh")->check(CLI::PositiveNumber);
  ev->add_option("--seed", cfg.seed, "Sampling seed");
  ev->add_flag("--plain-chamfer", eval_opt.plain_chamfer, "Average distances instead of squared distances");
  ev->add_option("-o,--output", eval_opt.output, "Write JSON here instead of stdout");

  bool any_edge = false;
  bool trace = false;
  auto* rep = app.add_subcommand("replay", "Replay token streams through the decode harness");
  add_common(rep, cfg);
  rep->add_flag("--any-edge", any_edge, "Accept attachment through any candidate edge");
  rep->add_flag("--trace", trace, "Write <name>.trace.jsonl into the output directory");

  auto* corpus = app.add_subcommand("corpus", "Write the procedural test corpus as OBJ files");
  corpus->add_option("-o,--output", cfg.output_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*tok) return cmd_tokenize(cfg);
    if (*detok) return cmd_detokenize(cfg);
    if (*rt) {
      if (cfg.inputs.empty() && !use_corpus) {
        spdlog::error("roundtrip needs inputs or --corpus");
        return kUsage;
      }
      return cmd_roundtrip(cfg, use_corpus);
    }
    if (*masks) return cmd_masks(cfg, mask_opt);
    if (*filt) return cmd_filter(cfg);
    if (*ev) return cmd_eval(cfg, eval_opt);
    if (*rep) return cmd_replay(cfg, any_edge, trace);
    if (*corpus) return cmd_corpus(cfg);
  } catch (const std::exception& e) {
    // Setup failures (bad vocab/config, unwritable output) abort the whole run.
    spdlog::error("{}", e.what());
    return kPartialFailure;
  }
  return kUsage;
}
