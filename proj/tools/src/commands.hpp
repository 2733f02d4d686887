#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ripple::cli {

enum ExitCode : int { kOk = 0, kPartialFailure = 1, kUsage = 2 };

struct JobConfig {
  std::vector<std::string> inputs;
  std::string output_dir = ".";
  int bins = 256;
  std::uint32_t window = 1000;
  std::string vocab_file;
  std::string filter_file;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::string format = "ripl";
};

struct MaskOptions {
  std::uint32_t block_size = 64;
  std::uint32_t top_k = 16;
  std::uint32_t local_kernel = 32;
  std::uint32_t local_stride = 16;
  std::size_t embed_dim = 32;
};

struct EvalCliOptions {
  std::size_t samples = 1024;
  bool plain_chamfer = false;
  std::string output;
};

int cmd_tokenize(const JobConfig& cfg);
int cmd_detokenize(const JobConfig& cfg);
int cmd_roundtrip(const JobConfig& cfg, bool use_corpus);
int cmd_masks(const JobConfig& cfg, const MaskOptions& opt);
int cmd_filter(const JobConfig& cfg);
int cmd_eval(const JobConfig& cfg, const EvalCliOptions& opt);
int cmd_replay(const JobConfig& cfg, bool any_edge, bool write_trace);
int cmd_corpus(const JobConfig& cfg);

}  // namespace ripple::cli
