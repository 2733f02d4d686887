#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <string>
#include <thread>
#include <vector>

namespace ripple::cli {

// Workers pull the next index from a shared counter until the range is
// exhausted. fn(i) must not throw.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
}

/// Expands directories (mesh or .ripl files inside, sorted) and shell-style
/// wildcards. Literal paths are kept even when missing so the caller can
/// report them.
std::vector<std::string> expand_inputs(const std::vector<std::string>& args, const std::vector<std::string>& extensions);

}  // namespace ripple::cli
