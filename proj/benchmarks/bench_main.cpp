#include <benchmark/benchmark.h>

#include "ripple/filter.hpp"
#include "ripple/half_edge.hpp"
#include "ripple/masks.hpp"
#include "ripple/procedural.hpp"
#include "ripple/tokenizer.hpp"

using namespace ripple;

static void BM_Prepare(benchmark::State& state) {
  const auto raw = procedural::torus(200, static_cast<int>(state.range(0)) / 400);
  for (auto _ : state) benchmark::DoNotOptimize(prepare(raw));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(raw.faces.size()));
}
BENCHMARK(BM_Prepare)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_Tokenize(benchmark::State& state) {
  const auto mesh = prepare(procedural::torus(200, static_cast<int>(state.range(0)) / 400)).mesh;
  const ControlVocab vocab;
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(HalfEdgeStructure(mesh), vocab));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(mesh.faces.size()));
}
BENCHMARK(BM_Tokenize)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_Detokenize(benchmark::State& state) {
  const ControlVocab vocab;
  const auto seq = tokenize(HalfEdgeStructure(prepare(procedural::torus(200, 50)).mesh), vocab);
  for (auto _ : state) benchmark::DoNotOptimize(detokenize(seq, vocab));
}
BENCHMARK(BM_Detokenize)->Unit(benchmark::kMillisecond);

static void BM_Filter(benchmark::State& state) {
  const auto raw = procedural::torus(100, static_cast<int>(state.range(0)) / 200);
  for (auto _ : state) benchmark::DoNotOptimize(filter_mesh(raw));
}
BENCHMARK(BM_Filter)->Arg(5000)->Arg(20000)->Unit(benchmark::kMillisecond);

static void BM_FrontierMask(benchmark::State& state) {
  const ControlVocab vocab;
  const auto seq = tokenize(HalfEdgeStructure(prepare(procedural::torus(100, 50)).mesh), vocab);
  const auto snaps = frontier_snapshots(seq);
  const auto window = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(frontier_mask(snaps, 0, window));
}
BENCHMARK(BM_FrontierMask)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_NscaPlan(benchmark::State& state) {
  const auto len = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    const auto layout = nsca_plan(len);
    std::uint64_t valid = 0;
    for (std::uint32_t t = 0; t < len; ++t) valid += layout.valid_block_count(t);
    benchmark::DoNotOptimize(valid);
  }
}
BENCHMARK(BM_NscaPlan)->Arg(5000)->Arg(20000);

BENCHMARK_MAIN();
