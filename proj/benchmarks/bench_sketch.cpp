#include <benchmark/benchmark.h>

#include "wmsketch/awm_sketch.hpp"
#include "wmsketch/baselines.hpp"
#include "wmsketch/countsketch.hpp"
#include "wmsketch/synthetic.hpp"
#include "wmsketch/wm_sketch.hpp"

namespace {

using namespace wmsketch;

std::vector<LabeledExample> bench_stream(uint64_t dim, uint64_t steps) {
  io::SyntheticSpec spec;
  spec.dim = dim;
  spec.sparsity = 10;
  spec.heavy = 32;
  spec.zipf = 1.0;
  spec.steps = steps;
  spec.seed = 7;
  return io::generate_synthetic(spec).stream;
}

void BM_CountSketchUpdate(benchmark::State& state) {
  CountSketch cs(1, 1024 * static_cast<uint64_t>(state.range(0)), static_cast<uint32_t>(state.range(0)));
  feature_t id = 0;
  for (auto _ : state) {
    cs.update(id++, 1.0);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountSketchUpdate)->Arg(1)->Arg(4)->Arg(8);

void BM_CountSketchQuery(benchmark::State& state) {
  CountSketch cs(1, 1024 * static_cast<uint64_t>(state.range(0)), static_cast<uint32_t>(state.range(0)));
  for (feature_t i = 0; i < 4096; ++i) cs.update(i, 1.0 + i);
  feature_t id = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cs.query(id++ & 4095));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_CountSketchQuery)->Arg(1)->Arg(4)->Arg(8);

void BM_WmUpdate(benchmark::State& state) {
  auto stream = bench_stream(1 << 16, 4096);
  WmConfig cfg;
  cfg.k = 256 * static_cast<uint64_t>(state.range(0));
  cfg.depth = static_cast<uint32_t>(state.range(0));
  cfg.lambda = 1e-4;
  WmSketch m(cfg);
  size_t i = 0;
  for (auto _ : state) {
    const auto& ex = stream[i++ & 4095];
    m.update(ex.x, ex.y);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_WmUpdate)->Arg(1)->Arg(4)->Arg(8);

void BM_AwmUpdate(benchmark::State& state) {
  auto stream = bench_stream(1 << 16, 4096);
  AwmConfig cfg;
  cfg.capacity = static_cast<size_t>(state.range(0));
  cfg.k = 2048;
  cfg.depth = 1;
  cfg.lambda = 1e-4;
  AwmSketch m(cfg);
  size_t i = 0;
  for (auto _ : state) {
    const auto& ex = stream[i++ & 4095];
    m.update(ex.x, ex.y);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AwmUpdate)->Arg(128)->Arg(512)->Arg(2048);

void BM_SpaceSavingUpdate(benchmark::State& state) {
  auto stream = bench_stream(1 << 16, 4096);
  SpaceSavingConfig cfg;
  cfg.capacity = static_cast<size_t>(state.range(0));
  SpaceSaving m(cfg);
  size_t i = 0;
  for (auto _ : state) {
    const auto& ex = stream[i++ & 4095];
    m.update(ex.x, ex.y);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SpaceSavingUpdate)->Arg(128)->Arg(512);

void BM_AwmTopk(benchmark::State& state) {
  auto stream = bench_stream(1 << 16, 4096);
  AwmConfig cfg;
  cfg.capacity = 512;
  cfg.k = 2048;
  AwmSketch m(cfg);
  for (const auto& ex : stream) m.update(ex.x, ex.y);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.topk(128));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_AwmTopk);

}  // namespace

BENCHMARK_MAIN();
