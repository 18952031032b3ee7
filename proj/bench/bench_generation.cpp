// One generation at k = 5: OpenMP engine against the serial reference.

#include <benchmark/benchmark.h>
#include <omp.h>

#include "plurality/engine.hpp"

using namespace plurality;

namespace {

struct Fixture {
  SimulationConfig cfg;
  std::uint64_t key;
  GenerationRecord previous;

  explicit Fixture(std::uint64_t elections) {
    cfg.k_counts = {{5, 1.0}};
    cfg.elections = elections;
    cfg.enhanced_symmetry = true;
    key = RandomStream::trial_key(cfg.master_seed, 0);
    previous = initial_record(cfg, key);
  }

  CopySources sources() const {
    CopySources s;
    s.records = {&previous};
    s.initial = &cfg.initial;
    return s;
  }
};

void BM_GenerationParallel(benchmark::State& state) {
  const Fixture f(static_cast<std::uint64_t>(state.range(0)));
  const int threads = static_cast<int>(state.range(1));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(threads);
  for (auto _ : state) benchmark::DoNotOptimize(run_generation(f.sources(), f.cfg, 1, f.key));
  omp_set_num_threads(saved);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GenerationSerial(benchmark::State& state) {
  const Fixture f(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_generation_serial(f.sources(), f.cfg, 1, f.key));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_GenerationSerial)->Arg(100000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GenerationParallel)
    ->ArgsProduct({{100000}, benchmark::CreateRange(1, omp_get_num_procs(), 2)})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
