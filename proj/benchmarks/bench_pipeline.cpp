#include <benchmark/benchmark.h>
#include "dpg/mesh.hpp"
static void BM_Structured(benchmark::State& s){ for (auto _ : s) benchmark::DoNotOptimize(dpg::build_structured_mesh(16)); }
BENCHMARK(BM_Structured);
BENCHMARK_MAIN();
