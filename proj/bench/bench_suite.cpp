// Serial vs OpenMP law-suite throughput.
#include <benchmark/benchmark.h>

#include "spartan/equiv.hpp"

namespace {

spartan::SuiteConfig config(std::size_t size, unsigned jobs) {
  spartan::SuiteConfig cfg;
  cfg.check.size_bound = size;
  cfg.jobs = jobs;
  return cfg;
}

void BM_SuiteSerial(benchmark::State& st) {
  auto laws = spartan::law_suite();
  auto cfg = config(static_cast<std::size_t>(st.range(0)), 1);
  for (auto _ : st) benchmark::DoNotOptimize(spartan::run_suite_serial(laws, cfg));
}

void BM_SuiteParallel(benchmark::State& st) {
  auto laws = spartan::law_suite();
  auto cfg = config(static_cast<std::size_t>(st.range(0)), static_cast<unsigned>(st.range(1)));
  for (auto _ : st) benchmark::DoNotOptimize(spartan::run_suite(laws, cfg));
}

}  // namespace

BENCHMARK(BM_SuiteSerial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SuiteParallel)->ArgsProduct({{2, 3}, {2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
