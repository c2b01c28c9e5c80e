#include <benchmark/benchmark.h>

#include "indflag/carrier.hpp"

using namespace indflag;

static void BM_IntervalCardinality(benchmark::State& state) {
  OrderSpec s{{omega_down(), fin_chain(5), omega_up()}, "bench"};
  for (auto _ : state) {
    auto c = interval_cardinality(s, {0, 40}, {2, 40});
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(BM_IntervalCardinality);

static void BM_EnumerateTruncation(benchmark::State& state) {
  OrderSpec s{{omega_up(), fin_chain(1), omega_down()}, "bench"};
  InvolutionSpec iv;
  iv.pairing = {{0, 2, 0}, {1, 1, 0}};
  iv.type_tag = 'B';
  for (auto _ : state) {
    auto w = enumerate_truncation(s, iv, state.range(0));
    benchmark::DoNotOptimize(w);
  }
}
BENCHMARK(BM_EnumerateTruncation)->Arg(8)->Arg(64);

BENCHMARK_MAIN();
