// Throughput of the hot paths: SymOp evaluation, sampled identity checks,
// and the grid operators at the convergence sizes.

#include <benchmark/benchmark.h>

#include "qaff/matchedpair.hpp"
#include "qaff/numchecks.hpp"
#include "qaff/qgops.hpp"

using namespace qaff;

static void BM_OmegaEval(benchmark::State& st) {
  auto m = make_model("axb");
  SymOp om = omega(m);
  Legs x{XPoint{{1.3}, {0.7}}, XPoint{{-0.4}, {2.1}}};
  for (auto _ : st) benchmark::DoNotOptimize(om.eval(x, 1e-3));
}
BENCHMARK(BM_OmegaEval);

static void BM_PentagonEval(benchmark::State& st) {
  auto m = make_model("axb");
  SymOp w = what(m);
  Legs x{XPoint{{1.3}, {0.7}}, XPoint{{-0.4}, {2.1}}};
  for (auto _ : st) benchmark::DoNotOptimize(w.eval(x, 1e-3));
}
BENCHMARK(BM_PentagonEval);

static void BM_CocycleCheck(benchmark::State& st) {
  auto m = make_model("axb");
  SamplePlan p;
  p.count = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(check_cocycle(m, p));
  st.SetItemsProcessed(st.iterations() * p.count);
}
BENCHMARK(BM_CocycleCheck)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_MatchedPair35b(benchmark::State& st) {
  auto m = make_model("gl2");
  SamplePlan p;
  p.count = 2000;
  for (auto _ : st) benchmark::DoNotOptimize(check_35b(m, p));
}
BENCHMARK(BM_MatchedPair35b)->Unit(benchmark::kMillisecond);

static void BM_OpKN(benchmark::State& st) {
  GridConfig g{static_cast<int>(st.range(0)), 12.0};
  GFunction f = sample(test_family()[0], g);
  for (auto _ : st) benchmark::DoNotOptimize(op_kn(f));
}
BENCHMARK(BM_OpKN)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

static void BM_Star(benchmark::State& st) {
  GridConfig g{static_cast<int>(st.range(0)), 12.0};
  auto fam = test_family();
  GFunction f1 = fourier_v(sample(fam[0], g)), f2 = fourier_v(sample(fam[1], g));
  for (auto _ : st) benchmark::DoNotOptimize(star(f1, f2));
}
BENCHMARK(BM_Star)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
