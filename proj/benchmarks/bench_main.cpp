#include <benchmark/benchmark.h>

#include "ssint/io.hpp"

using namespace ssint;

static void BM_padic_mul(benchmark::State& st) {
  auto P = PAdicParams::get(5, 4, (int)st.range(0));
  PAdic a = PAdic::teichmuller(P.get(), Residue{1, 2, 3, 4}) + PAdic::from_int(P.get(), 10);
  PAdic b = PAdic::gen(P.get()) + PAdic::from_int(P.get(), 7);
  for (auto _ : st) {
    a = a * b;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_padic_mul)->Arg(8)->Arg(16);

static void BM_f_infinity(benchmark::State& st) {
  auto H = build_model(CrystalCase::HilbertSplit, 5, 2, 12, {0});
  auto C = make_curve(H, (int)st.range(0), {{1, {1}}}, {{1, {1}}});
  for (auto _ : st) benchmark::DoNotOptimize(f_infinity(H, C));
}
BENCHMARK(BM_f_infinity)->Arg(13)->Arg(63)->Unit(benchmark::kMillisecond);

static void BM_local_density(benchmark::State& st) {
  IntLattice L = IntLattice::diagonal({1, 5, 2, 10, 3});
  int64_t m = 1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(local_density(5, L, m));
    m = m % 200 + 1;
  }
}
BENCHMARK(BM_local_density);

static void BM_hanke_density(benchmark::State& st) {
  IntLattice L = IntLattice::diagonal({1, 5, 2, 10, 3});
  int64_t m = 1;
  for (auto _ : st) {
    benchmark::DoNotOptimize(hanke_density(5, L, m));
    m = m % 200 + 1;
    if (m % 25 == 0) ++m;
  }
}
BENCHMARK(BM_hanke_density);

static void BM_norm_counts(benchmark::State& st) {
  IntLattice L = IntLattice::diagonal({1, 1, 1, 1, 1});
  for (auto _ : st) benchmark::DoNotOptimize(norm_counts(L, st.range(0)));
}
BENCHMARK(BM_norm_counts)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

static void BM_budget_demo(benchmark::State& st) {
  DemoSpec s = demo_from_config(Config::load(SSINT_FIXTURES "/budget_h5.cfg"));
  for (auto _ : st) benchmark::DoNotOptimize(run_budget_demo(s));
}
BENCHMARK(BM_budget_demo)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
