#include <benchmark/benchmark.h>

#include "cubical/cylinder.hpp"
#include "cubical/demorgan.hpp"
#include "cubical/lifting.hpp"
#include "cubical/nerve.hpp"

using namespace cubical;

static void BM_DmJoinMeet(benchmark::State& st) {
  auto e = dm_enumerate(2);
  std::size_t i = 0;
  for (auto _ : st) {
    const DmElem &a = e[i % e.size()], &b = e[(i * 7 + 3) % e.size()];
    benchmark::DoNotOptimize(dm_meet(dm_join(a, b), dm_neg(a)));
    ++i;
  }
}
BENCHMARK(BM_DmJoinMeet);

static void BM_DmTable(benchmark::State& st) {
  for (auto _ : st) {
    DmTable t(2);
    benchmark::DoNotOptimize(t.size());
  }
}
BENCHMARK(BM_DmTable)->Unit(benchmark::kMillisecond);

static void BM_CylinderAxioms(benchmark::State& st) {
  auto s = CubeSite::shared(2);
  Nerve e = nerve(s, 2, {{0, 1}});
  for (auto _ : st) benchmark::DoNotOptimize(check_cylinder_axioms(cyl_pack(e.obj)));
}
BENCHMARK(BM_CylinderAxioms)->Unit(benchmark::kMillisecond);

static void BM_SynthFib(benchmark::State& st) {
  auto s = CubeSite::shared(static_cast<unsigned>(st.range(0)));
  Nerve e = nerve(s, 2, {{0, 1}}), pt = nerve(s, 1, {});
  PshMap f = to_terminal(e.obj, pt.obj);
  for (auto _ : st) {
    SearchBudget b;
    benchmark::DoNotOptimize(synth_fib(f, b).structure.has_value());
  }
}
BENCHMARK(BM_SynthFib)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

static void BM_SynthTrivFib(benchmark::State& st) {
  auto s = CubeSite::shared(1);
  Nerve e = nerve(s, 2, {{0, 1}}), pt = nerve(s, 1, {});
  PshMap f = to_terminal(e.obj, pt.obj);
  for (auto _ : st) {
    SearchBudget b;
    benchmark::DoNotOptimize(synth_trivfib(f, b).structure.has_value());
  }
}
BENCHMARK(BM_SynthTrivFib)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
