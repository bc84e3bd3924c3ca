// Probe kernel throughput: serial reference against the OpenMP batch.

#include <benchmark/benchmark.h>

#include "smoothkit/probe.hpp"
#include "smoothkit/sampler.hpp"

using namespace smoothkit;

namespace {

std::vector<ProbeTask> tasks(int n) {
  ExprSampler s(2, 7);
  std::vector<ProbeTask> out;
  for (int i = 0; i < n; ++i)
    out.push_back({{s.small_rational(), s.small_rational()}, {Scalar(1), s.small_rational()}});
  return out;
}

const Expr& target() {
  static const Expr e = parse_expr("abs(x0)*x1^2 + flat(x0 - 1/2)*sin(x1) + norm(x0, x1)^3", 2);
  return e;
}

void BM_probe_serial(benchmark::State& st) {
  auto t = tasks(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(probe_batch_serial(target(), t));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_probe_parallel(benchmark::State& st) {
  auto t = tasks(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(probe_batch_parallel(target(), t));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

}  // namespace

BENCHMARK(BM_probe_serial)->Arg(64)->Arg(512)->UseRealTime();
BENCHMARK(BM_probe_parallel)->Arg(64)->Arg(512)->UseRealTime();

BENCHMARK_MAIN();
