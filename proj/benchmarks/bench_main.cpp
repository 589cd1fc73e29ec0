#include <benchmark/benchmark.h>

#include <vector>

#include "entrograph/counting.hpp"
#include "entrograph/entropy.hpp"
#include "entrograph/generate.hpp"
#include "entrograph/genfun.hpp"
#include "entrograph/incremental.hpp"
#include "entrograph/persistence.hpp"

using namespace entrograph;

namespace {

MetricGraph random_graph(std::size_t n, std::size_t m, std::uint64_t seed = 7) {
  GeneratorSpec spec;
  spec.seed = seed;
  spec.vertices = n;
  spec.edges = m;
  spec.hyperbolic = true;
  return generate_graph(spec);
}

void BM_VolumeEntropy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MetricGraph g = random_graph(n, 2 * n);
  for (auto _ : state) benchmark::DoNotOptimize(volume_entropy(g).h);
  state.counters["darts"] = static_cast<double>(g.dart_count());
}
BENCHMARK(BM_VolumeEntropy)->RangeMultiplier(2)->Range(4, 64);

void BM_EdgeAddition(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MetricGraph g = random_graph(n, 2 * n);
  VertexId x = 0, y = 1;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v = u + 1; v < n; ++v) {
      if (!g.adjacent(u, v)) {
        x = u;
        y = v;
        u = n;
        break;
      }
    }
  }
  IncrementalOptions opt;
  opt.whole_graph = false;
  for (auto _ : state) benchmark::DoNotOptimize(entropy_after_edge(g, x, y, 1.0, opt).h_prime);
}
BENCHMARK(BM_EdgeAddition)->RangeMultiplier(2)->Range(4, 64);

void BM_PathSeries(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MetricGraph g = random_graph(n, 2 * n);
  const double t = volume_entropy(g).h + 0.5;
  for (auto _ : state) {
    const PathSeries s(g, t);
    benchmark::DoNotOptimize(s.f(0, 1));
  }
}
BENCHMARK(BM_PathSeries)->RangeMultiplier(2)->Range(4, 64);

void BM_Enumerate(benchmark::State& state) {
  const MetricGraph g = random_graph(6, 10);
  EnumerationSpec spec;
  spec.source = 0;
  spec.horizon = static_cast<double>(state.range(0));
  std::size_t count = 0;
  for (auto _ : state) {
    count = enumerate(g, spec).size();
    benchmark::DoNotOptimize(count);
  }
  state.counters["paths"] = static_cast<double>(count);
}
BENCHMARK(BM_Enumerate)->DenseRange(8, 16, 4);

void BM_Persistence(benchmark::State& state) {
  const MetricGraph g = random_graph(12, 30);
  const auto strategy = static_cast<Strategy>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(persistent_entropy(g, strategy).steps.size());
  state.SetLabel(to_string(strategy));
}
BENCHMARK(BM_Persistence)->DenseRange(0, 2);

}  // namespace
BENCHMARK_MAIN();
