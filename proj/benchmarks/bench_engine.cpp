// Microbenchmarks for the search kernels and the multi-stage query engine,
// all over one deterministic synthetic network per size.

#include <benchmark/benchmark.h>

#include <random>

#include "scope_route/boundary.hpp"
#include "scope_route/classical.hpp"
#include "scope_route/query.hpp"
#include "scope_route/synth.hpp"

namespace {

using namespace scope_route;

struct Fixture {
  RoadNetwork net;
  ScopeConfig config;
  ScopeNetwork sn;
  DiGraph g, grev;
  PreprocessedBundle bundle;

  explicit Fixture(unsigned cities) {
    SynthParams params;
    params.cities_x = params.cities_y = cities;
    SyntheticNetwork synth = generate_synthetic(params, 42);
    net = std::move(synth.net);
    config = std::move(synth.config);
    sn = ScopeNetwork::build(net, config);
    g = DiGraph::from_network(net);
    grev = g.reversed();
    bundle = preprocess_network(net, config, {});
  }
};

const Fixture& fixture(unsigned cities) {
  static const Fixture small(4);
  static const Fixture large(10);
  return cities <= 4 ? small : large;
}

std::pair<Vertex, Vertex> random_pair(const Fixture& f, std::mt19937_64& rng) {
  std::uniform_int_distribution<Vertex> pick(0, f.net.vertex_count() - 1);
  Vertex s = pick(rng), t = pick(rng);
  while (s == t) t = pick(rng);
  return {s, t};
}

void BM_SDijkstra(benchmark::State& state) {
  const Fixture& f = fixture(unsigned(state.range(0)));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Vertex> pick(0, f.net.vertex_count() - 1);
  for (auto _ : state) {
    const SearchLabels labels = s_dijkstra(f.net, f.config, f.sn.handicaps, pick(rng));
    benchmark::DoNotOptimize(labels.dist.data());
  }
}
BENCHMARK(BM_SDijkstra)->Arg(4)->Arg(10);

void BM_BidirectionalSDijkstra(benchmark::State& state) {
  const Fixture& f = fixture(unsigned(state.range(0)));
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    const auto [s, t] = random_pair(f, rng);
    auto r = bidirectional_s_dijkstra(f.sn, s, t);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_BidirectionalSDijkstra)->Arg(4)->Arg(10);

void BM_BidirectionalDijkstraBaseline(benchmark::State& state) {
  const Fixture& f = fixture(unsigned(state.range(0)));
  std::mt19937_64 rng(2);  // same pairs as the scope-aware run
  for (auto _ : state) {
    const auto [s, t] = random_pair(f, rng);
    auto r = bidirectional_dijkstra(f.g, f.grev, s, t);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_BidirectionalDijkstraBaseline)->Arg(4)->Arg(10);

void BM_Preprocess(benchmark::State& state) {
  const Fixture& f = fixture(unsigned(state.range(0)));
  for (auto _ : state) {
    PreprocessedBundle b = preprocess_network(f.net, f.config, {});
    benchmark::DoNotOptimize(b.boundary.edges.data());
  }
}
BENCHMARK(BM_Preprocess)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Query(benchmark::State& state) {
  const Fixture& f = fixture(unsigned(state.range(0)));
  const QueryEngine engine(f.net, f.bundle);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    const auto [s, t] = random_pair(f, rng);
    QueryResult r = engine.query(s, t);
    benchmark::DoNotOptimize(r.weight);
  }
}
BENCHMARK(BM_Query)->Arg(4)->Arg(10);

void BM_QueryUnpruned(benchmark::State& state) {
  const Fixture& f = fixture(unsigned(state.range(0)));
  const QueryEngine engine(f.net, f.bundle);
  std::mt19937_64 rng(3);
  QueryOptions options;
  options.prune = false;
  options.early_exit = false;
  for (auto _ : state) {
    const auto [s, t] = random_pair(f, rng);
    QueryResult r = engine.query(s, t, options);
    benchmark::DoNotOptimize(r.weight);
  }
}
BENCHMARK(BM_QueryUnpruned)->Arg(4)->Arg(10);

}  // namespace

BENCHMARK_MAIN();
