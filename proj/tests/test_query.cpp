#include <random>

#include "doctest.h"
#include "scope_route/query.hpp"
#include "scope_route/synth.hpp"

using namespace scope_route;

namespace {

struct Fixture {
  SyntheticNetwork synth;
  PreprocessedBundle bundle;
  ScopeNetwork sn;

  explicit Fixture(std::uint32_t cities, std::uint64_t seed) {
    SynthParams params;
    params.cities_x = cities;
    params.cities_y = cities;
    synth = generate_synthetic(params, seed);
    PreprocessOptions options;
    options.threads = 2;
    bundle = preprocess_network(synth.net, synth.config, options);
    sn = ScopeNetwork::build(synth.net, synth.config);
  }
};

void check_walk(const RoadNetwork& net, const QueryResult& r, Vertex s, Vertex t) {
  REQUIRE(!r.walk.vertices.empty());
  REQUIRE(r.walk.vertices.front() == s);
  REQUIRE(r.walk.vertices.back() == t);
  Weight w = 0;
  for (std::size_t i = 0; i < r.walk.edges.size(); ++i) {
    const Edge& e = net.edge(r.walk.edges[i]);
    REQUIRE(e.tail == r.walk.vertices[i]);
    REQUIRE(e.head == r.walk.vertices[i + 1]);
    w += e.weight;
  }
  REQUIRE(w == r.weight);
}

}  // namespace

TEST_CASE("query answers match the full bidirectional reference") {
  const Fixture fx(2, 3);
  const QueryEngine engine(fx.synth.net, fx.bundle);
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  BidirOptions reference_options;  // unpruned, exact
  for (int i = 0; i < 120; ++i) {
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const auto reference = bidirectional_s_dijkstra(fx.sn, s, t, reference_options);
    const QueryResult r = engine.query(s, t);
    CAPTURE(s);
    CAPTURE(t);
    REQUIRE(r.weight != kInfWeight);
    REQUIRE(reference);
    REQUIRE(r.weight == reference->weight);
    check_walk(fx.synth.net, r, s, t);
  }
}

TEST_CASE("pruning and early exit are answer-preserving") {
  const Fixture fx(2, 9);
  const QueryEngine engine(fx.synth.net, fx.bundle);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  for (int i = 0; i < 40; ++i) {
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const QueryResult a = engine.query(s, t);
    QueryOptions no_prune;
    no_prune.prune = false;
    const QueryResult b = engine.query(s, t, no_prune);
    QueryOptions no_exit;
    no_exit.early_exit = false;
    const QueryResult c = engine.query(s, t, no_exit);
    CAPTURE(s);
    CAPTURE(t);
    REQUIRE(a.weight == b.weight);
    REQUIRE(a.weight == c.weight);
  }
}

TEST_CASE("trivial and identical endpoints") {
  const Fixture fx(2, 5);
  const QueryEngine engine(fx.synth.net, fx.bundle);
  const QueryResult same = engine.query(7, 7);
  CHECK(same.weight == 0);
  CHECK(same.walk.vertices == std::vector<Vertex>{7});
  CHECK_THROWS_AS(engine.query(0, fx.synth.net.vertex_count()), std::out_of_range);
}

TEST_CASE("query statistics are populated") {
  const Fixture fx(2, 13);
  const QueryEngine engine(fx.synth.net, fx.bundle);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  bool saw_opening = false;
  for (int i = 0; i < 20; ++i) {
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const QueryResult r = engine.query(s, t);
    CHECK(r.stats.cells_hit >= 1);
    CHECK(r.stats.total_scanned() > 0);
    saw_opening = saw_opening || r.stats.opening_scanned > 0;
  }
  CHECK(saw_opening);
}
