#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "scope_route/oracle.hpp"
#include "scope_route/scope_search.hpp"

using namespace scope_route;
using scope_route::testing::chain_config;
using scope_route::testing::chain_network;
using scope_route::testing::random_tiny;

TEST_CASE("scope search on the chain fixture") {
  const RoadNetwork net = chain_network();
  const ScopeConfig cfg = chain_config(250, 50);
  const HandicapTable h = compute_turn_handicaps(net);
  const SearchLabels labels = s_dijkstra(net, cfg, h, 0);

  CHECK(labels.dist[1] == 100);
  CHECK(labels.dist[2] == 200);
  CHECK(labels.dist[3] == 300);
  // Level-1 admissibility sum at c: the first link pays the turn handicap
  // (the next departure can be unbounded), the unbounded link pays its
  // weight.
  const std::size_t l1 = cfg.bounded_index(1);
  CHECK(labels.sigma_at(2, l1) == 150);
  // Level 0 saturates immediately: every edge weight counts.
  CHECK(labels.sigma_at(2, cfg.bounded_index(0)) == 200);
  CHECK(!is_saturated(labels, cfg, 2));

  const auto walk = construct_walk(labels, net, 3);
  REQUIRE(walk);
  CHECK(walk->weight == 300);
  CHECK(walk->vertices == std::vector<Vertex>{0, 1, 2, 3});
}

TEST_CASE("a tight scope budget cuts the forward search but not the split optimum") {
  const RoadNetwork net = chain_network();
  const ScopeConfig cfg = chain_config(100, 50);
  const HandicapTable h = compute_turn_handicaps(net);
  const SearchLabels labels = s_dijkstra(net, cfg, h, 0);

  // sigma_1(c) = 150 > 100, so c is saturated and the level-1 link to d is
  // no longer admissible.
  CHECK(is_saturated(labels, cfg, 2));
  CHECK(labels.dist[3] == kInfWeight);

  // Splitting the walk between a forward prefix and a reverse suffix
  // restores the connection.
  const ScopeNetwork sn = ScopeNetwork::build(net, cfg);
  const auto bidir = bidirectional_s_dijkstra(sn, 0, 3);
  REQUIRE(bidir);
  CHECK(bidir->weight == 300);
  CHECK(bidir->walk.vertices.front() == 0);
  CHECK(bidir->walk.vertices.back() == 3);
}

TEST_CASE("unidirectional search matches the exhaustive enumeration") {
  std::mt19937_64 rng(20260823);
  for (int it = 0; it < 120; ++it) {
    const auto inst = random_tiny(rng);
    const HandicapTable h = compute_turn_handicaps(inst.net);
    for (Vertex s = 0; s < inst.net.vertex_count(); ++s) {
      const SearchLabels labels = s_dijkstra(inst.net, inst.config, h, s);
      const OracleLabels oracle =
          oracle_forward(inst.net, inst.config, h, s, inst.net.vertex_count());
      for (Vertex v = 0; v < inst.net.vertex_count(); ++v) {
        CAPTURE(it);
        CAPTURE(s);
        CAPTURE(v);
        REQUIRE(labels.dist[v] == oracle.dist[v]);
        if (labels.dist[v] == kInfWeight) continue;
        for (std::size_t l = 0; l < labels.sigma_width; ++l)
          REQUIRE(labels.sigma_at(v, l) == oracle.sigma_at(v, l));
        REQUIRE(is_saturated(labels, inst.config, v) ==
                oracle.saturated(inst.config, v));
      }
    }
  }
}

TEST_CASE("bidirectional search matches the enumerated split optimum") {
  std::mt19937_64 rng(7);
  for (int it = 0; it < 40; ++it) {
    const auto inst = random_tiny(rng);
    const ScopeNetwork sn = ScopeNetwork::build(inst.net, inst.config);
    for (Vertex s = 0; s < inst.net.vertex_count(); ++s)
      for (Vertex t = 0; t < inst.net.vertex_count(); ++t) {
        if (s == t) continue;
        const auto expect = oracle_admissible_optimum(inst.net, inst.config, s, t,
                                                      inst.net.vertex_count());
        const auto got = bidirectional_s_dijkstra(sn, s, t);
        CAPTURE(it);
        CAPTURE(s);
        CAPTURE(t);
        REQUIRE(got.has_value() == expect.has_value());
        if (!got) continue;
        REQUIRE(got->weight == expect->first);
        // The reported walk is consistent: endpoints and edge weights add up.
        REQUIRE(got->walk.vertices.front() == s);
        REQUIRE(got->walk.vertices.back() == t);
        Weight w = 0;
        for (std::size_t i = 0; i < got->walk.edges.size(); ++i) {
          const Edge& e = inst.net.edge(got->walk.edges[i]);
          REQUIRE(e.tail == got->walk.vertices[i]);
          REQUIRE(e.head == got->walk.vertices[i + 1]);
          w += e.weight;
        }
        REQUIRE(w == got->weight);
      }
  }
}

TEST_CASE("run_to_completion changes nothing") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 25; ++it) {
    const auto inst = random_tiny(rng);
    const ScopeNetwork sn = ScopeNetwork::build(inst.net, inst.config);
    BidirOptions full;
    full.run_to_completion = true;
    for (Vertex s = 0; s < inst.net.vertex_count(); ++s)
      for (Vertex t = 0; t < inst.net.vertex_count(); ++t) {
        if (s == t) continue;
        const auto a = bidirectional_s_dijkstra(sn, s, t);
        const auto b = bidirectional_s_dijkstra(sn, s, t, full);
        REQUIRE(a.has_value() == b.has_value());
        if (a) REQUIRE(a->weight == b->weight);
      }
  }
}

TEST_CASE("edge masks restrict the search") {
  const RoadNetwork net = chain_network();
  const ScopeConfig cfg = chain_config();
  const HandicapTable h = compute_turn_handicaps(net);
  std::vector<char> mask(net.edge_count(), 1);
  mask[2] = mask[3] = 0;  // drop the unbounded middle link
  SearchOptions options;
  options.edge_mask = &mask;
  const SearchLabels labels = s_dijkstra(net, cfg, h, 0, options);
  CHECK(labels.dist[1] == 100);
  CHECK(labels.dist[2] == kInfWeight);
}
