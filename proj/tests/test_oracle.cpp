#include "doctest.h"
#include "helpers.hpp"
#include "scope_route/oracle.hpp"

using namespace scope_route;
using scope_route::testing::chain_config;
using scope_route::testing::chain_network;

TEST_CASE("enumeration oracle on the chain fixture") {
  const RoadNetwork net = chain_network();
  const ScopeConfig cfg = chain_config(250, 50);
  const HandicapTable h = compute_turn_handicaps(net);
  const OracleLabels labels = oracle_forward(net, cfg, h, 0, 4);
  CHECK(labels.dist[3] == 300);
  CHECK(labels.sigma_at(2, cfg.bounded_index(1)) == 150);
  CHECK(!labels.saturated(cfg, 2));

  const auto opt = oracle_admissible_optimum(net, cfg, 0, 3, 4);
  REQUIRE(opt);
  CHECK(opt->first == 300);
  CHECK(opt->second.vertices == std::vector<Vertex>{0, 1, 2, 3});
}

TEST_CASE("oracle guard rejects large or nonpositive inputs") {
  // 13 isolated-ish vertices with 31 edges: both limits exceeded.
  std::vector<Edge> edges;
  for (EdgeId i = 0; i < 31; ++i)
    edges.push_back({static_cast<Vertex>(i % 13), static_cast<Vertex>((i + 1) % 13), 1,
                     kLevelInf});
  const RoadNetwork big(13, std::move(edges));
  CHECK_THROWS_AS(oracle_forward(big, chain_config(), compute_turn_handicaps(big), 0, 13),
                  std::invalid_argument);

  const RoadNetwork zero(2, {{0, 1, 0, kLevelInf}});
  CHECK_THROWS_AS(oracle_forward(zero, chain_config(), compute_turn_handicaps(zero), 0, 2),
                  std::invalid_argument);
}

TEST_CASE("oracle respects the hop bound") {
  const RoadNetwork net = chain_network();
  const ScopeConfig cfg = chain_config(250, 50);
  const HandicapTable h = compute_turn_handicaps(net);
  const OracleLabels short_labels = oracle_forward(net, cfg, h, 0, 2);
  CHECK(short_labels.dist[2] == 200);
  CHECK(short_labels.dist[3] == kInfWeight);
}
