#include "doctest.h"
#include "helpers.hpp"
#include "scope_route/validate.hpp"

using namespace scope_route;
using scope_route::testing::chain_config;
using scope_route::testing::chain_network;

TEST_CASE("routing connectivity") {
  CHECK(is_routing_connected(chain_network()));
  // One-way edge between two otherwise separate pairs: not routing-connected.
  const RoadNetwork oneway(4, {{0, 1, 1, kLevelInf},
                               {1, 0, 1, kLevelInf},
                               {1, 2, 1, kLevelInf},
                               {2, 3, 1, kLevelInf},
                               {3, 2, 1, kLevelInf}});
  CHECK(!is_routing_connected(oneway));
  // Vertices with no edges do not matter.
  const RoadNetwork isolated(5, {{0, 1, 1, kLevelInf}, {1, 0, 1, kLevelInf}});
  CHECK(is_routing_connected(isolated));
  CHECK(is_routing_connected(RoadNetwork(3, {})));
}

TEST_CASE("proper scope requires every level subgraph to be routing-connected") {
  const ScopeConfig cfg = chain_config();
  // In the chain fixture the unbounded subgraph is the single bidirected
  // middle link: connected. Level 1 and level 0 subgraphs contain everything
  // at their level or above.
  CHECK(validate_proper_scope(chain_network(), cfg).empty());

  // Two unbounded islands joined only by a level-1 bridge: G^[inf] is
  // disconnected.
  const RoadNetwork bad(4, {{0, 1, 1, kLevelInf},
                            {1, 0, 1, kLevelInf},
                            {2, 3, 1, kLevelInf},
                            {3, 2, 1, kLevelInf},
                            {1, 2, 1, 1},
                            {2, 1, 1, 1}});
  const auto violations = validate_proper_scope(bad, cfg);
  REQUIRE(!violations.empty());
  CHECK(violations.front().level == kLevelInf);
}

TEST_CASE("well-distributedness flags oversized low-level pockets") {
  const ScopeConfig cfg = chain_config();
  // A long level-0 path hanging off an unbounded loop.
  std::vector<Edge> edges{{0, 1, 1, kLevelInf}, {1, 0, 1, kLevelInf}};
  for (Vertex v = 1; v < 6; ++v) {
    edges.push_back({v, v + 1, 1, 0});
    edges.push_back({v + 1, v, 1, 0});
  }
  const RoadNetwork net(7, std::move(edges));

  SizeLimits tight{{1, 2}};
  const auto violations = check_well_distributed(net, cfg, tight);
  REQUIRE(violations.size() == 1);
  CHECK(violations.front().level == 1);
  CHECK(violations.front().component.size() == 5);  // vertices 2..6

  SizeLimits loose{{1, 10}};
  CHECK(check_well_distributed(net, cfg, loose).empty());
}

TEST_CASE("default size limits shrink toward lower levels") {
  const ScopeConfig cfg = chain_config();
  const SizeLimits limits = default_size_limits(cfg, 128);
  CHECK(limits.at(kLevelInf) == 128);
  CHECK(limits.at(1) == 32);
}

TEST_CASE("upgrade repair promotes a crossing walk") {
  const ScopeConfig cfg = chain_config();
  // Unbounded ring 0-1-2-3 with a level-0 chord chain 1-4-5-3 that is too
  // large for the limit.
  std::vector<Edge> edges;
  auto bidir = [&](Vertex u, Vertex v, Level l) {
    edges.push_back({u, v, 1, l});
    edges.push_back({v, u, 1, l});
  };
  bidir(0, 1, kLevelInf);
  bidir(1, 2, kLevelInf);
  bidir(2, 3, kLevelInf);
  bidir(3, 0, kLevelInf);
  bidir(1, 4, 0);
  bidir(4, 5, 0);
  bidir(5, 3, 0);
  const RoadNetwork net(6, std::move(edges));

  SizeLimits limits{{1, 1}};
  auto violations = check_well_distributed(net, cfg, limits);
  REQUIRE(!violations.empty());
  auto [repaired, remaining] = repair_well_distributed(net, cfg, limits);
  CHECK(remaining.empty());
  CHECK(check_well_distributed(repaired, cfg, limits).empty());
  // Repair only raises levels, never rewires.
  REQUIRE(repaired.edge_count() == net.edge_count());
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    CHECK(repaired.edge(e).tail == net.edge(e).tail);
    CHECK(repaired.edge(e).head == net.edge(e).head);
    CHECK(repaired.edge(e).weight == net.edge(e).weight);
    CHECK(repaired.edge(e).level >= net.edge(e).level);
  }
}

TEST_CASE("full validation of the chain fixture") {
  const auto report = validate_network(chain_network(), chain_config(), {});
  CHECK(report.ok());
}
