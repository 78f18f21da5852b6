#pragma once

#include <random>
#include <sstream>
#include <vector>

#include "scope_route/network.hpp"
#include "scope_route/scope_search.hpp"

namespace scope_route::testing {

// Bidirected four-vertex chain a-b-c-d: the outer links have scope level 1,
// the middle link is unbounded, every edge weighs 100. With nu_1 = 250 the
// chain is traversable end to end in one direction; with nu_1 = 100 the
// admissibility budget of level 1 runs out at c.
inline RoadNetwork chain_network() {
  std::vector<Edge> edges;
  auto bidir = [&](Vertex u, Vertex v, Weight w, Level l) {
    edges.push_back({u, v, w, l});
    edges.push_back({v, u, w, l});
  };
  bidir(0, 1, 100, 1);
  bidir(1, 2, 100, kLevelInf);
  bidir(2, 3, 100, 1);
  return RoadNetwork(4, std::move(edges));
}

inline ScopeConfig chain_config(Weight nu1 = 250, Weight kappa1 = 50) {
  return ScopeConfig({{0, 0, 1}, {1, nu1, kappa1}, {kLevelInf, kInfWeight, 0}});
}

struct TinyInstance {
  RoadNetwork net;
  ScopeConfig config;
};

// Random connected-ish multigraph small enough for the exhaustive oracle:
// at most 8 vertices, integral weights, levels drawn from {0, 1, inf}.
inline TinyInstance random_tiny(std::mt19937_64& rng) {
  std::uniform_int_distribution<Vertex> nv(3, 8);
  const Vertex n = nv(rng);
  std::uniform_int_distribution<int> weight(1, 9);
  std::uniform_int_distribution<int> level_pick(0, 5);
  std::uniform_int_distribution<int> coin(0, 99);
  std::vector<Edge> edges;
  auto level_of = [&] {
    const int p = level_pick(rng);
    if (p < 2) return Level{0};
    if (p < 4) return Level{1};
    return kLevelInf;
  };
  // A random spanning cycle keeps most instances routing-connected.
  std::vector<Vertex> order(n);
  for (Vertex v = 0; v < n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  for (Vertex i = 0; i < n; ++i) {
    edges.push_back({order[i], order[(i + 1) % n],
                     static_cast<Weight>(weight(rng)), level_of()});
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v || coin(rng) >= 25) continue;
      edges.push_back({u, v, static_cast<Weight>(weight(rng)), level_of()});
    }
  std::uniform_int_distribution<int> nu1(3, 30);
  std::uniform_int_distribution<int> k1(2, 6);
  ScopeConfig config({{0, 0, 1},
                      {1, static_cast<Weight>(nu1(rng)), static_cast<Weight>(k1(rng))},
                      {kLevelInf, kInfWeight, 0}});
  return {RoadNetwork(n, std::move(edges)), std::move(config)};
}

}  // namespace scope_route::testing
