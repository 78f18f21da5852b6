#pragma once

#include <cstdint>
#include <map>

#include "scope_route/network.hpp"

namespace scope_route {

/// Parameters for the synthetic hierarchical road-network generator.
/// Cities are laid out on a grid; each city is a block grid of urban
/// streets (level 2) with an arterial cross (level 3), local cul-de-sacs
/// (level 1), a few alleys (level 0), and a highway interchange. Adjacent
/// city interchanges are joined by level-inf highways.
struct SynthParams {
  std::uint32_t cities_x = 4;
  std::uint32_t cities_y = 4;
  std::uint32_t block_size = 5;      // city grid is block_size x block_size
  std::uint32_t locals_per_city = 3; // level-1 cul-de-sacs
  std::uint32_t alleys_per_city = 2; // level-0 pendant stubs
  bool intercity_highways = true;

  double city_spacing = 1000.0;
  double block_spacing = 100.0;

  // Scope values / handicaps for levels 1..3 (level 0 is fixed at nu=0).
  Weight nu1 = 150, nu2 = 400, nu3 = 1500;
  Weight kappa0 = 1, kappa1 = 40, kappa2 = 120, kappa3 = 300;
};

struct SyntheticNetwork {
  RoadNetwork net;
  ScopeConfig config;
  std::map<Level, std::size_t> level_distribution;  // edges per scope level
};

/// Deterministic for a fixed seed; the output is routing-connected with a
/// proper, well-distributed scope by construction. Weights are integral and
/// at least the Euclidean distance between the endpoints, so the Euclidean
/// potential with v_max = 1 is feasible.
SyntheticNetwork generate_synthetic(const SynthParams& params, std::uint64_t seed);

}  // namespace scope_route
