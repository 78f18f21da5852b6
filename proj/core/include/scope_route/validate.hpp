#pragma once

#include <map>
#include <optional>
#include <vector>

#include "scope_route/network.hpp"

namespace scope_route {

struct ProperScopeViolation {
  Level level;
  // Witness pair: no walk in G^[level] starts with `from_edge` and ends
  // with `to_edge`.
  EdgeId from_edge;
  EdgeId to_edge;
};

struct WellDistributedViolation {
  Level level;
  std::vector<Vertex> component;  // component of G - V(G^[level]) over the limit
};

struct ValidationReport {
  bool routing_connected = false;
  std::vector<ProperScopeViolation> proper_scope_violations;
  std::vector<WellDistributedViolation> well_distributed_violations;

  bool ok() const {
    return routing_connected && proper_scope_violations.empty() &&
           well_distributed_violations.empty();
  }
};

/// Per-level component size limits for the well-distributedness check.
using SizeLimits = std::map<Level, std::size_t>;

/// True iff all edge endpoints lie in a single strongly connected component
/// (equivalently: every edge pair e,f is joined by a walk starting with e and
/// ending with f). Vacuously true for edgeless graphs. An optional edge mask
/// restricts the graph to the flagged edges.
bool is_routing_connected(const RoadNetwork& net,
                          const std::vector<char>* edge_mask = nullptr);

/// Checks routing connectivity of every G^[i] (edges with level >= i), for
/// each level i of the config.
std::vector<ProperScopeViolation> validate_proper_scope(const RoadNetwork& net,
                                                        const ScopeConfig& config);

/// For each level i, finds weakly connected components of the subgraph
/// induced by vertices incident only with edges of level < i, and reports
/// those larger than the limit for i. Levels missing from `limits` are
/// treated as unlimited.
std::vector<WellDistributedViolation> check_well_distributed(const RoadNetwork& net,
                                                             const ScopeConfig& config,
                                                             const SizeLimits& limits);

ValidationReport validate_network(const RoadNetwork& net, const ScopeConfig& config,
                                  const SizeLimits& limits);

/// Default limits: `expected_cell_size` for the unbounded level, scaled down
/// by a factor of 4 per bounded level going down.
SizeLimits default_size_limits(const ScopeConfig& config, std::size_t expected_cell_size);

/// Raises every edge on a minimum-weight walk crossing the violating
/// component (between two attachment vertices of G^[level]) to `level`.
/// Returns the repaired network, or nullopt when the component has fewer
/// than two usable attachment points.
std::optional<RoadNetwork> upgrade_repair(const RoadNetwork& net,
                                          const WellDistributedViolation& violation);

/// Applies upgrade_repair to the first violation until none remain or no
/// progress is possible. Unrepairable violations are returned.
std::pair<RoadNetwork, std::vector<WellDistributedViolation>> repair_well_distributed(
    RoadNetwork net, const ScopeConfig& config, const SizeLimits& limits);

}  // namespace scope_route
