#pragma once

#include <optional>
#include <vector>

#include "scope_route/scope_search.hpp"

namespace scope_route {

/// Exhaustive-enumeration counterpart of the scope-aware search, for tiny
/// networks only (guard: <= 12 vertices or <= 30 edges, strictly positive
/// weights). All simple paths from the source are enumerated and processed
/// in increasing weight order; a path is accepted when its prefix is an
/// accepted minimum-weight path and the merged admissibility sums at the
/// prefix end admit its last edge.
struct OracleLabels {
  struct PathRec {
    std::int32_t parent;  // -1 for the root
    EdgeId edge;
    Vertex end;
    Weight weight;
    bool accepted;
    bool tight;  // accepted and weight == dist[end]
  };

  Vertex source = 0;
  std::size_t sigma_width = 0;
  std::vector<Weight> dist;
  std::vector<Weight> sigma_min;  // vertex-major, merged over tight paths
  std::vector<PathRec> paths;
  std::vector<std::int32_t> best_path;  // a tight accepted path per vertex, -1 if none

  Weight sigma_at(Vertex v, std::size_t level_idx) const {
    return sigma_min[v * sigma_width + level_idx];
  }
  bool saturated(const ScopeConfig& config, Vertex v) const;
};

OracleLabels oracle_forward(const RoadNetwork& net, const ScopeConfig& config,
                            const HandicapTable& handicaps, Vertex source,
                            std::size_t hop_bound);

/// Minimum-weight st-admissible connection: forward enumeration from s,
/// reverse enumeration from t on the reverse network, best concatenation
/// over all meeting vertices.
std::optional<std::pair<Weight, Walk>> oracle_admissible_optimum(const RoadNetwork& net,
                                                                 const ScopeConfig& config,
                                                                 Vertex s, Vertex t,
                                                                 std::size_t hop_bound);

}  // namespace scope_route
