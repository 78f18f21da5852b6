#pragma once

#include <optional>
#include <vector>

#include "scope_route/network.hpp"

namespace scope_route {

struct SearchStats {
  std::size_t scanned_vertices = 0;
  std::size_t max_queue_size = 0;
};

/// Labels of one scope-aware search: distance d, predecessor edge pi, and
/// the admissibility vector sigma (one component per bounded level of the
/// config, in bounded() order).
struct SearchLabels {
  Vertex source = 0;
  std::size_t sigma_width = 0;
  std::vector<Weight> dist;
  std::vector<EdgeId> pred;    // kNoEdge for none
  std::vector<Weight> sigma;   // vertex-major, sigma_width per vertex
  std::vector<char> scanned;
  SearchStats stats;

  static constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

  Weight sigma_at(Vertex v, std::size_t level_idx) const {
    return sigma[v * sigma_width + level_idx];
  }
};

struct Walk {
  std::vector<Vertex> vertices;  // k+1 vertices
  std::vector<EdgeId> edges;     // k edges
  Weight weight = 0;
};

struct SearchOptions {
  /// Per-vertex upper bound on the S-reach; edges of bounded scope into v
  /// are relaxed only when sreach[v] >= d[u] + w. Null disables pruning.
  const std::vector<Weight>* sreach = nullptr;
  /// Restricts the search to the flagged edges.
  const std::vector<char>* edge_mask = nullptr;
  /// Scan saturated vertices but do not relax their out-edges (the
  /// truncation used by the unsaturated local search).
  bool stop_at_saturated = false;
};

/// One direction of the scope-aware search. With no S-reach table the
/// result is the exact optimal s-admissible distance for every vertex;
/// with one, exactness is guaranteed along optimal admissible walks toward
/// saturated vertices.
SearchLabels s_dijkstra(const RoadNetwork& net, const ScopeConfig& config,
                        const HandicapTable& handicaps, Vertex source,
                        const SearchOptions& options = {});

/// sigma check for edge e out of u: constant true for unbounded scope.
bool is_admissible_from(const SearchLabels& labels, const ScopeConfig& config, Vertex u,
                        const Edge& edge);

/// True iff u is saturated in `labels`: sigma_l(u) > nu_l for every bounded
/// level l.
bool is_saturated(const SearchLabels& labels, const ScopeConfig& config, Vertex u);

/// Follows pi back from target; nullopt when unreached.
std::optional<Walk> construct_walk(const SearchLabels& labels, const RoadNetwork& net,
                                   Vertex target);

/// Forward network plus its reverse and the handicap tables of both, built
/// once and shared by every bidirectional search.
struct ScopeNetwork {
  const RoadNetwork* net = nullptr;
  const ScopeConfig* config = nullptr;
  HandicapTable handicaps;
  RoadNetwork reversed;
  HandicapTable rev_handicaps;

  static ScopeNetwork build(const RoadNetwork& net, const ScopeConfig& config);
};

struct BidirOptions {
  const std::vector<Weight>* sreach_fwd = nullptr;
  const std::vector<Weight>* sreach_rev = nullptr;
  /// Anti-reach pruning for the truncated (unsaturated) search: an edge into
  /// v is not stored when anti_reach[v] is below both the new distance and
  /// the opposite queue's smallest key; the meeting candidate is still
  /// recorded, so reported weights stay exact.
  const std::vector<Weight>* anti_reach = nullptr;
  /// Drain both queues instead of stopping at the standard termination
  /// condition; answers must be identical either way.
  bool run_to_completion = false;
  bool stop_at_saturated = false;
};

struct BidirResult {
  Weight weight = 0;
  Walk walk;           // in the forward network
  SearchStats stats;   // both directions combined
};

/// Bidirectional scope-aware search; the forward half runs on the network,
/// the reverse half on its reverse, and the answer is the best
/// concatenation at a meeting vertex. Exact for st-admissible optima
/// without pruning; optimal among saturated st-admissible walks with
/// S-reach tables supplied.
std::optional<BidirResult> bidirectional_s_dijkstra(const ScopeNetwork& sn, Vertex s, Vertex t,
                                                    const BidirOptions& options = {});

}  // namespace scope_route
