#pragma once

#include <optional>
#include <vector>

#include "scope_route/network.hpp"
#include "scope_route/scope_search.hpp"

namespace scope_route {

/// Plain weighted digraph without scope levels; used for the boundary
/// graph, classical baselines, and the reach-pruned goal-directed search.
struct DiGraph {
  struct Arc {
    Vertex tail = 0;
    Vertex head = 0;
    Weight weight = 0;
  };

  DiGraph() = default;
  DiGraph(Vertex vertex_count, std::vector<Arc> arcs);

  Vertex vertex_count() const { return vertex_count_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  const Arc& arc(EdgeId a) const { return arcs_[a]; }
  EdgeId arc_count() const { return static_cast<EdgeId>(arcs_.size()); }

  const EdgeId* out_begin(Vertex v) const { return out_arcs_.data() + out_offsets_[v]; }
  const EdgeId* out_end(Vertex v) const { return out_arcs_.data() + out_offsets_[v + 1]; }

  DiGraph reversed() const;

  /// The network with levels dropped; arc ids equal edge ids.
  static DiGraph from_network(const RoadNetwork& net);

 private:
  Vertex vertex_count_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_;
  std::vector<EdgeId> out_arcs_;
};

struct DijkstraLabels {
  std::vector<Weight> dist;
  std::vector<EdgeId> pred;  // arc ids, kNoArc for none
  SearchStats stats;

  static constexpr EdgeId kNoArc = static_cast<EdgeId>(-1);
};

/// Full single-source Dijkstra; with a target the search stops once the
/// target is scanned (its label is then exact).
DijkstraLabels dijkstra(const DiGraph& g, Vertex source,
                        std::optional<Vertex> target = std::nullopt);

struct PathResult {
  Weight weight = 0;
  std::vector<Vertex> vertices;
  std::vector<EdgeId> arcs;
  SearchStats stats;
};

/// Alternating bidirectional Dijkstra; `grev` must be g.reversed().
std::optional<PathResult> bidirectional_dijkstra(const DiGraph& g, const DiGraph& grev,
                                                 Vertex s, Vertex t);

struct ReachAStarOptions {
  /// Per-vertex reach upper bounds; an arc (u,v) is pruned when both
  /// reach[v] < d(u) - offset(u) + w and reach[v] < dist_lb(v) hold.
  /// Null disables reach pruning.
  const std::vector<Weight>* reach = nullptr;
  /// Lower bounds on the remaining distance: dist_to_target[v] <= d(v,t)
  /// and dist_to_source[v] <= d(s,v). Null disables goal direction (and the
  /// second reach test).
  const std::vector<Weight>* dist_to_target = nullptr;
  const std::vector<Weight>* dist_to_source = nullptr;
  /// Treat every first arc out of the source (and, in the reverse half, out
  /// of the target) as virtual: its weight is excluded from the distance the
  /// reach test sees. Used when s and t are connection points joined to the
  /// graph by virtual arcs.
  bool subtract_first_arc = false;
};

/// Bidirectional Dijkstra with reach pruning and optional landmark-free
/// goal direction via the average-potential transform. Lower bounds must be
/// feasible (reduced weights nonnegative); violations beyond a small float
/// tolerance raise an error.
std::optional<PathResult> reach_astar_bidirectional(const DiGraph& g, const DiGraph& grev,
                                                    Vertex s, Vertex t,
                                                    const ReachAStarOptions& options = {});

/// Exact classical reach of every vertex: max over sources s and shortest
/// s-walks through v of min(prefix, suffix), computed from the shortest-path
/// DAG of each source.
std::vector<Weight> compute_classical_reach(const DiGraph& g);

}  // namespace scope_route
