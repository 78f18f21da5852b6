#pragma once

#include <optional>
#include <vector>

#include "scope_route/boundary.hpp"
#include "scope_route/scope_search.hpp"

namespace scope_route {

struct QueryStats {
  std::size_t cells_hit = 0;
  std::size_t unsaturated_scanned = 0;
  std::size_t opening_scanned = 0;   // final restricted searches, both directions
  std::size_t boundary_scanned = 0;
  std::size_t closing_scanned = 0;
  std::size_t cellular_max_queue = 0;
  std::size_t boundary_max_queue = 0;
  double unsaturated_ms = 0, opening_ms = 0, boundary_ms = 0, closing_ms = 0;
  bool used_fallback = false;          // region growth degenerated to the whole network
  bool answered_by_unsaturated = false;
  bool early_exit = false;             // boundary stage provably unnecessary

  std::size_t total_scanned() const {
    return unsaturated_scanned + opening_scanned + boundary_scanned + closing_scanned;
  }
};

struct QueryResult {
  Weight weight = kInfWeight;
  Walk walk;
  QueryStats stats;
};

struct QueryOptions {
  /// Disables scope-reach and anti-reach pruning (answers must not change).
  bool prune = true;
  /// Allows skipping the boundary stage when the opening regions already
  /// meet and no boundary route can be shorter (answers must not change).
  bool early_exit = true;
};

/// Truncated bidirectional scope search for optimal walks that never
/// saturate: each direction stops expanding at saturated vertices, the
/// anti-reach table prunes, and the answer is exact whenever the optimal
/// st-admissible walk is unsaturated.
std::optional<std::pair<Weight, Walk>> unsaturated_local_search(const ScopeNetwork& sn,
                                                                const ReachTable* anti_sreach,
                                                                Vertex s, Vertex t,
                                                                SearchStats* stats = nullptr);

/// Multi-stage query over a preprocessed bundle. Holds only references;
/// network and bundle must outlive the engine. Read-only after
/// construction, safe for concurrent queries.
class QueryEngine {
 public:
  QueryEngine(const RoadNetwork& net, const PreprocessedBundle& bundle);

  const ScopeNetwork& scope_network() const { return sn_; }

  struct OpeningResult {
    SearchLabels labels;               // over the full vertex set, restricted to the region
    std::vector<CellId> cells;         // absorbed cells, ascending
    std::vector<Vertex> frontier;      // boundary-graph vertices with finite distance
    bool degenerate = false;           // region grew to every cell
    std::size_t scanned = 0;           // final iteration
    std::size_t max_queue = 0;
  };

  /// Grows the cell union around x until every reached region-boundary
  /// vertex is saturated; forward=false searches the reverse network from x.
  OpeningResult opening_stage(Vertex x, bool forward, const QueryOptions& options = {}) const;

  struct BoundaryPath {
    Weight weight = 0;
    std::vector<Vertex> vertices;      // boundary vertices, original ids (s, t excluded)
    std::vector<std::size_t> edges;    // indices into bundle.boundary.edges
    SearchStats stats;
  };

  /// Reach-pruned goal-directed search on the boundary graph extended with
  /// virtual terminals; weights of the virtual edges come from the opening
  /// stages.
  std::optional<BoundaryPath> boundary_stage(Vertex s, Vertex t, const OpeningResult& from_s,
                                             const OpeningResult& to_t) const;

  /// Expands a boundary path into a full walk: opening-stage prefix, each
  /// boundary edge unrolled inside its providing cell's unbounded-level
  /// subgraph, reverse-opening suffix.
  Walk closing_stage(const BoundaryPath& path, const OpeningResult& from_s,
                     const OpeningResult& to_t, SearchStats* stats = nullptr) const;

  QueryResult query(Vertex s, Vertex t, const QueryOptions& options = {}) const;

 private:
  const RoadNetwork& net_;
  const PreprocessedBundle& bundle_;
  ScopeNetwork sn_;
  std::vector<std::vector<CellId>> cells_of_vertex_;
  std::vector<std::vector<EdgeId>> cell_edges_;
};

}  // namespace scope_route
