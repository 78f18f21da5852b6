#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scope_route/network.hpp"

namespace scope_route {

using CellId = std::uint32_t;
inline constexpr CellId kCellNone = static_cast<CellId>(-1);

/// Edge-disjoint decomposition of the network into cells. The boundary of a
/// cell is the set of vertices incident both with a cell edge and with an
/// edge outside the cell; the global boundary is the union over cells.
struct Partition {
  std::vector<CellId> edge_cell;                 // per edge
  CellId cell_count = 0;
  CellId disconnected_cell = kCellNone;          // kCellNone when unused
  std::vector<char> oversize;                    // per cell: above max size, irreducible
  std::vector<std::vector<Vertex>> cell_boundary;  // per cell, ascending
  std::vector<Vertex> global_boundary;             // ascending

  bool is_boundary(Vertex v) const;
  bool operator==(const Partition&) const = default;
};

struct PartitionConfig {
  std::size_t target_size = 100;  // informational; cells aim at this edge count
  std::size_t min_size = 50;
  std::size_t max_size = 200;
  /// Hop radius around source and sink protected from cutting, as a fraction
  /// of the piece's estimated hop eccentricity.
  double restricted_radius_fraction = 0.10;
  /// Extra capacity on split arcs of vertices touching an unbounded-level
  /// edge, steering cuts away from highways.
  double handicap_bonus = 3;
};

/// Reduced undirected simple graph used for the cut computation, plus the
/// bookkeeping needed to map every original edge of the piece back.
struct SimplifiedGraph {
  struct ReducedEdge {
    Vertex u, v;                  // original vertex ids, u < v
    std::vector<EdgeId> members;  // original edges this edge stands for
  };

  std::vector<Vertex> vertices;  // reduced vertex set (original ids), ascending
  std::vector<ReducedEdge> edges;
  /// Original edges absorbed into a reduced vertex: self-loops and pendant
  /// trees, keyed by their anchor.
  std::vector<std::pair<EdgeId, Vertex>> attached;
  /// Edges of weak components other than the largest.
  std::vector<EdgeId> disconnected;
};

/// Step 1 of a bisection: drop smaller weak components, remove self-loops,
/// absorb pendant trees into their anchors, merge parallel edges, contract
/// degree-2 chains. Every edge of `piece` lands in exactly one of edges[].
/// members, attached, or disconnected.
SimplifiedGraph simplify(const RoadNetwork& net, const std::vector<EdgeId>& piece);

/// Vertex-split flow network: each reduced vertex v becomes nodes v_in,
/// v_out joined by a split arc; each reduced edge becomes two unbounded arcs
/// (one per direction) between out- and in-nodes.
struct FlowNetwork {
  struct FlowArc {
    std::uint32_t from, to;  // node ids: 2*i = in, 2*i+1 = out of vertex i
    Weight capacity;
    bool split;
  };

  std::vector<Vertex> node_vertex;  // reduced vertex index -> original id
  std::vector<FlowArc> arcs;
  std::uint32_t source = 0, sink = 0;  // node ids

  std::uint32_t node_count() const { return static_cast<std::uint32_t>(2 * node_vertex.size()); }
};

FlowNetwork split_vertices(const SimplifiedGraph& g);

/// Sets capacities: split arcs 1 (+ handicap_bonus where touches_unbounded),
/// original arcs unbounded, everything within `restricted_radius` hops of
/// source or sink unbounded (source and sink split arcs always unbounded).
/// touches_unbounded is indexed like SimplifiedGraph::vertices.
void assign_capacities(FlowNetwork& fn, Vertex source, Vertex sink,
                       unsigned restricted_radius, double handicap_bonus,
                       const std::vector<char>& touches_unbounded);

struct VertexCut {
  Weight flow_value = 0;
  std::vector<Vertex> cut;     // original vertex ids
  std::vector<Vertex> side_a;  // residual-reachable side (contains the source)
  std::vector<Vertex> side_b;
};

/// Shortest-augmenting-path max flow; the min cut is read off the residual
/// reachability split and consists of split arcs only. nullopt when the flow
/// is unbounded (no finite cut).
std::optional<VertexCut> min_vertex_cut(const FlowNetwork& fn);

/// Recursive bisection until every cell has at most max_size edges;
/// irreducible pieces become flagged oversize cells.
Partition partition_network(const RoadNetwork& net, const PartitionConfig& config = {});

struct PartitionReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks the exact edge cover, recomputes boundaries, and verifies the
/// separator property (edges incident to a cell-interior vertex belong to
/// that cell).
PartitionReport validate_partition(const RoadNetwork& net, const Partition& partition);

/// Recomputes per-cell boundaries and the global boundary from edge_cell.
void recompute_boundaries(const RoadNetwork& net, Partition& partition);

}  // namespace scope_route
