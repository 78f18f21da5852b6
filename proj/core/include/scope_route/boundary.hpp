#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "scope_route/classical.hpp"
#include "scope_route/partition.hpp"
#include "scope_route/reach.hpp"

namespace scope_route {

/// Distances between the boundary vertices of one cell, measured inside the
/// cell's unbounded-level subgraph; edges exist exactly for finite pairs.
struct InCellDistanceGraph {
  CellId cell = 0;
  std::vector<Vertex> vertices;  // the cell's boundary, ascending
  struct DistEdge {
    Vertex u, v;
    Weight p;
    bool operator==(const DistEdge&) const = default;
  };
  std::vector<DistEdge> edges;
};

/// Union of all in-cell distance graphs over the global boundary; parallel
/// edges collapsed to the smallest weight (provenance: the providing cell).
struct BoundaryGraph {
  std::vector<Vertex> vertices;  // global boundary, ascending
  struct BEdge {
    Vertex u, v;  // original network ids
    Weight p;
    CellId cell;
    bool operator==(const BEdge&) const = default;
  };
  std::vector<BEdge> edges;
  ReachTable reach;  // classical reach per vertices[] index; empty until computed

  /// Position of an original vertex in vertices[], nullopt when not boundary.
  std::optional<std::size_t> index_of(Vertex v) const;
  /// The boundary graph as a compact digraph over vertices[] indices; arc i
  /// corresponds to edges[i].
  DiGraph as_digraph() const;

  bool operator==(const BoundaryGraph&) const = default;
};

InCellDistanceGraph incell_distances(const RoadNetwork& net, const Partition& partition,
                                     CellId cell, const ScopeConfig& config);

BoundaryGraph build_boundary_graph(const RoadNetwork& net, const Partition& partition,
                                   const ScopeConfig& config, unsigned threads = 0);

struct BoundaryDistanceReport {
  std::size_t checked = 0;
  struct Mismatch {
    Vertex s, t;
    Weight in_network, in_boundary;
  };
  std::vector<Mismatch> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Compares, for sampled boundary pairs, the distance in the network's
/// unbounded-level subgraph against the distance in the boundary graph;
/// both must agree exactly.
BoundaryDistanceReport check_boundary_distance_property(
    const RoadNetwork& net, const BoundaryGraph& bg,
    const std::vector<std::pair<Vertex, Vertex>>& pairs);

/// Order-independent fingerprint of the network (counts, edges, weights,
/// levels, coordinates).
std::uint64_t network_digest(const RoadNetwork& net);

struct PreprocessedBundle {
  std::uint32_t version = 1;
  std::uint64_t digest = 0;
  Vertex vertex_count = 0;
  EdgeId edge_count = 0;
  ScopeConfig config;
  Partition partition;
  BoundaryGraph boundary;
  ReachTable sreach_fwd;   // per network vertex
  ReachTable sreach_rev;
  ReachTable anti_sreach;
};

void save_bundle(const PreprocessedBundle& bundle, std::ostream& out);
/// Throws FormatError on version or digest mismatch or malformed input.
PreprocessedBundle load_bundle(std::istream& in, const RoadNetwork& net);

struct PreprocessOptions {
  PartitionConfig partition;
  AntiSreachOptions anti_sreach;
  unsigned threads = 0;
};

/// Full preprocessing pipeline: partition, boundary graph with classical
/// reach, scope-reach tables for both directions, anti-reach table.
PreprocessedBundle preprocess_network(const RoadNetwork& net, const ScopeConfig& config,
                                      const PreprocessOptions& options = {});

}  // namespace scope_route
