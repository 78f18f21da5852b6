#include <numeric>

#include "doctest.h"
#include "scope_route/partition.hpp"
#include "scope_route/synth.hpp"

using namespace scope_route;

namespace {

RoadNetwork barbell(Vertex clique, Weight w = 1) {
  // Two bidirected cliques joined through a single middle vertex.
  std::vector<Edge> edges;
  auto bidir = [&](Vertex u, Vertex v) {
    edges.push_back({u, v, w, kLevelInf});
    edges.push_back({v, u, w, kLevelInf});
  };
  const Vertex mid = 2 * clique;
  for (Vertex a = 0; a < clique; ++a) {
    for (Vertex b = a + 1; b < clique; ++b) {
      bidir(a, b);
      bidir(clique + a, clique + b);
    }
    bidir(a, mid);
    bidir(clique + a, mid);
  }
  return RoadNetwork(2 * clique + 1, std::move(edges));
}

}  // namespace

TEST_CASE("simplify accounts for every edge exactly once") {
  const RoadNetwork net = barbell(4);
  std::vector<EdgeId> piece(net.edge_count());
  std::iota(piece.begin(), piece.end(), 0);
  const SimplifiedGraph g = simplify(net, piece);
  std::vector<int> seen(net.edge_count(), 0);
  for (const auto& e : g.edges)
    for (EdgeId m : e.members) ++seen[m];
  for (const auto& [e, anchor] : g.attached) ++seen[e];
  for (EdgeId e : g.disconnected) ++seen[e];
  for (EdgeId e = 0; e < net.edge_count(); ++e) CHECK(seen[e] == 1);
}

TEST_CASE("simplify absorbs pendant trees and drops stray components") {
  // A triangle with a two-edge pendant path and a detached pair.
  std::vector<Edge> edges;
  auto bidir = [&](Vertex u, Vertex v) {
    edges.push_back({u, v, 1, kLevelInf});
    edges.push_back({v, u, 1, kLevelInf});
  };
  bidir(0, 1);
  bidir(1, 2);
  bidir(2, 0);
  bidir(2, 3);  // pendant
  bidir(3, 4);  // pendant
  bidir(5, 6);  // stray component
  const RoadNetwork net(7, std::move(edges));
  std::vector<EdgeId> piece(net.edge_count());
  std::iota(piece.begin(), piece.end(), 0);
  const SimplifiedGraph g = simplify(net, piece);
  CHECK(g.vertices == std::vector<Vertex>{0, 1, 2});
  CHECK(g.attached.size() == 4);
  CHECK(g.disconnected.size() == 2);
}

TEST_CASE("minimum vertex cut finds the barbell articulation") {
  const RoadNetwork net = barbell(4);
  std::vector<EdgeId> piece(net.edge_count());
  std::iota(piece.begin(), piece.end(), 0);
  const SimplifiedGraph g = simplify(net, piece);
  FlowNetwork fn = split_vertices(g);
  assign_capacities(fn, 0, 4 + 1, 0, 0, std::vector<char>(g.vertices.size(), 0));
  const auto cut = min_vertex_cut(fn);
  REQUIRE(cut);
  CHECK(cut->flow_value == 1);
  REQUIRE(cut->cut.size() == 1);
  CHECK(cut->cut.front() == 8);  // the middle vertex
}

TEST_CASE("adjacent terminals admit no vertex cut") {
  // Triangle; separating two adjacent vertices is impossible.
  std::vector<Edge> edges;
  auto bidir = [&](Vertex u, Vertex v) {
    edges.push_back({u, v, 1, kLevelInf});
    edges.push_back({v, u, 1, kLevelInf});
  };
  bidir(0, 1);
  bidir(1, 2);
  bidir(2, 0);
  const RoadNetwork net(3, std::move(edges));
  std::vector<EdgeId> piece(net.edge_count());
  std::iota(piece.begin(), piece.end(), 0);
  const SimplifiedGraph g = simplify(net, piece);
  REQUIRE(g.vertices.size() == 3);
  FlowNetwork fn = split_vertices(g);
  assign_capacities(fn, 0, 1, 0, 0, std::vector<char>(g.vertices.size(), 0));
  CHECK(!min_vertex_cut(fn).has_value());
}

TEST_CASE("partitioning a synthetic network") {
  SynthParams params;
  params.cities_x = 3;
  params.cities_y = 3;
  const auto synth = generate_synthetic(params, 17);
  PartitionConfig config;
  const Partition partition = partition_network(synth.net, config);

  const auto report = validate_partition(synth.net, partition);
  for (const auto& v : report.violations) CAPTURE(v);
  CHECK(report.ok());

  // Cell sizes respect the maximum unless flagged oversize.
  std::vector<std::size_t> size(partition.cell_count, 0);
  for (CellId c : partition.edge_cell) ++size[c];
  for (CellId c = 0; c < partition.cell_count; ++c) {
    if (!partition.oversize[c] && c != partition.disconnected_cell)
      CHECK(size[c] <= config.max_size);
  }
  CHECK(partition.cell_count >= 4);
}

TEST_CASE("boundary recomputation is idempotent and detected when stale") {
  const auto synth = generate_synthetic({.cities_x = 2, .cities_y = 2}, 23);
  Partition partition = partition_network(synth.net);
  REQUIRE(validate_partition(synth.net, partition).ok());
  Partition copy = partition;
  recompute_boundaries(synth.net, copy);
  CHECK(copy == partition);

  REQUIRE(!partition.global_boundary.empty());
  partition.global_boundary.pop_back();
  CHECK(!validate_partition(synth.net, partition).ok());
}
