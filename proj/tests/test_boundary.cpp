#include <random>
#include <sstream>

#include "doctest.h"
#include "scope_route/boundary.hpp"
#include "scope_route/synth.hpp"

using namespace scope_route;

namespace {

SyntheticNetwork small_city() {
  SynthParams params;
  params.cities_x = 2;
  params.cities_y = 2;
  return generate_synthetic(params, 31);
}

}  // namespace

TEST_CASE("in-cell distances live in the unbounded subgraph") {
  const auto synth = small_city();
  const Partition partition = partition_network(synth.net);
  for (CellId c = 0; c < std::min<CellId>(partition.cell_count, 4); ++c) {
    const InCellDistanceGraph g = incell_distances(synth.net, partition, c, synth.config);
    CHECK(g.cell == c);
    CHECK(g.vertices == partition.cell_boundary[c]);
    for (const auto& e : g.edges) {
      CHECK(e.p > 0);
      CHECK(e.p != kInfWeight);
    }
  }
}

TEST_CASE("boundary graph preserves unbounded-subgraph distances") {
  const auto synth = small_city();
  const Partition partition = partition_network(synth.net);
  BoundaryGraph bg = build_boundary_graph(synth.net, partition, synth.config, 2);
  REQUIRE(!bg.vertices.empty());
  CHECK(bg.vertices == partition.global_boundary);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, bg.vertices.size() - 1);
  std::vector<std::pair<Vertex, Vertex>> pairs;
  for (int i = 0; i < 200; ++i) {
    const Vertex s = bg.vertices[pick(rng)], t = bg.vertices[pick(rng)];
    if (s != t) pairs.emplace_back(s, t);
  }
  const auto report = check_boundary_distance_property(synth.net, bg, pairs);
  CHECK(report.checked == pairs.size());
  CHECK(report.ok());

  Vertex interior = 0;
  while (bg.index_of(interior)) ++interior;
  CHECK_THROWS_AS(
      check_boundary_distance_property(synth.net, bg, {{interior, bg.vertices[0]}}),
      std::invalid_argument);
}

TEST_CASE("parallel boundary edges collapse to the cheapest provider") {
  const auto synth = small_city();
  const Partition partition = partition_network(synth.net);
  const BoundaryGraph bg = build_boundary_graph(synth.net, partition, synth.config, 1);
  for (std::size_t i = 1; i < bg.edges.size(); ++i) {
    const auto& a = bg.edges[i - 1];
    const auto& b = bg.edges[i];
    CHECK((a.u < b.u || (a.u == b.u && a.v < b.v)));  // sorted, no duplicates
  }
}

TEST_CASE("network digest is order-sensitive to content, not formatting") {
  const auto synth = small_city();
  const std::uint64_t d = network_digest(synth.net);
  CHECK(d == network_digest(synth.net));
  RoadNetwork tweaked = synth.net;
  {
    auto edges = tweaked.edges();
    edges[0].weight += 1;
    tweaked = RoadNetwork(tweaked.vertex_count(), std::move(edges));
    tweaked.set_coordinates(synth.net.coordinates());
  }
  CHECK(network_digest(tweaked) != d);
}

TEST_CASE("preprocessed bundles round trip losslessly") {
  const auto synth = small_city();
  PreprocessOptions options;
  options.threads = 2;
  const PreprocessedBundle bundle = preprocess_network(synth.net, synth.config, options);

  std::stringstream ss;
  save_bundle(bundle, ss);
  const PreprocessedBundle back = load_bundle(ss, synth.net);

  CHECK(back.digest == bundle.digest);
  CHECK(back.config.bounded() == bundle.config.bounded());
  CHECK(back.partition == bundle.partition);
  CHECK(back.boundary == bundle.boundary);
  CHECK(back.sreach_fwd == bundle.sreach_fwd);
  CHECK(back.sreach_rev == bundle.sreach_rev);
  CHECK(back.anti_sreach == bundle.anti_sreach);
}

TEST_CASE("bundle loading rejects mismatched networks and corrupt input") {
  const auto synth = small_city();
  PreprocessOptions options;
  options.threads = 2;
  const PreprocessedBundle bundle = preprocess_network(synth.net, synth.config, options);
  std::stringstream ss;
  save_bundle(bundle, ss);
  const std::string text = ss.str();

  {
    // Digest mismatch: a different network.
    auto edges = synth.net.edges();
    edges[0].weight += 1;
    RoadNetwork other(synth.net.vertex_count(), std::move(edges));
    other.set_coordinates(synth.net.coordinates());
    std::istringstream in(text);
    CHECK_THROWS_AS(load_bundle(in, other), FormatError);
  }
  {
    // Unsupported version.
    std::string bad = text;
    bad.replace(bad.find("scope-route-bundle 1"), 20, "scope-route-bundle 9");
    std::istringstream in(bad);
    CHECK_THROWS_AS(load_bundle(in, synth.net), FormatError);
  }
  {
    // Truncation.
    std::istringstream in(text.substr(0, text.size() / 2));
    CHECK_THROWS_AS(load_bundle(in, synth.net), FormatError);
  }
}
