// End-to-end acceptance checks. Each check prints one PASS/FAIL line; the
// process exits nonzero if any check fails. Runtime-sensitive checks print
// their elapsed time and the measured ratio next to the asserted bound.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <vector>

#include "helpers.hpp"
#include "scope_route/boundary.hpp"
#include "scope_route/classical.hpp"
#include "scope_route/oracle.hpp"
#include "scope_route/query.hpp"
#include "scope_route/synth.hpp"
#include "scope_route/validate.hpp"

using namespace scope_route;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s %2d  %s%s%s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
              detail.empty() ? "" : "  -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

std::string fmt(const char* pattern, double a, double b = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. On tiny random networks the bidirectional scope search matches the
//    exhaustive enumeration for every pair.
void check_bidirectional_exactness() {
  Timer timer;
  std::mt19937_64 rng(101);
  bool ok = true;
  for (int it = 0; it < 200 && ok; ++it) {
    const auto inst = scope_route::testing::random_tiny(rng);
    const ScopeNetwork sn = ScopeNetwork::build(inst.net, inst.config);
    for (Vertex s = 0; s < inst.net.vertex_count() && ok; ++s)
      for (Vertex t = 0; t < inst.net.vertex_count() && ok; ++t) {
        if (s == t) continue;
        const auto expect =
            oracle_admissible_optimum(inst.net, inst.config, s, t, inst.net.vertex_count());
        const auto got = bidirectional_s_dijkstra(sn, s, t);
        if (got.has_value() != expect.has_value() ||
            (got && got->weight != expect->first))
          ok = false;
      }
  }
  const double sec = timer.seconds();
  report(1, ok && sec < 60,
         "bidirectional search equals exhaustive optimum on 200 random networks",
         fmt("%.1fs (< 60s)", sec));
}

// ---------------------------------------------------------------------------
// Shared fixtures for the larger checks.
struct BigFixture {
  SyntheticNetwork synth;
  PreprocessedBundle bundle;
  ScopeNetwork sn;
};

BigFixture make_fixture(std::uint32_t cities, std::uint64_t seed) {
  BigFixture fx;
  SynthParams params;
  params.cities_x = cities;
  params.cities_y = cities;
  fx.synth = generate_synthetic(params, seed);
  fx.bundle = preprocess_network(fx.synth.net, fx.synth.config, {});
  fx.sn = ScopeNetwork::build(fx.synth.net, fx.synth.config);
  return fx;
}

// 2. Pruned and unpruned query weights agree on pairs whose searches
//    saturate, on a ~20k-edge network.
void check_pruning_soundness(const BigFixture& fx) {
  Timer timer;
  const QueryEngine engine(fx.synth.net, fx.bundle);
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  bool ok = true;
  int pairs = 0;
  QueryOptions no_prune;
  no_prune.prune = false;
  while (pairs < 500 && ok) {
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    // Keep only far pairs: both endpoints must saturate their searches.
    const auto fwd = s_dijkstra(*fx.sn.net, *fx.sn.config, fx.sn.handicaps, s);
    if (saturated_vertices(fwd, *fx.sn.net, *fx.sn.config).empty()) continue;
    const auto rev = s_dijkstra(fx.sn.reversed, *fx.sn.config, fx.sn.rev_handicaps, t);
    if (saturated_vertices(rev, *fx.sn.net, *fx.sn.config).empty()) continue;
    ++pairs;
    const QueryResult pruned = engine.query(s, t);
    const QueryResult plain = engine.query(s, t, no_prune);
    if (pruned.weight != plain.weight) ok = false;
  }
  const double sec = timer.seconds();
  report(2, ok && sec < 120,
         "pruned and unpruned query weights agree on 500 saturating pairs",
         fmt("%.1fs (< 120s)", sec));
}

// 3. Boundary-graph distances equal unbounded-subgraph distances on 10
//    fuzzed partitioned networks, 1000 pairs total.
void check_boundary_distances() {
  Timer timer;
  std::mt19937_64 rng(303);
  bool ok = true;
  std::size_t checked = 0;
  for (int i = 0; i < 10 && ok; ++i) {
    SynthParams params;
    params.cities_x = 2 + i % 3;
    params.cities_y = 2 + (i / 3) % 3;
    params.block_size = 4 + i % 3;
    params.locals_per_city = 2 + i % 4;
    const auto synth = generate_synthetic(params, 4000 + i);
    const Partition partition = partition_network(synth.net);
    if (!validate_partition(synth.net, partition).ok()) {
      ok = false;
      break;
    }
    const BoundaryGraph bg = build_boundary_graph(synth.net, partition, synth.config);
    std::uniform_int_distribution<std::size_t> pick(0, bg.vertices.size() - 1);
    std::vector<std::pair<Vertex, Vertex>> pairs;
    while (pairs.size() < 100) {
      const Vertex s = bg.vertices[pick(rng)], t = bg.vertices[pick(rng)];
      if (s != t) pairs.emplace_back(s, t);
    }
    const auto rep = check_boundary_distance_property(synth.net, bg, pairs);
    checked += rep.checked;
    if (!rep.ok()) ok = false;
  }
  const double sec = timer.seconds();
  report(3, ok && checked == 1000 && sec < 60,
         "boundary-graph distances equal subgraph distances on 1000 pairs",
         fmt("%.1fs (< 60s)", sec));
}

// 4. End-to-end query weights equal the reference on 500 uniform pairs of a
//    20x20-city network.
void check_end_to_end(const BigFixture& fx) {
  Timer timer;
  const QueryEngine engine(fx.synth.net, fx.bundle);
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  bool ok = true;
  BidirOptions reference_options;  // unpruned, exact
  for (int i = 0; i < 500 && ok; ++i) {
    Vertex s = pick(rng), t = pick(rng);
    while (s == t) t = pick(rng);
    const auto full = bidirectional_s_dijkstra(fx.sn, s, t, reference_options);
    const auto local = unsaturated_local_search(fx.sn, nullptr, s, t);
    Weight reference = full ? full->weight : kInfWeight;
    if (local) reference = std::min(reference, local->first);
    const QueryResult r = engine.query(s, t);
    if (r.weight != reference) ok = false;
  }
  const double sec = timer.seconds();
  report(4, ok && sec < 300, "query equals the exact reference on 500 uniform pairs",
         fmt("%.1fs (< 300s)", sec));
}

// 5. Every partition built in this run validates with zero violations.
void check_partitions(const std::vector<const BigFixture*>& fixtures) {
  bool ok = true;
  for (const auto* fx : fixtures)
    if (!validate_partition(fx->synth.net, fx->bundle.partition).ok()) ok = false;
  report(5, ok, "all partitions pass validation with zero violations", "");
}

// 6. The boundary graph stays small relative to the network.
void check_compression(const BigFixture& fx) {
  std::size_t inf_edges = 0;
  for (const auto& e : fx.synth.net.edges())
    if (e.level == kLevelInf) ++inf_edges;
  const double inf_frac = double(inf_edges) / fx.synth.net.edge_count();
  const double ratio = double(fx.bundle.boundary.edges.size()) / fx.synth.net.edge_count();
  report(6, inf_frac <= 0.10 && ratio <= 0.10,
         "boundary graph has at most 10% of the network's edges",
         fmt("|E(B)|/|E(G)| = %.2f%%, unbounded edges %.2f%%", 100 * ratio, 100 * inf_frac));
}

// 7. For pairs spanning at least 5 cells the query scans far fewer vertices
//    than plain bidirectional Dijkstra.
void check_search_space(const BigFixture& fx) {
  Timer timer;
  const QueryEngine engine(fx.synth.net, fx.bundle);
  const DiGraph g = DiGraph::from_network(fx.synth.net);
  const DiGraph grev = g.reversed();
  std::mt19937_64 rng(707);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  double query_scanned = 0, dijkstra_scanned = 0;
  int pairs = 0, attempts = 0;
  while (pairs < 100 && attempts < 5000) {
    ++attempts;
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const QueryResult r = engine.query(s, t);
    if (r.stats.cells_hit < 5 || r.stats.used_fallback) continue;
    const auto base = bidirectional_dijkstra(g, grev, s, t);
    if (!base) continue;
    ++pairs;
    query_scanned += double(r.stats.total_scanned());
    dijkstra_scanned += double(base->stats.scanned_vertices);
  }
  const double ratio = query_scanned / dijkstra_scanned;
  report(7, pairs == 100 && ratio <= 0.20,
         "query scans at most 20% of bidirectional Dijkstra on wide pairs",
         fmt("mean scan ratio %.2f%%, %.0f pairs", 100 * ratio, pairs) +
             fmt(", %.1fs", timer.seconds()));
}

// 8. The admissibility penalty never drops below the unrestricted optimum.
void check_penalty(const BigFixture& fx) {
  const DiGraph g = DiGraph::from_network(fx.synth.net);
  std::mt19937_64 rng(808);
  std::uniform_int_distribution<Vertex> pick(0, fx.synth.net.vertex_count() - 1);
  // Bucket pairs by the magnitude of the unrestricted distance.
  std::map<int, std::pair<double, int>> buckets;
  int pairs = 0;
  while (pairs < 150) {
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const DijkstraLabels labels = dijkstra(g, s, t);
    if (labels.dist[t] == kInfWeight) continue;
    const auto admissible = bidirectional_s_dijkstra(fx.sn, s, t);
    if (!admissible) continue;
    ++pairs;
    const int bucket = static_cast<int>(std::log2(std::max(1.0, labels.dist[t])));
    auto& [sum, count] = buckets[bucket];
    sum += admissible->weight / labels.dist[t];
    ++count;
  }
  bool ok = true;
  double worst = 1e9, overall = 0;
  int n = 0;
  for (const auto& [bucket, acc] : buckets) {
    const double mean = acc.first / acc.second;
    worst = std::min(worst, mean);
    overall += acc.first;
    n += acc.second;
    if (mean < 1.0) ok = false;
  }
  report(8, ok, "per-bucket mean admissibility penalty is at least 1.0",
         fmt("overall mean %.3f, smallest bucket mean %.3f", overall / n, worst));
}

// 9. Every edge pair admits a finite admissible connection that starts with
//    the first edge and ends with the second.
void check_edge_pair_existence(const BigFixture& fx) {
  Timer timer;
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<EdgeId> pick(0, fx.synth.net.edge_count() - 1);
  bool ok = true;
  for (int i = 0; i < 100 && ok; ++i) {
    const Edge e = fx.synth.net.edge(pick(rng));
    const Edge f = fx.synth.net.edge(pick(rng));
    // Force the first and last edge with fresh terminals carrying copies of
    // e and f.
    std::vector<Edge> edges = fx.synth.net.edges();
    const Vertex sprime = fx.synth.net.vertex_count();
    const Vertex tprime = sprime + 1;
    edges.push_back({sprime, e.head, e.weight, e.level});
    edges.push_back({f.tail, tprime, f.weight, f.level});
    const RoadNetwork wrapped(tprime + 1, std::move(edges));
    const ScopeNetwork sn = ScopeNetwork::build(wrapped, *fx.sn.config);
    const auto found = bidirectional_s_dijkstra(sn, sprime, tprime);
    if (!found || found->weight == kInfWeight) ok = false;
  }
  report(9, ok, "100 random edge pairs admit finite admissible connections",
         fmt("%.1fs", timer.seconds()));
}

// 10. Bundle round trips are lossless and digest mismatches are detected.
void check_bundle_integrity(const std::vector<const BigFixture*>& fixtures) {
  bool ok = true;
  for (const auto* fx : fixtures) {
    std::stringstream ss;
    save_bundle(fx->bundle, ss);
    try {
      const PreprocessedBundle back = load_bundle(ss, fx->synth.net);
      if (back.digest != fx->bundle.digest || back.partition != fx->bundle.partition ||
          back.boundary != fx->bundle.boundary ||
          back.sreach_fwd != fx->bundle.sreach_fwd ||
          back.sreach_rev != fx->bundle.sreach_rev ||
          back.anti_sreach != fx->bundle.anti_sreach ||
          !(back.config.bounded() == fx->bundle.config.bounded()))
        ok = false;
    } catch (const FormatError&) {
      ok = false;
    }
    // The same bundle against a perturbed network must be rejected.
    auto edges = fx->synth.net.edges();
    edges[0].weight += 1;
    RoadNetwork other(fx->synth.net.vertex_count(), std::move(edges));
    other.set_coordinates(fx->synth.net.coordinates());
    std::stringstream again;
    save_bundle(fx->bundle, again);
    try {
      load_bundle(again, other);
      ok = false;
    } catch (const FormatError&) {
    }
  }
  report(10, ok, "bundle round trip is lossless and digest mismatch is detected", "");
}

}  // namespace

int main() {
  Timer total;
  check_bidirectional_exactness();

  Timer mid_timer;
  const BigFixture mid = make_fixture(14, 220);  // ~20k edges
  std::printf("  [fixture] %ux%u cities: %u vertices, %u edges, %u cells (%.1fs)\n",
              14u, 14u, mid.synth.net.vertex_count(), mid.synth.net.edge_count(),
              mid.bundle.partition.cell_count, mid_timer.seconds());

  check_pruning_soundness(mid);
  check_boundary_distances();

  Timer big_timer;
  const BigFixture big = make_fixture(20, 440);
  std::printf("  [fixture] %ux%u cities: %u vertices, %u edges, %u cells (%.1fs)\n",
              20u, 20u, big.synth.net.vertex_count(), big.synth.net.edge_count(),
              big.bundle.partition.cell_count, big_timer.seconds());

  check_end_to_end(big);
  check_partitions({&mid, &big});
  check_compression(mid);
  check_search_space(big);
  check_penalty(mid);
  check_edge_pair_existence(mid);
  check_bundle_integrity({&mid, &big});

  std::printf("%s: %d failure(s), %.1fs total\n", failures ? "FAILED" : "OK", failures,
              total.seconds());
  return failures ? 1 : 0;
}
