// scope-route: command-line surface for the scope-aware routing engine.
//
//   gen         generate a synthetic hierarchical network + scope config
//   validate    structural validation (connectivity, scope, distribution)
//   preprocess  partition, boundary graph, reach tables -> bundle file
//   query       one multi-stage query over a preprocessed bundle
//   bench       bucketed query statistics against a plain-Dijkstra baseline
//   oracle      fuzz searches against the exhaustive oracle on tiny networks
//
// Every command is deterministic for fixed inputs and seed. The environment
// variable SCOPE_ROUTE_THREADS caps preprocessing concurrency.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "scope_route/boundary.hpp"
#include "scope_route/classical.hpp"
#include "scope_route/oracle.hpp"
#include "scope_route/query.hpp"
#include "scope_route/reach.hpp"
#include "scope_route/synth.hpp"
#include "scope_route/validate.hpp"

using namespace scope_route;

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CLI::ValidationError("cannot open " + path + " for writing");
  return out;
}

LoadedNetwork load_pair(const std::string& net_path, const std::string& cfg_path) {
  auto net_in = open_input(net_path);
  auto cfg_in = open_input(cfg_path);
  return load_network_and_config(net_in, cfg_in);
}

PreprocessedBundle load_bundle_file(const std::string& path, const RoadNetwork& net) {
  auto in = open_input(path);
  return load_bundle(in, net);
}

double ms_between(std::chrono::steady_clock::time_point a,
                  std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double, std::milli>(b - a).count();
}

// ---------------------------------------------------------------------------
// gen

int cmd_gen(const SynthParams& params, std::uint64_t seed, const std::string& net_path,
            const std::string& cfg_path) {
  const SyntheticNetwork synth = generate_synthetic(params, seed);
  {
    auto out = open_output(net_path);
    save_network(synth.net, out);
  }
  {
    auto out = open_output(cfg_path);
    save_scope_config(synth.config, out);
  }
  std::printf("network: %u vertices, %u edges -> %s\n", synth.net.vertex_count(),
              synth.net.edge_count(), net_path.c_str());
  std::printf("config:  %zu bounded levels -> %s\n", synth.config.bounded_count(),
              cfg_path.c_str());
  std::printf("\nscope-level distribution\n%-8s %10s %8s\n", "level", "edges", "share");
  for (const auto& [level, count] : synth.level_distribution)
    std::printf("%-8s %10zu %7.2f%%\n", level_to_string(level).c_str(), count,
                100.0 * double(count) / synth.net.edge_count());
  return 0;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::string& net_path, const std::string& cfg_path,
                 std::size_t cell_size) {
  const LoadedNetwork loaded = load_pair(net_path, cfg_path);
  const SizeLimits limits = default_size_limits(loaded.config, cell_size);
  const ValidationReport report = validate_network(loaded.net, loaded.config, limits);

  std::printf("routing-connected: %s\n", report.routing_connected ? "yes" : "NO");
  if (report.proper_scope_violations.empty()) {
    std::printf("proper scope: yes\n");
  } else {
    std::printf("proper scope: NO (%zu violations)\n", report.proper_scope_violations.size());
    for (const auto& v : report.proper_scope_violations)
      std::printf("  level %s: edge %u cannot reach edge %u\n",
                  level_to_string(v.level).c_str(), v.from_edge, v.to_edge);
  }
  if (report.well_distributed_violations.empty()) {
    std::printf("well-distributed: yes\n");
  } else {
    std::printf("well-distributed: NO (%zu oversized pockets)\n",
                report.well_distributed_violations.size());
    for (const auto& v : report.well_distributed_violations)
      std::printf("  level %s: pocket of %zu vertices\n", level_to_string(v.level).c_str(),
                  v.component.size());
  }
  return report.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// preprocess

int cmd_preprocess(const std::string& net_path, const std::string& cfg_path,
                   const std::string& out_path, const PreprocessOptions& options) {
  const LoadedNetwork loaded = load_pair(net_path, cfg_path);
  const auto t0 = std::chrono::steady_clock::now();
  const PreprocessedBundle bundle = preprocess_network(loaded.net, loaded.config, options);
  const auto t1 = std::chrono::steady_clock::now();

  const auto part_report = validate_partition(loaded.net, bundle.partition);
  if (!part_report.ok()) {
    for (const auto& v : part_report.violations) std::fprintf(stderr, "partition: %s\n", v.c_str());
    return 1;
  }
  {
    auto out = open_output(out_path);
    save_bundle(bundle, out);
  }
  std::printf("cells: %u (boundary vertices: %zu)\n", bundle.partition.cell_count,
              bundle.partition.global_boundary.size());
  std::printf("boundary graph: %zu arcs, |E(B)|/|E(G)| = %.2f%%\n", bundle.boundary.edges.size(),
              100.0 * double(bundle.boundary.edges.size()) / loaded.net.edge_count());
  std::printf("preprocessing time: %.1f ms -> %s\n", ms_between(t0, t1), out_path.c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// query

int cmd_query(const std::string& net_path, const std::string& cfg_path,
              const std::string& bundle_path, Vertex s, Vertex t, const QueryOptions& options,
              bool dump_walk) {
  const LoadedNetwork loaded = load_pair(net_path, cfg_path);
  const PreprocessedBundle bundle = load_bundle_file(bundle_path, loaded.net);
  const QueryEngine engine(loaded.net, bundle);
  const QueryResult r = engine.query(s, t, options);

  if (r.weight == kInfWeight)
    std::printf("no admissible walk from %u to %u\n", s, t);
  else
    std::printf("weight: %g\n", r.weight);
  const double total_ms = r.stats.unsaturated_ms + r.stats.opening_ms + r.stats.boundary_ms +
                          r.stats.closing_ms;
  std::printf("%-12s %-16s %-16s %-12s\n", "hit cells", "scanned (cell)", "scanned (bnd)",
              "query time");
  std::printf("%-12zu %-16zu %-16zu %.3f ms\n", r.stats.cells_hit,
              r.stats.unsaturated_scanned + r.stats.opening_scanned + r.stats.closing_scanned,
              r.stats.boundary_scanned, total_ms);
  std::printf("max queue: cellular %zu, boundary %zu\n", r.stats.cellular_max_queue,
              r.stats.boundary_max_queue);
  if (r.stats.answered_by_unsaturated) std::printf("answered by the unsaturated stage\n");
  if (r.stats.early_exit) std::printf("boundary stage skipped (early exit)\n");
  if (r.stats.used_fallback) std::printf("fallback: region grew to the whole network\n");
  if (dump_walk && r.weight != kInfWeight) {
    std::printf("walk:");
    for (Vertex v : r.walk.vertices) std::printf(" %u", v);
    std::printf("\n");
  }
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BucketRow {
  std::size_t pairs = 0;
  double cells = 0, scanned = 0, baseline_scanned = 0;
  double cell_queue = 0, boundary_queue = 0;
  double query_ms = 0;
  double penalty = 0;  // admissible / unrestricted weight ratio
  std::size_t penalty_pairs = 0;
};

int cmd_bench(const std::string& net_path, const std::string& cfg_path,
              const std::string& bundle_path, std::size_t n_pairs, std::uint64_t seed,
              std::size_t n_buckets) {
  const LoadedNetwork loaded = load_pair(net_path, cfg_path);
  const PreprocessedBundle bundle = load_bundle_file(bundle_path, loaded.net);
  const QueryEngine engine(loaded.net, bundle);
  const DiGraph g = DiGraph::from_network(loaded.net);
  const DiGraph grev = g.reversed();

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, loaded.net.vertex_count() - 1);

  struct Sample {
    Weight base_weight;
    QueryResult result;
    std::size_t base_scanned;
    double total_ms;
  };
  std::vector<Sample> samples;
  samples.reserve(n_pairs);
  Weight max_base = 0;
  while (samples.size() < n_pairs) {
    const Vertex s = pick(rng), t = pick(rng);
    if (s == t) continue;
    const auto base = bidirectional_dijkstra(g, grev, s, t);
    if (!base) continue;  // unreachable even without scope constraints
    const auto t0 = std::chrono::steady_clock::now();
    QueryResult r = engine.query(s, t);
    const auto t1 = std::chrono::steady_clock::now();
    max_base = std::max(max_base, base->weight);
    samples.push_back(
        {base->weight, std::move(r), base->stats.scanned_vertices, ms_between(t0, t1)});
  }

  std::vector<BucketRow> rows(n_buckets);
  const Weight bucket_width = max_base / double(n_buckets) + 1e-9;
  for (const auto& smp : samples) {
    const std::size_t b =
        std::min(n_buckets - 1, static_cast<std::size_t>(smp.base_weight / bucket_width));
    auto& row = rows[b];
    ++row.pairs;
    row.cells += double(smp.result.stats.cells_hit);
    row.scanned += double(smp.result.stats.total_scanned());
    row.baseline_scanned += double(smp.base_scanned);
    row.cell_queue += double(smp.result.stats.cellular_max_queue);
    row.boundary_queue += double(smp.result.stats.boundary_max_queue);
    row.query_ms += smp.total_ms;
    if (smp.result.weight != kInfWeight) {
      row.penalty += smp.result.weight / smp.base_weight;
      ++row.penalty_pairs;
    }
  }

  std::printf("%u pairs, bucketed by unrestricted distance (width %g)\n\n",
              unsigned(samples.size()), bucket_width);
  std::printf("%-14s %6s %10s %10s %14s %9s %9s %10s %9s\n", "bucket", "pairs", "hit cells",
              "scanned", "baseline scan", "queue(c)", "queue(b)", "query ms", "penalty");
  for (std::size_t b = 0; b < n_buckets; ++b) {
    const auto& row = rows[b];
    char label[64];
    std::snprintf(label, sizeof label, "[%.0f, %.0f)", b * bucket_width, (b + 1) * bucket_width);
    if (row.pairs == 0) {
      std::printf("%-14s %6d\n", label, 0);
      continue;
    }
    const double n = double(row.pairs);
    std::printf("%-14s %6zu %10.1f %10.1f %14.1f %9.1f %9.1f %10.3f %9.4f\n", label, row.pairs,
                row.cells / n, row.scanned / n, row.baseline_scanned / n, row.cell_queue / n,
                row.boundary_queue / n, row.query_ms / n,
                row.penalty_pairs ? row.penalty / double(row.penalty_pairs) : 0.0);
  }
  return 0;
}

// ---------------------------------------------------------------------------
// oracle

int cmd_oracle(std::size_t instances, std::uint64_t seed, const std::string& repro_path) {
  std::mt19937_64 rng(seed);
  std::size_t mismatches = 0;
  for (std::size_t it = 0; it < instances; ++it) {
    // Tiny random instance within the oracle guard.
    std::uniform_int_distribution<Vertex> nv(3, 8);
    const Vertex n = nv(rng);
    std::vector<Edge> edges;
    std::vector<Vertex> cycle(n);
    for (Vertex v = 0; v < n; ++v) cycle[v] = v;
    std::shuffle(cycle.begin(), cycle.end(), rng);
    std::uniform_int_distribution<int> wdist(1, 9), ldist(0, 5);
    auto rand_level = [&]() -> Level {
      const int r = ldist(rng);
      return r < 2 ? 0 : (r < 4 ? 1 : kLevelInf);
    };
    for (Vertex i = 0; i < n; ++i) {
      edges.push_back({cycle[i], cycle[(i + 1) % n], Weight(wdist(rng)), rand_level()});
      edges.push_back({cycle[(i + 1) % n], cycle[i], Weight(wdist(rng)), rand_level()});
    }
    std::uniform_int_distribution<Vertex> pickv(0, n - 1);
    const std::size_t extra = n / 2;
    for (std::size_t e = 0; e < extra; ++e) {
      const Vertex a = pickv(rng), b = pickv(rng);
      if (a != b) edges.push_back({a, b, Weight(wdist(rng)), rand_level()});
    }
    const RoadNetwork net(n, std::move(edges));
    std::uniform_int_distribution<int> nu1(3, 30), k1(2, 6);
    const ScopeConfig config({{0, 0, 1},
                              {1, Weight(nu1(rng)), Weight(k1(rng))},
                              {kLevelInf, kInfWeight, 0}});

    const ScopeNetwork sn = ScopeNetwork::build(net, config);
    const PreprocessedBundle bundle = preprocess_network(net, config, {});
    const QueryEngine engine(net, bundle);
    bool bad = false;
    for (Vertex s = 0; s < n && !bad; ++s) {
      const SearchLabels labels = s_dijkstra(net, config, sn.handicaps, s);
      const OracleLabels oracle = oracle_forward(net, config, sn.handicaps, s, n + 2);
      for (Vertex v = 0; v < n && !bad; ++v)
        if (labels.dist[v] != oracle.dist[v]) bad = true;
      for (Vertex t = 0; t < n && !bad; ++t) {
        if (s == t) continue;
        const auto expect = oracle_admissible_optimum(net, config, s, t, n + 2);
        const auto got = bidirectional_s_dijkstra(sn, s, t);
        if (got.has_value() != expect.has_value() || (got && got->weight != expect->first))
          bad = true;
        const QueryResult q = engine.query(s, t);
        if ((q.weight == kInfWeight) == expect.has_value() ||
            (expect && q.weight != expect->first))
          bad = true;
      }
    }
    if (bad) {
      ++mismatches;
      {
        auto out = open_output(repro_path);
        save_network(net, out);
      }
      {
        auto out = open_output(repro_path + ".config");
        save_scope_config(config, out);
      }
      std::fprintf(stderr, "mismatch on instance %zu (seed %llu), repro -> %s / %s.config\n", it,
                   static_cast<unsigned long long>(seed), repro_path.c_str(), repro_path.c_str());
    }
  }
  std::printf("%zu instances, %zu mismatches\n", instances, mismatches);
  return static_cast<int>(std::min<std::size_t>(mismatches, 125));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scope-aware multi-stage route planning engine"};
  app.require_subcommand(1);

  // gen ----------------------------------------------------------------
  SynthParams params;
  std::uint64_t gen_seed = 1;
  std::string gen_net = "network.txt", gen_cfg = "scope.txt";
  auto* gen = app.add_subcommand("gen", "generate a synthetic hierarchical network");
  gen->add_option("--cities-x", params.cities_x, "city grid width");
  gen->add_option("--cities-y", params.cities_y, "city grid height");
  gen->add_option("--block-size", params.block_size, "urban grid size per city");
  gen->add_option("--locals", params.locals_per_city, "cul-de-sacs per city");
  gen->add_option("--alleys", params.alleys_per_city, "alley stubs per city");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--net", gen_net, "network output path");
  gen->add_option("--config", gen_cfg, "scope config output path");

  // validate -----------------------------------------------------------
  std::string val_net, val_cfg;
  std::size_t val_cell = 128;
  auto* val = app.add_subcommand("validate", "validate structure and scope distribution");
  val->add_option("--net", val_net, "network path")->required();
  val->add_option("--config", val_cfg, "scope config path")->required();
  val->add_option("--cell-size", val_cell, "expected cell size for distribution limits");

  // preprocess ----------------------------------------------------------
  std::string pre_net, pre_cfg, pre_out = "bundle.bin";
  PreprocessOptions pre_options;
  auto* pre = app.add_subcommand("preprocess", "build the preprocessed bundle");
  pre->add_option("--net", pre_net, "network path")->required();
  pre->add_option("--config", pre_cfg, "scope config path")->required();
  pre->add_option("--out", pre_out, "bundle output path");
  pre->add_option("--target-size", pre_options.partition.target_size, "target cell edge count");
  pre->add_option("--min-size", pre_options.partition.min_size, "minimum cell edge count");
  pre->add_option("--max-size", pre_options.partition.max_size, "maximum cell edge count");
  pre->add_option("--threads", pre_options.threads,
                  "worker threads (0 = hardware, capped by SCOPE_ROUTE_THREADS)");

  // query ----------------------------------------------------------------
  std::string q_net, q_cfg, q_bundle;
  Vertex q_s = 0, q_t = 0;
  QueryOptions q_options;
  bool q_no_prune = false, q_no_early = false, q_dump = false;
  auto* qry = app.add_subcommand("query", "run one multi-stage query");
  qry->add_option("--net", q_net, "network path")->required();
  qry->add_option("--config", q_cfg, "scope config path")->required();
  qry->add_option("--bundle", q_bundle, "bundle path")->required();
  qry->add_option("-s,--source", q_s, "source vertex")->required();
  qry->add_option("-t,--target", q_t, "target vertex")->required();
  qry->add_flag("--no-prune", q_no_prune, "disable reach pruning");
  qry->add_flag("--no-early-exit", q_no_early, "never skip the boundary stage");
  qry->add_flag("--dump-walk", q_dump, "print the walk's vertex sequence");

  // bench ----------------------------------------------------------------
  std::string b_net, b_cfg, b_bundle;
  std::size_t b_pairs = 1000, b_buckets = 5;
  std::uint64_t b_seed = 1;
  auto* bench = app.add_subcommand("bench", "bucketed query statistics vs a Dijkstra baseline");
  bench->add_option("--net", b_net, "network path")->required();
  bench->add_option("--config", b_cfg, "scope config path")->required();
  bench->add_option("--bundle", b_bundle, "bundle path")->required();
  bench->add_option("--pairs", b_pairs, "number of random pairs");
  bench->add_option("--seed", b_seed, "pair sampling seed");
  bench->add_option("--buckets", b_buckets, "number of distance buckets");

  // oracle ---------------------------------------------------------------
  std::size_t o_instances = 200;
  std::uint64_t o_seed = 1;
  std::string o_repro = "oracle_repro.txt";
  auto* orc = app.add_subcommand("oracle", "fuzz searches against the exhaustive oracle");
  orc->add_option("--instances", o_instances, "number of random tiny networks");
  orc->add_option("--seed", o_seed, "fuzzing seed");
  orc->add_option("--repro", o_repro, "path for the mismatch repro dump");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(params, gen_seed, gen_net, gen_cfg);
    if (*val) return cmd_validate(val_net, val_cfg, val_cell);
    if (*pre) return cmd_preprocess(pre_net, pre_cfg, pre_out, pre_options);
    if (*qry) {
      q_options.prune = !q_no_prune;
      q_options.early_exit = !q_no_early;
      return cmd_query(q_net, q_cfg, q_bundle, q_s, q_t, q_options, q_dump);
    }
    if (*bench) return cmd_bench(b_net, b_cfg, b_bundle, b_pairs, b_seed, b_buckets);
    if (*orc) return cmd_oracle(o_instances, o_seed, o_repro);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
