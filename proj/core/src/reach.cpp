#include "scope_route/reach.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "scope_route/parallel.hpp"

namespace scope_route {

unsigned resolve_thread_count(unsigned requested) {
  unsigned n = requested > 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SCOPE_ROUTE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return std::max(1u, n);
}

std::vector<Vertex> saturated_vertices(const SearchLabels& labels, const RoadNetwork& net,
                                       const ScopeConfig& config) {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < net.vertex_count(); ++v)
    if (labels.dist[v] != kInfWeight && is_saturated(labels, config, v)) out.push_back(v);
  return out;
}

ReachTable compute_sreach_upper(const RoadNetwork& net, const ScopeConfig& config,
                                const HandicapTable& handicaps, unsigned threads) {
  const Vertex n = net.vertex_count();
  const unsigned workers = resolve_thread_count(threads);
  // Per-worker candidate tables (-1 = no candidate yet), merged at the end.
  std::vector<std::vector<Weight>> local(workers, std::vector<Weight>(n, -1));

  parallel_for(n, workers, [&](std::size_t x, unsigned w) {
    const SearchLabels labels = s_dijkstra(net, config, handicaps, x);
    Weight max_saturated = -1;
    for (Vertex y = 0; y < n; ++y)
      if (labels.dist[y] != kInfWeight && is_saturated(labels, config, y))
        max_saturated = std::max(max_saturated, labels.dist[y]);
    if (max_saturated < 0) return;
    // Every discovered vertex gets the candidate: any v on an optimal
    // admissible walk toward a saturated target satisfies d(v) <= the
    // largest saturated distance, whether v itself is saturated or not.
    // (Restricting to non-saturated v would under-estimate at saturated
    // way-points and break exactness of pruned searches there.)
    auto& table = local[w];
    for (Vertex v = 0; v < n; ++v)
      if (labels.dist[v] != kInfWeight) table[v] = std::max(table[v], max_saturated);
  });

  ReachTable table(n, kInfWeight);
  for (Vertex v = 0; v < n; ++v) {
    Weight best = -1;
    for (const auto& t : local) best = std::max(best, t[v]);
    if (best >= 0) table[v] = best;
  }
  return table;
}

ReachTable compute_anti_sreach(const ScopeNetwork& sn, const AntiSreachOptions& options) {
  const RoadNetwork& net = *sn.net;
  const Vertex n = net.vertex_count();
  if (n > options.max_vertices) return ReachTable(n, kInfWeight);  // pruning disabled

  // Certified upper bound: the largest truncated single-source distance at
  // each vertex, over all sources and both directions. Any prefix or suffix
  // of a walk the truncated search can return is itself a truncated label,
  // so this dominates the min(prefix, suffix) quantity pruning compares
  // against. Tighter per-walk tables are unsound here: the reverse half of
  // a truncated search cannot in general realize suffixes of forward-side
  // vertices, and pruning equal-distance relaxations loses admissibility
  // merges, both of which change answers.
  const unsigned workers = resolve_thread_count(options.threads);
  std::vector<ReachTable> local(workers, ReachTable(n, 0));

  SearchOptions search;
  search.stop_at_saturated = true;
  parallel_for(n, workers, [&](std::size_t x, unsigned w) {
    auto& table = local[w];
    const SearchLabels fwd = s_dijkstra(net, *sn.config, sn.handicaps, x, search);
    const SearchLabels rev = s_dijkstra(sn.reversed, *sn.config, sn.rev_handicaps, x, search);
    for (Vertex v = 0; v < n; ++v) {
      if (fwd.dist[v] != kInfWeight) table[v] = std::max(table[v], fwd.dist[v]);
      if (rev.dist[v] != kInfWeight) table[v] = std::max(table[v], rev.dist[v]);
    }
  });

  ReachTable table(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (const auto& t : local) table[v] = std::max(table[v], t[v]);
  return table;
}

}  // namespace scope_route
