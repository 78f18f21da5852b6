#include "scope_route/query.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace scope_route {

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

std::optional<std::pair<Weight, Walk>> unsaturated_local_search(const ScopeNetwork& sn,
                                                                const ReachTable* anti_sreach,
                                                                Vertex s, Vertex t,
                                                                SearchStats* stats) {
  BidirOptions options;
  options.stop_at_saturated = true;
  options.anti_reach = anti_sreach;
  const auto result = bidirectional_s_dijkstra(sn, s, t, options);
  if (stats && result) *stats = result->stats;
  if (!result) return std::nullopt;
  return std::make_pair(result->weight, result->walk);
}

QueryEngine::QueryEngine(const RoadNetwork& net, const PreprocessedBundle& bundle)
    : net_(net), bundle_(bundle), sn_(ScopeNetwork::build(net, bundle.config)) {
  cells_of_vertex_.resize(net.vertex_count());
  cell_edges_.resize(bundle.partition.cell_count);
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    const CellId c = bundle.partition.edge_cell[e];
    cell_edges_[c].push_back(e);
    cells_of_vertex_[net.edge(e).tail].push_back(c);
    cells_of_vertex_[net.edge(e).head].push_back(c);
  }
  for (auto& cells : cells_of_vertex_) {
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
  }
}

QueryEngine::OpeningResult QueryEngine::opening_stage(Vertex x, bool forward,
                                                      const QueryOptions& options) const {
  const RoadNetwork& g = forward ? net_ : sn_.reversed;
  const HandicapTable& h = forward ? sn_.handicaps : sn_.rev_handicaps;
  const ReachTable* sreach =
      options.prune ? (forward ? &bundle_.sreach_fwd : &bundle_.sreach_rev) : nullptr;

  OpeningResult out;
  std::vector<char> mask(net_.edge_count(), 0);
  std::vector<char> in_cell(bundle_.partition.cell_count, 0);
  auto absorb = [&](CellId c) {
    if (in_cell[c]) return false;
    in_cell[c] = 1;
    out.cells.push_back(c);
    for (EdgeId e : cell_edges_[c]) mask[e] = 1;
    return true;
  };
  for (CellId c : cells_of_vertex_[x]) absorb(c);

  // A reached vertex lies on the region boundary when some incident edge is
  // outside the region (incidence is direction-independent).
  auto region_boundary = [&](Vertex v) {
    for (const EdgeId* it = net_.out_begin(v); it != net_.out_end(v); ++it)
      if (!mask[*it]) return true;
    for (const EdgeId* it = net_.in_begin(v); it != net_.in_end(v); ++it)
      if (!mask[*it]) return true;
    return false;
  };

  while (true) {
    SearchOptions so;
    so.sreach = sreach;
    so.edge_mask = &mask;
    out.labels = s_dijkstra(g, *sn_.config, h, x, so);
    bool grown = false;
    for (Vertex v = 0; v < net_.vertex_count(); ++v) {
      if (out.labels.dist[v] == kInfWeight) continue;
      if (!region_boundary(v)) continue;
      if (is_saturated(out.labels, *sn_.config, v)) continue;
      for (CellId c : cells_of_vertex_[v]) grown |= absorb(c);
    }
    if (!grown) break;
  }

  std::sort(out.cells.begin(), out.cells.end());
  out.degenerate = out.cells.size() == bundle_.partition.cell_count &&
                   bundle_.partition.cell_count > 1;
  out.scanned = out.labels.stats.scanned_vertices;
  out.max_queue = out.labels.stats.max_queue_size;
  for (Vertex v : bundle_.boundary.vertices)
    if (out.labels.dist[v] != kInfWeight) out.frontier.push_back(v);
  return out;
}

std::optional<QueryEngine::BoundaryPath> QueryEngine::boundary_stage(
    Vertex s, Vertex t, const OpeningResult& from_s, const OpeningResult& to_t) const {
  const BoundaryGraph& bg = bundle_.boundary;
  const auto n = static_cast<Vertex>(bg.vertices.size());
  const Vertex sidx = n, tidx = n + 1;

  std::vector<DiGraph::Arc> arcs;
  arcs.reserve(bg.edges.size() + from_s.frontier.size() + to_t.frontier.size());
  for (const auto& e : bg.edges)
    arcs.push_back({static_cast<Vertex>(*bg.index_of(e.u)),
                    static_cast<Vertex>(*bg.index_of(e.v)), e.p});
  const std::size_t base_arcs = arcs.size();
  for (Vertex u : from_s.frontier)
    arcs.push_back({sidx, static_cast<Vertex>(*bg.index_of(u)), from_s.labels.dist[u]});
  for (Vertex u : to_t.frontier)
    arcs.push_back({static_cast<Vertex>(*bg.index_of(u)), tidx, to_t.labels.dist[u]});

  const DiGraph g(n + 2, std::move(arcs));
  const DiGraph grev = g.reversed();

  ReachAStarOptions options;
  options.subtract_first_arc = true;
  ReachTable reach;
  if (bg.reach.size() == n) {
    reach = bg.reach;
    reach.push_back(kInfWeight);
    reach.push_back(kInfWeight);
    options.reach = &reach;
  }

  // Euclidean lower bounds (weights never undercut the straight-line
  // distance); disabled if any arc would violate feasibility.
  std::vector<Weight> to_target, to_source;
  if (net_.has_coordinates()) {
    const auto& coords = net_.coordinates();
    auto original = [&](Vertex v) { return v == sidx ? s : v == tidx ? t : bg.vertices[v]; };
    to_target.resize(n + 2);
    to_source.resize(n + 2);
    for (Vertex v = 0; v < n + 2; ++v) {
      const auto& c = coords[original(v)];
      to_target[v] = std::hypot(c.x - coords[t].x, c.y - coords[t].y);
      to_source[v] = std::hypot(c.x - coords[s].x, c.y - coords[s].y);
    }
    bool feasible = true;
    for (const auto& a : g.arcs()) {
      if (a.weight + to_target[a.head] - to_target[a.tail] < -1e-6 ||
          a.weight + to_source[a.tail] - to_source[a.head] < -1e-6) {
        feasible = false;
        break;
      }
    }
    if (feasible) {
      options.dist_to_target = &to_target;
      options.dist_to_source = &to_source;
    }
  }

  const auto result = reach_astar_bidirectional(g, grev, sidx, tidx, options);
  if (!result) return std::nullopt;

  BoundaryPath path;
  path.weight = result->weight;
  path.stats = result->stats;
  for (std::size_t i = 1; i + 1 < result->vertices.size(); ++i)
    path.vertices.push_back(bg.vertices[result->vertices[i]]);
  for (EdgeId a : result->arcs)
    if (a < base_arcs) path.edges.push_back(a);  // virtual first/last arcs dropped
  return path;
}

Walk QueryEngine::closing_stage(const BoundaryPath& path, const OpeningResult& from_s,
                                const OpeningResult& to_t, SearchStats* stats) const {
  if (path.vertices.empty())
    throw std::logic_error("closing_stage: boundary path without boundary vertices");

  const auto head = construct_walk(from_s.labels, net_, path.vertices.front());
  const auto tail = construct_walk(to_t.labels, sn_.reversed, path.vertices.back());
  if (!head || !tail) throw std::logic_error("closing_stage: unreachable boundary terminal");

  Walk walk = *head;
  for (std::size_t ei : path.edges) {
    const auto& be = bundle_.boundary.edges[ei];
    // The providing cell's unbounded-level subgraph, with arcs mapped back
    // to original edges.
    std::vector<Vertex> verts;
    std::vector<EdgeId> cell_inf;
    for (EdgeId e : cell_edges_[be.cell]) {
      if (net_.edge(e).level != kLevelInf) continue;
      cell_inf.push_back(e);
      verts.push_back(net_.edge(e).tail);
      verts.push_back(net_.edge(e).head);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    auto local = [&](Vertex v) {
      return static_cast<Vertex>(std::lower_bound(verts.begin(), verts.end(), v) -
                                 verts.begin());
    };
    std::vector<DiGraph::Arc> arcs;
    arcs.reserve(cell_inf.size());
    for (EdgeId e : cell_inf)
      arcs.push_back({local(net_.edge(e).tail), local(net_.edge(e).head), net_.edge(e).weight});
    const DiGraph g(static_cast<Vertex>(verts.size()), std::move(arcs));
    const auto segment = bidirectional_dijkstra(g, g.reversed(), local(be.u), local(be.v));
    if (!segment || segment->weight != be.p)
      throw std::runtime_error("closing_stage: boundary edge does not match its cell distance");
    if (stats) stats->scanned_vertices += segment->stats.scanned_vertices;
    for (EdgeId a : segment->arcs) {
      const EdgeId orig = cell_inf[a];
      walk.edges.push_back(orig);
      walk.vertices.push_back(net_.edge(orig).head);
    }
  }

  // Reverse-network edge ids equal their forward originals.
  for (std::size_t i = tail->edges.size(); i-- > 0;) {
    walk.edges.push_back(tail->edges[i]);
    walk.vertices.push_back(tail->vertices[i]);
  }
  walk.weight = path.weight;
  return walk;
}

QueryResult QueryEngine::query(Vertex s, Vertex t, const QueryOptions& options) const {
  if (s >= net_.vertex_count() || t >= net_.vertex_count())
    throw std::out_of_range("query: vertex out of range");

  QueryResult result;
  if (s == t) {
    result.weight = 0;
    result.walk.vertices = {s};
    return result;
  }

  auto start = std::chrono::steady_clock::now();
  SearchStats unsat_stats;
  const auto unsat = unsaturated_local_search(
      sn_, options.prune ? &bundle_.anti_sreach : nullptr, s, t, &unsat_stats);
  result.stats.unsaturated_scanned = unsat_stats.scanned_vertices;
  result.stats.cellular_max_queue = unsat_stats.max_queue_size;
  result.stats.unsaturated_ms = ms_since(start);

  start = std::chrono::steady_clock::now();
  const OpeningResult from_s = opening_stage(s, true, options);
  const OpeningResult to_t = opening_stage(t, false, options);
  result.stats.opening_scanned = from_s.scanned + to_t.scanned;
  result.stats.cellular_max_queue =
      std::max({result.stats.cellular_max_queue, from_s.max_queue, to_t.max_queue});
  std::vector<CellId> hit(from_s.cells);
  hit.insert(hit.end(), to_t.cells.begin(), to_t.cells.end());
  std::sort(hit.begin(), hit.end());
  hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
  result.stats.cells_hit = hit.size();
  result.stats.opening_ms = ms_since(start);

  if (from_s.degenerate || to_t.degenerate) {
    // The regions grew to the whole network; fall back to one exact full
    // search.
    result.stats.used_fallback = true;
    const auto full = bidirectional_s_dijkstra(sn_, s, t, {});
    if (full && (!unsat || full->weight <= unsat->first)) {
      result.weight = full->weight;
      result.walk = full->walk;
    } else if (unsat) {
      result.weight = unsat->first;
      result.walk = unsat->second;
      result.stats.answered_by_unsaturated = true;
    }
    return result;
  }

  // Meeting candidate inside the union of the two regions.
  Weight meet_weight = kInfWeight;
  Vertex meet = 0;
  for (Vertex v = 0; v < net_.vertex_count(); ++v) {
    if (from_s.labels.dist[v] == kInfWeight || to_t.labels.dist[v] == kInfWeight) continue;
    const Weight w = from_s.labels.dist[v] + to_t.labels.dist[v];
    if (w < meet_weight) {
      meet_weight = w;
      meet = v;
    }
  }

  // No boundary route can undercut the cheapest pair of frontier exits.
  Weight frontier_bound = kInfWeight;
  {
    Weight best_s = kInfWeight, best_t = kInfWeight;
    for (Vertex u : from_s.frontier) best_s = std::min(best_s, from_s.labels.dist[u]);
    for (Vertex u : to_t.frontier) best_t = std::min(best_t, to_t.labels.dist[u]);
    if (best_s != kInfWeight && best_t != kInfWeight) frontier_bound = best_s + best_t;
  }

  std::optional<BoundaryPath> boundary;
  if (options.early_exit && meet_weight <= frontier_bound) {
    result.stats.early_exit = true;
  } else {
    start = std::chrono::steady_clock::now();
    boundary = boundary_stage(s, t, from_s, to_t);
    if (boundary) {
      result.stats.boundary_scanned = boundary->stats.scanned_vertices;
      result.stats.boundary_max_queue = boundary->stats.max_queue_size;
    }
    result.stats.boundary_ms = ms_since(start);
  }

  const Weight unsat_weight = unsat ? unsat->first : kInfWeight;
  const Weight boundary_weight = boundary ? boundary->weight : kInfWeight;
  result.weight = std::min({unsat_weight, meet_weight, boundary_weight});
  if (result.weight == kInfWeight) return result;

  if (unsat_weight == result.weight) {
    result.walk = unsat->second;
    result.stats.answered_by_unsaturated = true;
  } else if (meet_weight == result.weight) {
    const auto head = construct_walk(from_s.labels, net_, meet);
    const auto tail = construct_walk(to_t.labels, sn_.reversed, meet);
    result.walk = *head;
    for (std::size_t i = tail->edges.size(); i-- > 0;) {
      result.walk.edges.push_back(tail->edges[i]);
      result.walk.vertices.push_back(tail->vertices[i]);
    }
    result.walk.weight = meet_weight;
  } else {
    start = std::chrono::steady_clock::now();
    SearchStats closing_stats;
    result.walk = closing_stage(*boundary, from_s, to_t, &closing_stats);
    result.stats.closing_scanned = closing_stats.scanned_vertices;
    result.stats.closing_ms = ms_since(start);
  }
  return result;
}

}  // namespace scope_route
