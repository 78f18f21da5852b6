#include "scope_route/partition.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace scope_route {

bool Partition::is_boundary(Vertex v) const {
  return std::binary_search(global_boundary.begin(), global_boundary.end(), v);
}

namespace {

std::vector<Vertex> piece_vertices(const RoadNetwork& net, const std::vector<EdgeId>& piece) {
  std::vector<Vertex> verts;
  verts.reserve(piece.size() * 2);
  for (EdgeId e : piece) {
    verts.push_back(net.edge(e).tail);
    verts.push_back(net.edge(e).head);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  return verts;
}

std::size_t local_index(const std::vector<Vertex>& verts, Vertex v) {
  return std::lower_bound(verts.begin(), verts.end(), v) - verts.begin();
}

}  // namespace

SimplifiedGraph simplify(const RoadNetwork& net, const std::vector<EdgeId>& piece) {
  SimplifiedGraph out;
  const std::vector<Vertex> verts = piece_vertices(net, piece);
  const std::size_t n = verts.size();

  // Undirected multigraph adjacency over local vertex indices.
  std::vector<std::unordered_map<std::uint32_t, std::vector<EdgeId>>> nbr(n);
  std::vector<std::vector<EdgeId>> self_loops(n);
  for (EdgeId e : piece) {
    const auto lu = static_cast<std::uint32_t>(local_index(verts, net.edge(e).tail));
    const auto lv = static_cast<std::uint32_t>(local_index(verts, net.edge(e).head));
    if (lu == lv) {
      self_loops[lu].push_back(e);
    } else {
      nbr[lu][lv].push_back(e);
      nbr[lv][lu].push_back(e);
    }
  }

  // Weak components; keep the one with the most edges (ties: the one with
  // the smallest vertex).
  std::vector<std::uint32_t> comp(n, static_cast<std::uint32_t>(-1));
  std::vector<std::size_t> comp_edges;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (comp[v] != static_cast<std::uint32_t>(-1)) continue;
    const auto id = static_cast<std::uint32_t>(comp_edges.size());
    comp_edges.push_back(0);
    std::deque<std::uint32_t> bfs{v};
    comp[v] = id;
    while (!bfs.empty()) {
      const std::uint32_t u = bfs.front();
      bfs.pop_front();
      comp_edges[id] += self_loops[u].size();
      for (const auto& [w, edges] : nbr[u]) {
        if (comp[w] == static_cast<std::uint32_t>(-1)) {
          comp[w] = id;
          bfs.push_back(w);
        }
      }
    }
  }
  // Count multigraph edges per component (each once).
  for (std::uint32_t v = 0; v < n; ++v)
    for (const auto& [w, edges] : nbr[v])
      if (w > v) comp_edges[comp[v]] += edges.size();

  std::uint32_t kept = 0;
  for (std::uint32_t c = 1; c < comp_edges.size(); ++c)
    if (comp_edges[c] > comp_edges[kept]) kept = c;

  for (std::uint32_t v = 0; v < n; ++v) {
    if (comp[v] == kept) continue;
    for (EdgeId e : self_loops[v]) out.disconnected.push_back(e);
    for (const auto& [w, edges] : nbr[v])
      if (w > v)
        for (EdgeId e : edges) out.disconnected.push_back(e);
    self_loops[v].clear();
    nbr[v].clear();
  }
  std::sort(out.disconnected.begin(), out.disconnected.end());

  // Self-loops are attached to their vertex; pendant trees are peeled and
  // their edges re-anchored inward until every remaining vertex has at
  // least two distinct neighbors.
  std::vector<std::vector<EdgeId>> attached_to(n);
  std::vector<char> removed(n, 0);
  for (std::uint32_t v = 0; v < n; ++v)
    for (EdgeId e : self_loops[v]) attached_to[v].push_back(e);

  std::deque<std::uint32_t> peel;
  for (std::uint32_t v = 0; v < n; ++v)
    if (comp[v] == kept && nbr[v].size() == 1) peel.push_back(v);
  while (!peel.empty()) {
    const std::uint32_t v = peel.front();
    peel.pop_front();
    if (removed[v] || nbr[v].size() != 1) continue;
    const std::uint32_t u = nbr[v].begin()->first;
    for (EdgeId e : nbr[v].begin()->second) attached_to[u].push_back(e);
    for (EdgeId e : attached_to[v]) attached_to[u].push_back(e);
    attached_to[v].clear();
    nbr[v].clear();
    nbr[u].erase(v);
    removed[v] = 1;
    if (nbr[u].size() == 1) peel.push_back(u);
  }

  // Merge parallel edges into groups keyed by their endpoints.
  std::vector<std::vector<EdgeId>> groups;
  // group adjacency: vertex -> (neighbor -> group id)
  std::vector<std::unordered_map<std::uint32_t, std::uint32_t>> gadj(n);
  for (std::uint32_t v = 0; v < n; ++v) {
    if (removed[v] || comp[v] != kept) continue;
    std::vector<std::uint32_t> keys;
    for (const auto& [w, edges] : nbr[v]) keys.push_back(w);
    std::sort(keys.begin(), keys.end());
    for (std::uint32_t w : keys) {
      if (w < v) continue;
      const auto gid = static_cast<std::uint32_t>(groups.size());
      groups.push_back(nbr[v][w]);
      gadj[v][w] = gid;
      gadj[w][v] = gid;
    }
  }

  // Contract degree-2 chain vertices (no attached edges, neighbors not
  // already adjacent, to keep the graph simple).
  std::deque<std::uint32_t> chain;
  for (std::uint32_t v = 0; v < n; ++v)
    if (!removed[v] && comp[v] == kept && gadj[v].size() == 2 && attached_to[v].empty())
      chain.push_back(v);
  while (!chain.empty()) {
    const std::uint32_t v = chain.front();
    chain.pop_front();
    if (removed[v] || gadj[v].size() != 2 || !attached_to[v].empty()) continue;
    auto it = gadj[v].begin();
    const auto [u, g1] = *it++;
    const auto [w, g2] = *it;
    if (gadj[u].count(w)) continue;  // contraction would create a parallel edge
    auto& m1 = groups[g1];
    for (EdgeId e : groups[g2]) m1.push_back(e);
    groups[g2].clear();
    gadj[u].erase(v);
    gadj[w].erase(v);
    gadj[u][w] = g1;
    gadj[w][u] = g1;
    gadj[v].clear();
    removed[v] = 1;
    if (gadj[u].size() == 2 && attached_to[u].empty()) chain.push_back(u);
    if (gadj[w].size() == 2 && attached_to[w].empty()) chain.push_back(w);
  }

  for (std::uint32_t v = 0; v < n; ++v) {
    if (removed[v] || comp[v] != kept) continue;
    out.vertices.push_back(verts[v]);
    for (EdgeId e : attached_to[v]) out.attached.emplace_back(e, verts[v]);
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (removed[v] || comp[v] != kept) continue;
    std::vector<std::uint32_t> keys;
    for (const auto& [w, gid] : gadj[v]) keys.push_back(w);
    std::sort(keys.begin(), keys.end());
    for (std::uint32_t w : keys) {
      if (w < v) continue;
      SimplifiedGraph::ReducedEdge re;
      re.u = std::min(verts[v], verts[w]);
      re.v = std::max(verts[v], verts[w]);
      re.members = groups[gadj[v][w]];
      std::sort(re.members.begin(), re.members.end());
      out.edges.push_back(std::move(re));
    }
  }
  return out;
}

FlowNetwork split_vertices(const SimplifiedGraph& g) {
  FlowNetwork fn;
  fn.node_vertex = g.vertices;
  for (std::uint32_t i = 0; i < g.vertices.size(); ++i)
    fn.arcs.push_back({2 * i, 2 * i + 1, 1, true});
  for (const auto& e : g.edges) {
    const auto iu = static_cast<std::uint32_t>(local_index(g.vertices, e.u));
    const auto iv = static_cast<std::uint32_t>(local_index(g.vertices, e.v));
    fn.arcs.push_back({2 * iu + 1, 2 * iv, kInfWeight, false});
    fn.arcs.push_back({2 * iv + 1, 2 * iu, kInfWeight, false});
  }
  return fn;
}

void assign_capacities(FlowNetwork& fn, Vertex source, Vertex sink, unsigned restricted_radius,
                       double handicap_bonus, const std::vector<char>& touches_unbounded) {
  const std::size_t n = fn.node_vertex.size();
  const auto isrc = static_cast<std::uint32_t>(local_index(fn.node_vertex, source));
  const auto isnk = static_cast<std::uint32_t>(local_index(fn.node_vertex, sink));
  fn.source = 2 * isrc + 1;  // flow leaves the source's out-node
  fn.sink = 2 * isnk;        // and enters the sink's in-node

  // Hop distances in the (undirected) reduced graph from source and sink.
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& a : fn.arcs)
    if (!a.split) adj[a.from / 2].push_back(a.to / 2);
  auto bfs = [&](std::uint32_t start) {
    std::vector<unsigned> hops(n, static_cast<unsigned>(-1));
    std::deque<std::uint32_t> q{start};
    hops[start] = 0;
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop_front();
      for (std::uint32_t w : adj[u])
        if (hops[w] == static_cast<unsigned>(-1)) {
          hops[w] = hops[u] + 1;
          q.push_back(w);
        }
    }
    return hops;
  };
  const auto hop_src = bfs(isrc);
  const auto hop_snk = bfs(isnk);

  for (auto& a : fn.arcs) {
    if (!a.split) {
      a.capacity = kInfWeight;
      continue;
    }
    const std::uint32_t i = a.from / 2;
    if (i == isrc || i == isnk || hop_src[i] <= restricted_radius ||
        hop_snk[i] <= restricted_radius) {
      a.capacity = kInfWeight;
    } else {
      a.capacity = 1 + (touches_unbounded[i] ? handicap_bonus : 0);
    }
  }
}

namespace {

struct ResidualArc {
  std::uint32_t to;
  Weight residual;
  std::uint32_t partner;  // index of the reverse arc in the flat list
  std::int32_t flow_arc;  // original FlowNetwork arc index, -1 for reverse
};

}  // namespace

std::optional<VertexCut> min_vertex_cut(const FlowNetwork& fn) {
  const std::uint32_t nodes = fn.node_count();
  std::vector<std::vector<std::uint32_t>> out(nodes);
  std::vector<ResidualArc> arcs;
  arcs.reserve(fn.arcs.size() * 2);
  for (std::uint32_t i = 0; i < fn.arcs.size(); ++i) {
    const auto& a = fn.arcs[i];
    out[a.from].push_back(static_cast<std::uint32_t>(arcs.size()));
    arcs.push_back({a.to, a.capacity, static_cast<std::uint32_t>(arcs.size() + 1),
                    static_cast<std::int32_t>(i)});
    out[a.to].push_back(static_cast<std::uint32_t>(arcs.size()));
    arcs.push_back({a.from, 0, static_cast<std::uint32_t>(arcs.size() - 1), -1});
  }

  Weight flow = 0;
  std::vector<std::int32_t> via(nodes);
  while (true) {
    // Shortest augmenting path in the residual graph.
    std::fill(via.begin(), via.end(), -1);
    std::deque<std::uint32_t> q{fn.source};
    via[fn.source] = -2;
    while (!q.empty() && via[fn.sink] == -1) {
      const std::uint32_t u = q.front();
      q.pop_front();
      for (std::uint32_t ai : out[u]) {
        const auto& a = arcs[ai];
        if (a.residual > 0 && via[a.to] == -1) {
          via[a.to] = static_cast<std::int32_t>(ai);
          q.push_back(a.to);
        }
      }
    }
    if (via[fn.sink] == -1) break;
    Weight push = kInfWeight;
    for (std::uint32_t v = fn.sink; via[v] != -2; v = arcs[arcs[via[v]].partner].to)
      push = std::min(push, arcs[via[v]].residual);
    if (push == kInfWeight) return std::nullopt;  // unbounded flow, no finite cut
    for (std::uint32_t v = fn.sink; via[v] != -2; v = arcs[arcs[via[v]].partner].to) {
      arcs[via[v]].residual -= push;
      arcs[arcs[via[v]].partner].residual += push;
    }
    flow += push;
  }

  // Residual reachability from the source; saturated split arcs crossing the
  // frontier form the vertex cut.
  std::vector<char> reach(nodes, 0);
  std::deque<std::uint32_t> q{fn.source};
  reach[fn.source] = 1;
  while (!q.empty()) {
    const std::uint32_t u = q.front();
    q.pop_front();
    for (std::uint32_t ai : out[u])
      if (arcs[ai].residual > 0 && !reach[arcs[ai].to]) {
        reach[arcs[ai].to] = 1;
        q.push_back(arcs[ai].to);
      }
  }

  VertexCut cut;
  cut.flow_value = flow;
  std::vector<char> in_cut(fn.node_vertex.size(), 0);
  for (const auto& a : arcs) {
    if (a.flow_arc < 0) continue;
    const auto& fa = fn.arcs[a.flow_arc];
    if (reach[fa.from] && !reach[fa.to]) {
      if (!fa.split) return std::nullopt;  // should not happen: infinite arc cut
      in_cut[fa.from / 2] = 1;
    }
  }
  for (std::uint32_t i = 0; i < fn.node_vertex.size(); ++i) {
    if (in_cut[i])
      cut.cut.push_back(fn.node_vertex[i]);
    else if (reach[2 * i])
      cut.side_a.push_back(fn.node_vertex[i]);
    else
      cut.side_b.push_back(fn.node_vertex[i]);
  }
  return cut;
}

namespace {

struct PieceResult {
  std::vector<std::vector<EdgeId>> cells;
  std::vector<char> oversize;
  std::vector<EdgeId> disconnected;
};

void bisect(const RoadNetwork& net, const PartitionConfig& cfg, std::vector<EdgeId> piece,
            PieceResult& result) {
  if (piece.size() <= cfg.max_size) {
    result.cells.push_back(std::move(piece));
    result.oversize.push_back(0);
    return;
  }

  const SimplifiedGraph simp = simplify(net, piece);
  for (EdgeId e : simp.disconnected) result.disconnected.push_back(e);

  std::vector<EdgeId> remaining;
  remaining.reserve(piece.size() - simp.disconnected.size());
  for (const auto& re : simp.edges)
    for (EdgeId e : re.members) remaining.push_back(e);
  for (const auto& [e, anchor] : simp.attached) remaining.push_back(e);
  std::sort(remaining.begin(), remaining.end());

  auto give_up = [&] {
    if (!remaining.empty()) {
      result.cells.push_back(remaining);
      result.oversize.push_back(remaining.size() > cfg.max_size);
    }
  };
  if (simp.edges.empty()) return give_up();

  // Farthest pair by double-sweep BFS over the reduced graph.
  const std::size_t n = simp.vertices.size();
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (const auto& re : simp.edges) {
    const auto iu = static_cast<std::uint32_t>(local_index(simp.vertices, re.u));
    const auto iv = static_cast<std::uint32_t>(local_index(simp.vertices, re.v));
    adj[iu].push_back(iv);
    adj[iv].push_back(iu);
  }
  auto farthest = [&](std::uint32_t start) {
    std::vector<unsigned> hops(n, static_cast<unsigned>(-1));
    std::deque<std::uint32_t> q{start};
    hops[start] = 0;
    std::uint32_t far = start;
    while (!q.empty()) {
      const std::uint32_t u = q.front();
      q.pop_front();
      if (hops[u] > hops[far]) far = u;
      for (std::uint32_t w : adj[u])
        if (hops[w] == static_cast<unsigned>(-1)) {
          hops[w] = hops[u] + 1;
          q.push_back(w);
        }
    }
    return std::make_pair(far, hops[far]);
  };
  const std::uint32_t a = farthest(0).first;
  const auto [b, ecc] = farthest(a);
  if (ecc == 0) return give_up();
  const auto radius =
      std::max(1u, static_cast<unsigned>(cfg.restricted_radius_fraction * ecc));

  std::vector<char> touches(n, 0);
  for (EdgeId e : remaining) {
    if (net.edge(e).level != kLevelInf) continue;
    for (Vertex v : {net.edge(e).tail, net.edge(e).head}) {
      const std::size_t i = local_index(simp.vertices, v);
      if (i < n && simp.vertices[i] == v) touches[i] = 1;
    }
  }

  FlowNetwork fn = split_vertices(simp);
  assign_capacities(fn, simp.vertices[a], simp.vertices[b], radius, cfg.handicap_bonus, touches);
  const auto cut = min_vertex_cut(fn);
  if (!cut) return give_up();

  // Side lookup over original vertex ids: 0 = side A (and the cut, by the
  // deterministic tie rule), 1 = side B.
  std::unordered_map<Vertex, int> side;
  for (Vertex v : cut->cut) side[v] = 0;
  for (Vertex v : cut->side_a) side[v] = 0;
  for (Vertex v : cut->side_b) side[v] = 1;
  std::unordered_set<Vertex> in_cut(cut->cut.begin(), cut->cut.end());
  auto side_of = [&](Vertex u, Vertex v) {
    // An edge incident to a cut vertex follows its other endpoint.
    if (in_cut.count(u)) return in_cut.count(v) ? 0 : side[v];
    return side[u];
  };

  std::vector<EdgeId> side_edges[2];
  for (const auto& re : simp.edges) {
    const int sd = side_of(re.u, re.v);
    for (EdgeId e : re.members) side_edges[sd].push_back(e);
  }
  for (const auto& [e, anchor] : simp.attached)
    side_edges[in_cut.count(anchor) ? 0 : side[anchor]].push_back(e);

  if (side_edges[0].empty() || side_edges[1].empty()) return give_up();
  std::sort(side_edges[0].begin(), side_edges[0].end());
  std::sort(side_edges[1].begin(), side_edges[1].end());
  bisect(net, cfg, std::move(side_edges[0]), result);
  bisect(net, cfg, std::move(side_edges[1]), result);
}

}  // namespace

void recompute_boundaries(const RoadNetwork& net, Partition& partition) {
  partition.cell_boundary.assign(partition.cell_count, {});
  partition.global_boundary.clear();
  std::vector<CellId> incident;  // distinct cells incident with one vertex
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    incident.clear();
    for (const EdgeId* it = net.out_begin(v); it != net.out_end(v); ++it)
      incident.push_back(partition.edge_cell[*it]);
    for (const EdgeId* it = net.in_begin(v); it != net.in_end(v); ++it)
      incident.push_back(partition.edge_cell[*it]);
    std::sort(incident.begin(), incident.end());
    incident.erase(std::unique(incident.begin(), incident.end()), incident.end());
    if (incident.size() < 2) continue;
    partition.global_boundary.push_back(v);
    for (CellId c : incident) partition.cell_boundary[c].push_back(v);
  }
}

Partition partition_network(const RoadNetwork& net, const PartitionConfig& config) {
  Partition part;
  part.edge_cell.assign(net.edge_count(), kCellNone);
  if (net.edge_count() == 0) return part;

  std::vector<EdgeId> all(net.edge_count());
  for (EdgeId e = 0; e < net.edge_count(); ++e) all[e] = e;
  PieceResult result;
  bisect(net, config, std::move(all), result);

  part.cell_count = static_cast<CellId>(result.cells.size());
  part.oversize = result.oversize;
  for (CellId c = 0; c < result.cells.size(); ++c)
    for (EdgeId e : result.cells[c]) part.edge_cell[e] = c;
  if (!result.disconnected.empty()) {
    part.disconnected_cell = part.cell_count++;
    part.oversize.push_back(0);
    for (EdgeId e : result.disconnected) part.edge_cell[e] = part.disconnected_cell;
  }
  recompute_boundaries(net, part);
  return part;
}

PartitionReport validate_partition(const RoadNetwork& net, const Partition& partition) {
  PartitionReport report;
  if (partition.edge_cell.size() != net.edge_count()) {
    report.violations.push_back("edge cell table size mismatch");
    return report;
  }
  for (EdgeId e = 0; e < net.edge_count(); ++e)
    if (partition.edge_cell[e] >= partition.cell_count) {
      report.violations.push_back("edge " + std::to_string(e) + " has no valid cell");
      return report;
    }

  Partition fresh;
  fresh.edge_cell = partition.edge_cell;
  fresh.cell_count = partition.cell_count;
  recompute_boundaries(net, fresh);
  if (fresh.global_boundary != partition.global_boundary)
    report.violations.push_back("global boundary differs from recomputation");
  if (fresh.cell_boundary != partition.cell_boundary)
    report.violations.push_back("cell boundaries differ from recomputation");

  // Separator property: an edge incident to a non-boundary vertex of a cell
  // belongs to that cell.
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    CellId only = kCellNone;
    bool interior_ok = true;
    for (const EdgeId* it = net.out_begin(v); it != net.out_end(v) && interior_ok; ++it) {
      if (only == kCellNone) only = partition.edge_cell[*it];
      interior_ok = partition.edge_cell[*it] == only;
    }
    for (const EdgeId* it = net.in_begin(v); it != net.in_end(v) && interior_ok; ++it) {
      if (only == kCellNone) only = partition.edge_cell[*it];
      interior_ok = partition.edge_cell[*it] == only;
    }
    const bool stored_boundary = partition.is_boundary(v);
    if (!interior_ok && !stored_boundary)
      report.violations.push_back("vertex " + std::to_string(v) +
                                  " joins several cells but is not a boundary vertex");
  }
  return report;
}

}  // namespace scope_route
