#include "scope_route/validate.hpp"

#include <algorithm>
#include <deque>
#include <queue>

namespace scope_route {

namespace {

// Iterative Tarjan SCC over the subgraph induced by masked edges.
// Returns component ids (or -1 for vertices untouched by masked edges).
std::vector<int> scc_components(const RoadNetwork& net, const std::vector<char>* mask,
                                int& comp_count) {
  const Vertex n = net.vertex_count();
  std::vector<int> comp(n, -1), low(n, 0), num(n, 0);
  std::vector<char> on_stack(n, 0), touched(n, 0);
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (mask && !(*mask)[e]) continue;
    touched[net.edge(e).tail] = 1;
    touched[net.edge(e).head] = 1;
  }
  int counter = 0;
  comp_count = 0;
  std::vector<Vertex> stack;
  struct Frame {
    Vertex v;
    const EdgeId* it;
  };
  std::vector<Frame> frames;
  for (Vertex root = 0; root < n; ++root) {
    if (!touched[root] || num[root]) continue;
    frames.push_back({root, net.out_begin(root)});
    num[root] = low[root] = ++counter;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.it != net.out_end(f.v)) {
        EdgeId e = *f.it++;
        if (mask && !(*mask)[e]) continue;
        Vertex w = net.edge(e).head;
        if (!num[w]) {
          num[w] = low[w] = ++counter;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, net.out_begin(w)});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          while (true) {
            Vertex w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = comp_count;
            if (w == f.v) break;
          }
          ++comp_count;
        }
        Vertex child = f.v;
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[child]);
      }
    }
  }
  return comp;
}

// Finds a witness edge pair for a non-routing-connected masked subgraph:
// head(from) cannot reach tail(to).
std::pair<EdgeId, EdgeId> find_witness(const RoadNetwork& net, const std::vector<char>* mask) {
  std::vector<EdgeId> active;
  for (EdgeId e = 0; e < net.edge_count(); ++e)
    if (!mask || (*mask)[e]) active.push_back(e);
  for (EdgeId from : active) {
    std::vector<char> seen(net.vertex_count(), 0);
    std::deque<Vertex> q{net.edge(from).head};
    seen[net.edge(from).head] = 1;
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop_front();
      for (const EdgeId* it = net.out_begin(u); it != net.out_end(u); ++it) {
        if (mask && !(*mask)[*it]) continue;
        Vertex w = net.edge(*it).head;
        if (!seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
      }
    }
    for (EdgeId to : active)
      if (!seen[net.edge(to).tail]) return {from, to};
  }
  return {0, 0};  // unreachable for non-connected inputs
}

}  // namespace

bool is_routing_connected(const RoadNetwork& net, const std::vector<char>* edge_mask) {
  int comp_count = 0;
  std::vector<int> comp = scc_components(net, edge_mask, comp_count);
  return comp_count <= 1;
}

std::vector<ProperScopeViolation> validate_proper_scope(const RoadNetwork& net,
                                                        const ScopeConfig& config) {
  std::vector<ProperScopeViolation> out;
  for (Level lvl : config.levels()) {
    std::vector<char> mask(net.edge_count(), 0);
    for (EdgeId e = 0; e < net.edge_count(); ++e)
      if (net.edge(e).level >= lvl) mask[e] = 1;
    if (!is_routing_connected(net, &mask)) {
      auto [from, to] = find_witness(net, &mask);
      out.push_back({lvl, from, to});
    }
  }
  return out;
}

std::vector<WellDistributedViolation> check_well_distributed(const RoadNetwork& net,
                                                             const ScopeConfig& config,
                                                             const SizeLimits& limits) {
  std::vector<WellDistributedViolation> out;
  const Vertex n = net.vertex_count();
  for (Level lvl : config.levels()) {
    auto lim_it = limits.find(lvl);
    if (lim_it == limits.end()) continue;
    const std::size_t limit = lim_it->second;
    // Vertices incident with some edge of level >= lvl are removed.
    std::vector<char> removed(n, 0);
    for (const auto& e : net.edges())
      if (e.level >= lvl) removed[e.tail] = removed[e.head] = 1;
    std::vector<char> seen(n, 0);
    for (Vertex root = 0; root < n; ++root) {
      if (removed[root] || seen[root]) continue;
      std::vector<Vertex> component{root};
      seen[root] = 1;
      std::deque<Vertex> q{root};
      while (!q.empty()) {
        Vertex u = q.front();
        q.pop_front();
        auto visit = [&](Vertex w) {
          if (!removed[w] && !seen[w]) {
            seen[w] = 1;
            component.push_back(w);
            q.push_back(w);
          }
        };
        for (const EdgeId* it = net.out_begin(u); it != net.out_end(u); ++it)
          visit(net.edge(*it).head);
        for (const EdgeId* it = net.in_begin(u); it != net.in_end(u); ++it)
          visit(net.edge(*it).tail);
      }
      if (component.size() > limit) {
        std::sort(component.begin(), component.end());
        out.push_back({lvl, std::move(component)});
      }
    }
  }
  return out;
}

ValidationReport validate_network(const RoadNetwork& net, const ScopeConfig& config,
                                  const SizeLimits& limits) {
  ValidationReport r;
  r.routing_connected = is_routing_connected(net);
  r.proper_scope_violations = validate_proper_scope(net, config);
  r.well_distributed_violations = check_well_distributed(net, config, limits);
  return r;
}

SizeLimits default_size_limits(const ScopeConfig& config, std::size_t expected_cell_size) {
  SizeLimits limits;
  std::size_t lim = expected_cell_size;
  limits[kLevelInf] = lim;
  const auto& bounded = config.bounded();
  for (auto it = bounded.rbegin(); it != bounded.rend(); ++it) {
    lim = std::max<std::size_t>(1, lim / 4);
    limits[it->level] = lim;
  }
  return limits;
}

std::optional<RoadNetwork> upgrade_repair(const RoadNetwork& net,
                                          const WellDistributedViolation& violation) {
  const Vertex n = net.vertex_count();
  const Level lvl = violation.level;
  std::vector<char> in_comp(n, 0);
  for (Vertex v : violation.component) in_comp[v] = 1;
  // Attachment points: vertices of V(G^[lvl]) with an edge to/from the
  // component. By construction these are exactly the non-component
  // neighbors of component vertices that touch a >= lvl edge.
  std::vector<char> high(n, 0);
  for (const auto& e : net.edges())
    if (e.level >= lvl) high[e.tail] = high[e.head] = 1;

  // One Dijkstra per attachment vertex, moving only through component
  // vertices, looking for the cheapest walk that leaves at a different
  // attachment. Separate runs per start keep opposite frontiers from
  // blocking each other at shared component vertices.
  std::vector<Vertex> starts;
  {
    std::vector<char> is_start(n, 0);
    for (const auto& ed : net.edges())
      if (high[ed.tail] && !in_comp[ed.tail] && in_comp[ed.head] && !is_start[ed.tail]) {
        is_start[ed.tail] = 1;
        starts.push_back(ed.tail);
      }
  }
  if (starts.empty()) return std::nullopt;

  struct Item {
    Weight d;
    Vertex v;
    bool operator>(const Item& o) const { return d > o.d; }
  };

  Weight best = kInfWeight;
  EdgeId best_exit = static_cast<EdgeId>(-1);
  std::vector<EdgeId> best_pred;
  std::vector<Weight> dist(n);
  std::vector<EdgeId> pred(n);
  std::vector<char> done(n);
  for (Vertex start : starts) {
    std::fill(dist.begin(), dist.end(), kInfWeight);
    std::fill(pred.begin(), pred.end(), static_cast<EdgeId>(-1));
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    for (const EdgeId* it = net.out_begin(start); it != net.out_end(start); ++it) {
      const Edge& ed = net.edge(*it);
      if (in_comp[ed.head] && ed.weight < dist[ed.head]) {
        dist[ed.head] = ed.weight;
        pred[ed.head] = *it;
        pq.push({ed.weight, ed.head});
      }
    }
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (done[u] || d != dist[u]) continue;
      done[u] = 1;
      for (const EdgeId* it = net.out_begin(u); it != net.out_end(u); ++it) {
        const Edge& ed = net.edge(*it);
        if (in_comp[ed.head]) {
          if (d + ed.weight < dist[ed.head]) {
            dist[ed.head] = d + ed.weight;
            pred[ed.head] = *it;
            pq.push({dist[ed.head], ed.head});
          }
        } else if (high[ed.head] && ed.head != start && d + ed.weight < best) {
          best = d + ed.weight;
          best_exit = *it;
          best_pred = pred;
        }
      }
    }
  }
  if (best == kInfWeight) return std::nullopt;

  std::vector<Edge> edges = net.edges();
  edges[best_exit].level = std::max(edges[best_exit].level, lvl);
  Vertex v = net.edge(best_exit).tail;
  while (best_pred[v] != static_cast<EdgeId>(-1)) {
    EdgeId e = best_pred[v];
    edges[e].level = std::max(edges[e].level, lvl);
    v = net.edge(e).tail;
    if (!in_comp[v]) break;
  }
  RoadNetwork out(net.vertex_count(), std::move(edges));
  if (net.has_coordinates()) out.set_coordinates(net.coordinates());
  return out;
}

std::pair<RoadNetwork, std::vector<WellDistributedViolation>> repair_well_distributed(
    RoadNetwork net, const ScopeConfig& config, const SizeLimits& limits) {
  std::vector<WellDistributedViolation> unrepaired;
  for (int guard = 0; guard < 10000; ++guard) {
    auto violations = check_well_distributed(net, config, limits);
    std::erase_if(violations, [&](const WellDistributedViolation& v) {
      return std::any_of(unrepaired.begin(), unrepaired.end(),
                         [&](const WellDistributedViolation& u) {
                           return u.level == v.level && u.component == v.component;
                         });
    });
    if (violations.empty()) break;
    auto repaired = upgrade_repair(net, violations.front());
    if (repaired)
      net = std::move(*repaired);
    else
      unrepaired.push_back(std::move(violations.front()));
  }
  return {std::move(net), std::move(unrepaired)};
}

}  // namespace scope_route
