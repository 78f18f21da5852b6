#include "scope_route/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace scope_route {

namespace {

// Gamma of edge f at bounded-level index i, identical to the search's
// adjustment rule.
Weight gamma_of(const ScopeConfig& config, const Edge& f, Level handicap, std::size_t i) {
  const auto& entry = config.bounded()[i];
  Weight g = (f.level > entry.level) ? f.weight : 0;
  if (handicap > entry.level && entry.level >= f.level) g += entry.kappa;
  return g;
}

void check_oracle_guard(const RoadNetwork& net) {
  if (net.vertex_count() > 12 && net.edge_count() > 30)
    throw std::invalid_argument("oracle: network too large for exhaustive enumeration");
  for (const auto& e : net.edges())
    if (!(e.weight > 0))
      throw std::invalid_argument("oracle: weights must be strictly positive");
}

}  // namespace

bool OracleLabels::saturated(const ScopeConfig& config, Vertex v) const {
  const auto& bounded = config.bounded();
  for (std::size_t i = 0; i < bounded.size(); ++i)
    if (sigma_at(v, i) <= bounded[i].nu) return false;
  return true;
}

OracleLabels oracle_forward(const RoadNetwork& net, const ScopeConfig& config,
                            const HandicapTable& handicaps, Vertex source,
                            std::size_t hop_bound) {
  check_oracle_guard(net);
  if (source >= net.vertex_count()) throw std::out_of_range("oracle_forward: bad source");

  const std::size_t width = config.bounded_count();
  OracleLabels out;
  out.source = source;
  out.sigma_width = width;
  out.dist.assign(net.vertex_count(), kInfWeight);
  out.sigma_min.assign(static_cast<std::size_t>(net.vertex_count()) * width, kInfWeight);
  out.best_path.assign(net.vertex_count(), -1);

  // Enumerate every simple path from the source by DFS. Minimum-weight
  // admissible walks use each vertex at most once (weights are positive),
  // so simple paths suffice.
  const std::size_t depth_cap = std::min<std::size_t>(hop_bound, net.vertex_count());
  // Per-path own sigma: sum of gammas along the path itself.
  std::vector<std::vector<Weight>> own_sigma;
  std::vector<char> on_path(net.vertex_count(), 0);

  out.paths.push_back({-1, SearchLabels::kNoEdge, source, 0, true, true});
  own_sigma.emplace_back(width, 0.0);

  struct Frame {
    Vertex v;
    const EdgeId* it;
    std::int32_t path;  // index of the path ending at v
  };
  std::vector<Frame> stack;
  on_path[source] = 1;
  stack.push_back({source, net.out_begin(source), 0});
  while (!stack.empty()) {
    Frame& fr = stack.back();
    if (fr.it == net.out_end(fr.v) || stack.size() > depth_cap) {
      on_path[fr.v] = 0;
      stack.pop_back();
      continue;
    }
    const EdgeId eid = *fr.it++;
    const Edge& e = net.edge(eid);
    if (on_path[e.head]) continue;
    const auto& parent = out.paths[fr.path];
    out.paths.push_back({fr.path, eid, e.head, parent.weight + e.weight, false, false});
    std::vector<Weight> sig(width);
    for (std::size_t i = 0; i < width; ++i)
      sig[i] = own_sigma[fr.path][i] + gamma_of(config, e, handicaps[eid], i);
    own_sigma.push_back(std::move(sig));
    on_path[e.head] = 1;
    stack.push_back({e.head, net.out_begin(e.head),
                     static_cast<std::int32_t>(out.paths.size() - 1)});
  }

  // Process paths in increasing weight order. A path Q.f is accepted when Q
  // is accepted, Q is a minimum-weight path to its end, and the merged sigma
  // at end(Q) admits f. Merged sigma at v is the component-wise minimum of
  // the own sigmas of all accepted minimum-weight paths to v.
  std::vector<std::size_t> order(out.paths.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return out.paths[a].weight < out.paths[b].weight;
                   });

  for (std::size_t idx : order) {
    auto& rec = out.paths[idx];
    if (rec.parent < 0) {
      // Root: zero-length path at the source.
      out.dist[source] = 0;
      Weight* sv = out.sigma_min.data() + static_cast<std::size_t>(source) * width;
      for (std::size_t i = 0; i < width; ++i) sv[i] = 0;
      out.best_path[source] = static_cast<std::int32_t>(idx);
      continue;
    }
    const auto& par = out.paths[rec.parent];
    if (!par.tight) continue;
    const Edge& f = net.edge(rec.edge);
    if (f.level != kLevelInf &&
        !(out.sigma_at(par.end, config.bounded_index(f.level)) <= config.nu(f.level)))
      continue;
    rec.accepted = true;
    if (rec.weight < out.dist[rec.end]) {
      out.dist[rec.end] = rec.weight;
      out.best_path[rec.end] = static_cast<std::int32_t>(idx);
    }
    if (rec.weight == out.dist[rec.end]) {
      rec.tight = true;
      Weight* sv = out.sigma_min.data() + static_cast<std::size_t>(rec.end) * width;
      for (std::size_t i = 0; i < width; ++i) sv[i] = std::min(sv[i], own_sigma[idx][i]);
    }
  }
  return out;
}

namespace {

Walk walk_of_path(const OracleLabels& labels, const RoadNetwork& net, std::int32_t idx) {
  Walk w;
  std::int32_t cur = idx;
  while (cur >= 0 && labels.paths[cur].parent >= 0) {
    w.edges.push_back(labels.paths[cur].edge);
    cur = labels.paths[cur].parent;
  }
  std::reverse(w.edges.begin(), w.edges.end());
  w.vertices.push_back(labels.source);
  for (EdgeId e : w.edges) w.vertices.push_back(net.edge(e).head);
  w.weight = labels.paths[idx].weight;
  return w;
}

}  // namespace

std::optional<std::pair<Weight, Walk>> oracle_admissible_optimum(const RoadNetwork& net,
                                                                 const ScopeConfig& config,
                                                                 Vertex s, Vertex t,
                                                                 std::size_t hop_bound) {
  const HandicapTable fwd_h = compute_turn_handicaps(net);
  const RoadNetwork rnet = reverse_network(net);
  const HandicapTable rev_h = compute_turn_handicaps(rnet);

  const OracleLabels fwd = oracle_forward(net, config, fwd_h, s, hop_bound);
  const OracleLabels rev = oracle_forward(rnet, config, rev_h, t, hop_bound);

  Weight best = kInfWeight;
  Vertex meet = 0;
  for (Vertex v = 0; v < net.vertex_count(); ++v) {
    if (fwd.dist[v] == kInfWeight || rev.dist[v] == kInfWeight) continue;
    const Weight total = fwd.dist[v] + rev.dist[v];
    if (total < best) {
      best = total;
      meet = v;
    }
  }
  if (best == kInfWeight) return std::nullopt;

  Walk walk = walk_of_path(fwd, net, fwd.best_path[meet]);
  const Walk tail = walk_of_path(rev, rnet, rev.best_path[meet]);
  // Reverse-network edges reuse forward ids; append the tail reversed.
  for (std::size_t i = tail.edges.size(); i-- > 0;) {
    walk.edges.push_back(tail.edges[i]);
    walk.vertices.push_back(tail.vertices[i]);
  }
  walk.weight = best;
  return std::make_pair(best, std::move(walk));
}

}  // namespace scope_route
