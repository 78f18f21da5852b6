#include "scope_route/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace scope_route {

DiGraph::DiGraph(Vertex vertex_count, std::vector<Arc> arcs)
    : vertex_count_(vertex_count), arcs_(std::move(arcs)) {
  out_offsets_.assign(vertex_count_ + 1, 0);
  for (const auto& a : arcs_) {
    if (a.tail >= vertex_count_ || a.head >= vertex_count_)
      throw std::invalid_argument("DiGraph: arc endpoint out of range");
    if (!(a.weight >= 0)) throw std::invalid_argument("DiGraph: negative arc weight");
    ++out_offsets_[a.tail + 1];
  }
  for (Vertex v = 0; v < vertex_count_; ++v) out_offsets_[v + 1] += out_offsets_[v];
  out_arcs_.resize(arcs_.size());
  std::vector<std::size_t> cursor(out_offsets_.begin(), out_offsets_.end() - 1);
  for (EdgeId i = 0; i < arc_count(); ++i) out_arcs_[cursor[arcs_[i].tail]++] = i;
}

DiGraph DiGraph::reversed() const {
  std::vector<Arc> rev(arcs_.size());
  // Arc i of the reverse is the reverse of arc i, so ids line up.
  for (EdgeId i = 0; i < arc_count(); ++i)
    rev[i] = {arcs_[i].head, arcs_[i].tail, arcs_[i].weight};
  return DiGraph(vertex_count_, std::move(rev));
}

DiGraph DiGraph::from_network(const RoadNetwork& net) {
  std::vector<Arc> arcs;
  arcs.reserve(net.edge_count());
  for (const auto& e : net.edges()) arcs.push_back({e.tail, e.head, e.weight});
  return DiGraph(net.vertex_count(), std::move(arcs));
}

namespace {

struct QueueItem {
  Weight key;
  Vertex v;
  bool operator>(const QueueItem& o) const { return key > o.key; }
};
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>>;

}  // namespace

DijkstraLabels dijkstra(const DiGraph& g, Vertex source, std::optional<Vertex> target) {
  if (source >= g.vertex_count()) throw std::out_of_range("dijkstra: source out of range");
  DijkstraLabels labels;
  labels.dist.assign(g.vertex_count(), kInfWeight);
  labels.pred.assign(g.vertex_count(), DijkstraLabels::kNoArc);
  std::vector<char> scanned(g.vertex_count(), 0);
  labels.dist[source] = 0;
  MinQueue queue;
  queue.push({0, source});
  while (!queue.empty()) {
    labels.stats.max_queue_size = std::max(labels.stats.max_queue_size, queue.size());
    auto [du, u] = queue.top();
    queue.pop();
    if (scanned[u] || du != labels.dist[u]) continue;
    scanned[u] = 1;
    ++labels.stats.scanned_vertices;
    if (target && u == *target) break;
    for (const EdgeId* it = g.out_begin(u); it != g.out_end(u); ++it) {
      const auto& a = g.arc(*it);
      const Weight nd = du + a.weight;
      if (nd < labels.dist[a.head]) {
        labels.dist[a.head] = nd;
        labels.pred[a.head] = *it;
        queue.push({nd, a.head});
      }
    }
  }
  return labels;
}

namespace {

// One half of a bidirectional classical search with optional reach pruning
// and goal direction.
class ClassicalHalf {
 public:
  ClassicalHalf(const DiGraph& g, Vertex source, Vertex far_end, const std::vector<Weight>* reach,
                const std::vector<Weight>* own_lb, const std::vector<Weight>* other_lb,
                bool subtract_first_arc)
      : g_(g),
        source_(source),
        far_end_(far_end),
        reach_(reach),
        own_lb_(own_lb),
        other_lb_(other_lb),
        subtract_first_(subtract_first_arc) {
    dist.assign(g.vertex_count(), kInfWeight);
    pred.assign(g.vertex_count(), DijkstraLabels::kNoArc);
    offset.assign(g.vertex_count(), 0);
    scanned_.assign(g.vertex_count(), 0);
    dist[source] = 0;
    queue_.push({potential(source), source});
  }

  // Average potential: half the difference of the two lower bounds. Feasible
  // whenever both bounds are feasible in their own direction.
  Weight potential(Vertex v) const {
    if (!own_lb_) return 0;
    return 0.5 * ((*own_lb_)[v] - (*other_lb_)[v]);
  }

  bool exhausted() {
    skip_stale();
    return queue_.empty();
  }

  Weight top_key() {
    skip_stale();
    return queue_.empty() ? kInfWeight : queue_.top().key;
  }

  template <typename OnUpdate, typename OnPrune>
  void scan_one(OnUpdate&& on_update, OnPrune&& on_prune, const std::vector<char>& other_scanned) {
    skip_stale();
    if (queue_.empty()) return;
    stats.max_queue_size = std::max(stats.max_queue_size, queue_.size());
    const Vertex u = queue_.top().v;
    queue_.pop();
    scanned_[u] = 1;
    ++stats.scanned_vertices;
    on_update(u, dist[u]);
    const Weight du = dist[u];
    for (const EdgeId* it = g_.out_begin(u); it != g_.out_end(u); ++it) {
      const auto& a = g_.arc(*it);
      const Vertex v = a.head;
      if (reach_ && v != source_ && v != far_end_ && other_scanned[v]) {
        // v's distance is too large for its reach and the opposite half has
        // settled it, so its exact remaining distance is known: report the
        // concatenation through v as a candidate instead of storing the
        // label. Pruning only at opposite-settled vertices keeps the classic
        // termination argument intact.
        const Weight seen = du - offset[u] + a.weight;
        if ((*reach_)[v] < seen - 1e-6 * (1.0 + seen)) {
          on_prune(v, du + a.weight, *it);
          continue;
        }
      }
      const Weight nd = du + a.weight;
      if (nd < dist[v]) {
        if (own_lb_) {
          const Weight reduced = a.weight + potential(v) - potential(u);
          if (reduced < -1e-6 * (1.0 + a.weight + std::abs(potential(u))))
            throw std::invalid_argument("reach_astar_bidirectional: infeasible lower bounds");
        }
        dist[v] = nd;
        pred[v] = *it;
        offset[v] = (subtract_first_ && u == source_) ? a.weight : offset[u];
        queue_.push({nd + potential(v), v});
        on_update(v, nd);
      }
    }
  }

  const std::vector<char>& scanned_flags() const { return scanned_; }

  std::vector<Weight> dist;
  std::vector<EdgeId> pred;
  std::vector<Weight> offset;
  SearchStats stats;

 private:
  void skip_stale() {
    while (!queue_.empty()) {
      auto [key, v] = queue_.top();
      if (scanned_[v])
        queue_.pop();
      else
        break;
    }
  }

  const DiGraph& g_;
  Vertex source_, far_end_;
  const std::vector<Weight>* reach_;
  const std::vector<Weight>* own_lb_;
  const std::vector<Weight>* other_lb_;
  bool subtract_first_;
  std::vector<char> scanned_;
  MinQueue queue_;
};

}  // namespace

std::optional<PathResult> reach_astar_bidirectional(const DiGraph& g, const DiGraph& grev,
                                                    Vertex s, Vertex t,
                                                    const ReachAStarOptions& options) {
  if (s >= g.vertex_count() || t >= g.vertex_count())
    throw std::out_of_range("reach_astar_bidirectional: vertex out of range");
  if (options.reach && options.reach->size() != g.vertex_count())
    throw std::invalid_argument("reach_astar_bidirectional: reach table size mismatch");
  if (s == t) {
    PathResult r;
    r.vertices = {s};
    return r;
  }

  ClassicalHalf fwd(g, s, t, options.reach, options.dist_to_target, options.dist_to_source,
                    options.subtract_first_arc);
  ClassicalHalf rev(grev, t, s, options.reach, options.dist_to_source, options.dist_to_target,
                    options.subtract_first_arc);

  constexpr EdgeId kNoBridge = DijkstraLabels::kNoArc;
  Weight best = kInfWeight;
  Vertex meet = 0;
  EdgeId bridge = kNoBridge;    // arc skipped by a prune, if the optimum used one
  bool bridge_forward = true;   // which half pruned it
  auto consider = [&](const ClassicalHalf& other, Vertex v, Weight d, EdgeId br, bool fwd_side) {
    const Weight od = other.dist[v];
    if (od != kInfWeight && d + od < best) {
      best = d + od;
      meet = v;
      bridge = br;
      bridge_forward = fwd_side;
    }
  };
  auto fwd_update = [&](Vertex v, Weight d) { consider(rev, v, d, kNoBridge, true); };
  auto fwd_prune = [&](Vertex v, Weight d, EdgeId a) { consider(rev, v, d, a, true); };
  auto rev_update = [&](Vertex v, Weight d) { consider(fwd, v, d, kNoBridge, false); };
  auto rev_prune = [&](Vertex v, Weight d, EdgeId a) { consider(fwd, v, d, a, false); };

  bool forward_turn = true;
  while (!fwd.exhausted() || !rev.exhausted()) {
    // Keys carry the (antisymmetric) potentials, so their sum measures the
    // true total weight; the small slack only delays the stop.
    if (fwd.top_key() + rev.top_key() >= best - 1e-6) break;
    if (forward_turn && !fwd.exhausted())
      fwd.scan_one(fwd_update, fwd_prune, rev.scanned_flags());
    else if (!rev.exhausted())
      rev.scan_one(rev_update, rev_prune, fwd.scanned_flags());
    forward_turn = !forward_turn;
  }

  if (best == kInfWeight) return std::nullopt;

  PathResult r;
  r.weight = best;
  r.stats.scanned_vertices = fwd.stats.scanned_vertices + rev.stats.scanned_vertices;
  r.stats.max_queue_size = std::max(fwd.stats.max_queue_size, rev.stats.max_queue_size);

  // Split the optimum into a forward-tree prefix ending at fwd_end, an
  // optional bridge arc, and a reverse-tree suffix starting at rev_start.
  Vertex fwd_end = meet, rev_start = meet;
  if (bridge != kNoBridge) {
    if (bridge_forward)
      fwd_end = g.arc(bridge).tail;  // bridge runs fwd_end -> meet
    else
      rev_start = grev.arc(bridge).tail;  // bridge runs meet -> rev_start
  }

  std::vector<EdgeId> head_arcs;
  for (Vertex v = fwd_end; v != s;) {
    const EdgeId a = fwd.pred[v];
    head_arcs.push_back(a);
    v = g.arc(a).tail;
  }
  std::reverse(head_arcs.begin(), head_arcs.end());
  if (bridge != kNoBridge && bridge_forward) head_arcs.push_back(bridge);
  r.vertices.push_back(s);
  for (EdgeId a : head_arcs) {
    r.arcs.push_back(a);
    r.vertices.push_back(g.arc(a).head);
  }
  if (bridge != kNoBridge && !bridge_forward) {
    // In the original orientation the bridge runs meet -> rev_start.
    r.arcs.push_back(bridge);
    r.vertices.push_back(rev_start);
  }
  // Reverse-graph arcs share ids with their forward originals.
  for (Vertex v = rev_start; v != t;) {
    const EdgeId a = rev.pred[v];
    r.arcs.push_back(a);
    v = grev.arc(a).tail;
    r.vertices.push_back(v);
  }
  return r;
}

std::optional<PathResult> bidirectional_dijkstra(const DiGraph& g, const DiGraph& grev, Vertex s,
                                                 Vertex t) {
  return reach_astar_bidirectional(g, grev, s, t, {});
}

std::vector<Weight> compute_classical_reach(const DiGraph& g) {
  std::vector<Weight> reach(g.vertex_count(), 0);
  std::vector<std::size_t> order(g.vertex_count());
  std::vector<Weight> height(g.vertex_count());
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    const DijkstraLabels labels = dijkstra(g, s);
    // Height of v: the largest distance of a vertex reachable from v along
    // tight (shortest-path DAG) arcs. Processing by decreasing distance
    // makes heads final before tails.
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return labels.dist[a] > labels.dist[b]; });
    for (Vertex v = 0; v < g.vertex_count(); ++v) height[v] = labels.dist[v];
    for (std::size_t v : order) {
      if (labels.dist[v] == kInfWeight) continue;
      for (const EdgeId* it = g.out_begin(static_cast<Vertex>(v)); it != g.out_end(static_cast<Vertex>(v));
           ++it) {
        const auto& a = g.arc(*it);
        if (labels.dist[a.head] != kInfWeight &&
            labels.dist[v] + a.weight == labels.dist[a.head])
          height[v] = std::max(height[v], height[a.head]);
      }
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (labels.dist[v] == kInfWeight) continue;
      reach[v] = std::max(reach[v], std::min(labels.dist[v], height[v] - labels.dist[v]));
    }
  }
  return reach;
}

}  // namespace scope_route
