#include "scope_route/scope_search.hpp"

#include <algorithm>
#include <cassert>
#include <queue>

namespace scope_route {

namespace {

struct QueueItem {
  Weight d;
  Vertex v;
  bool operator>(const QueueItem& o) const { return d > o.d; }
};

using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<QueueItem>>;

// Precomputed per-edge data for the sigma adjustment: for each bounded
// level index i, gamma_i = w(f)[S(f) > l_i] + kappa_i[h(f) > l_i >= S(f)].
struct GammaContext {
  const ScopeConfig* config;
  std::vector<Level> bounded_levels;
  std::vector<Weight> kappas;

  explicit GammaContext(const ScopeConfig& cfg) : config(&cfg) {
    for (const auto& e : cfg.bounded()) {
      bounded_levels.push_back(e.level);
      kappas.push_back(e.kappa);
    }
  }

  void gamma(const Edge& f, Level handicap, Weight* out) const {
    for (std::size_t i = 0; i < bounded_levels.size(); ++i) {
      const Level li = bounded_levels[i];
      Weight g = (f.level > li) ? f.weight : 0;
      if (handicap > li && li >= f.level) g += kappas[i];
      out[i] = g;
    }
  }
};

}  // namespace

bool is_admissible_from(const SearchLabels& labels, const ScopeConfig& config, Vertex u,
                        const Edge& edge) {
  if (edge.level == kLevelInf) return true;
  return labels.sigma_at(u, config.bounded_index(edge.level)) <= config.nu(edge.level);
}

bool is_saturated(const SearchLabels& labels, const ScopeConfig& config, Vertex u) {
  const auto& bounded = config.bounded();
  for (std::size_t i = 0; i < bounded.size(); ++i)
    if (labels.sigma_at(u, i) <= bounded[i].nu) return false;
  return true;
}

SearchLabels s_dijkstra(const RoadNetwork& net, const ScopeConfig& config,
                        const HandicapTable& handicaps, Vertex source,
                        const SearchOptions& options) {
  if (source >= net.vertex_count()) throw std::out_of_range("s_dijkstra: source out of range");

  const std::size_t width = config.bounded_count();
  SearchLabels labels;
  labels.source = source;
  labels.sigma_width = width;
  labels.dist.assign(net.vertex_count(), kInfWeight);
  labels.pred.assign(net.vertex_count(), SearchLabels::kNoEdge);
  labels.sigma.assign(static_cast<std::size_t>(net.vertex_count()) * width, kInfWeight);
  labels.scanned.assign(net.vertex_count(), 0);

  GammaContext gc(config);
  std::vector<Weight> gamma(width);

  labels.dist[source] = 0;
  std::fill_n(labels.sigma.begin() + source * width, width, 0.0);
  MinQueue queue;
  queue.push({0, source});

  while (!queue.empty()) {
    labels.stats.max_queue_size = std::max(labels.stats.max_queue_size, queue.size());
    auto [du, u] = queue.top();
    queue.pop();
    if (labels.scanned[u] || du != labels.dist[u]) continue;
    labels.scanned[u] = 1;
    ++labels.stats.scanned_vertices;
    if (options.stop_at_saturated && is_saturated(labels, config, u)) continue;

    for (const EdgeId* it = net.out_begin(u); it != net.out_end(u); ++it) {
      const EdgeId eid = *it;
      if (options.edge_mask && !(*options.edge_mask)[eid]) continue;
      const Edge& f = net.edge(eid);
      const Weight nd = du + f.weight;
      // S-reach check.
      if (f.level != kLevelInf && options.sreach && !((*options.sreach)[f.head] >= nd)) continue;
      // s-admissibility check.
      if (!is_admissible_from(labels, config, u, f)) continue;

      Vertex v = f.head;
      if (nd < labels.dist[v]) {
        labels.dist[v] = nd;
        labels.pred[v] = eid;
        gc.gamma(f, handicaps[eid], gamma.data());
        Weight* sv = labels.sigma.data() + static_cast<std::size_t>(v) * width;
        const Weight* su = labels.sigma.data() + static_cast<std::size_t>(u) * width;
        for (std::size_t i = 0; i < width; ++i) sv[i] = su[i] + gamma[i];
        queue.push({nd, v});
      } else if (nd == labels.dist[v]) {
        // Tie: pi is kept, sigma is merged component-wise over all
        // minimum-weight walks.
        gc.gamma(f, handicaps[eid], gamma.data());
        Weight* sv = labels.sigma.data() + static_cast<std::size_t>(v) * width;
        const Weight* su = labels.sigma.data() + static_cast<std::size_t>(u) * width;
        for (std::size_t i = 0; i < width; ++i) sv[i] = std::min(sv[i], su[i] + gamma[i]);
      }
    }
  }
  return labels;
}

std::optional<Walk> construct_walk(const SearchLabels& labels, const RoadNetwork& net,
                                   Vertex target) {
  if (labels.dist[target] == kInfWeight) return std::nullopt;
  Walk walk;
  walk.weight = labels.dist[target];
  Vertex v = target;
  std::size_t guard = 0;
  while (v != labels.source) {
    EdgeId e = labels.pred[v];
    if (e == SearchLabels::kNoEdge || ++guard > net.edge_count() + 1)
      throw std::logic_error("construct_walk: corrupt predecessor chain");
    walk.edges.push_back(e);
    v = net.edge(e).tail;
  }
  std::reverse(walk.edges.begin(), walk.edges.end());
  walk.vertices.push_back(labels.source);
  for (EdgeId e : walk.edges) walk.vertices.push_back(net.edge(e).head);
  return walk;
}

ScopeNetwork ScopeNetwork::build(const RoadNetwork& net, const ScopeConfig& config) {
  ScopeNetwork sn;
  sn.net = &net;
  sn.config = &config;
  sn.handicaps = compute_turn_handicaps(net);
  sn.reversed = reverse_network(net);
  sn.rev_handicaps = compute_turn_handicaps(sn.reversed);
  return sn;
}

namespace {

// One direction of the bidirectional search, advanced one scan at a time.
class HalfSearch {
 public:
  HalfSearch(const RoadNetwork& net, const ScopeConfig& config, const HandicapTable& handicaps,
             Vertex source, const std::vector<Weight>* sreach,
             const std::vector<Weight>* anti_reach, bool stop_at_saturated)
      : net_(net),
        config_(config),
        handicaps_(handicaps),
        sreach_(sreach),
        anti_reach_(anti_reach),
        stop_at_saturated_(stop_at_saturated),
        gc_(config),
        gamma_(config.bounded_count()) {
    const std::size_t width = config.bounded_count();
    labels_.source = source;
    labels_.sigma_width = width;
    labels_.dist.assign(net.vertex_count(), kInfWeight);
    labels_.pred.assign(net.vertex_count(), SearchLabels::kNoEdge);
    labels_.sigma.assign(static_cast<std::size_t>(net.vertex_count()) * width, kInfWeight);
    labels_.scanned.assign(net.vertex_count(), 0);
    labels_.dist[source] = 0;
    std::fill_n(labels_.sigma.begin() + source * width, width, 0.0);
    queue_.push({0, source});
    label_heap_.push({0, source});
  }

  // Smallest current distance among vertices this half has labeled and the
  // other half has not yet settled. Part of the termination bound: a future
  // connection completed by the other half at such a vertex costs at least
  // this much plus the other half's smallest key.
  Weight min_labeled_unsettled(const std::vector<char>& other_scanned) {
    while (!label_heap_.empty()) {
      auto [d, v] = label_heap_.top();
      if (other_scanned[v] || d != labels_.dist[v])
        label_heap_.pop();  // permanently settled over there, or stale
      else
        return d;
    }
    return kInfWeight;
  }

  bool exhausted() {
    skip_stale();
    return queue_.empty();
  }

  Weight top_key() {
    skip_stale();
    return queue_.empty() ? kInfWeight : queue_.top().d;
  }

  // Scans one vertex; reports every distance improvement (and the scan
  // itself) through `on_update(v, d)` for meeting-point bookkeeping, and
  // every anti-reach-pruned relaxation through `on_prune(u, e, d)`.
  // `other_top` is the smallest key of the opposite queue, consulted by the
  // anti-reach prune rule.
  template <typename OnUpdate, typename OnPrune>
  void scan_one(OnUpdate&& on_update, OnPrune&& on_prune, Weight other_top = kInfWeight) {
    skip_stale();
    if (queue_.empty()) return;
    labels_.stats.max_queue_size = std::max(labels_.stats.max_queue_size, queue_.size());
    auto [du, u] = queue_.top();
    queue_.pop();
    labels_.scanned[u] = 1;
    ++labels_.stats.scanned_vertices;
    on_update(u, du);
    if (stop_at_saturated_ && is_saturated(labels_, config_, u)) return;
    const std::size_t width = labels_.sigma_width;
    for (const EdgeId* it = net_.out_begin(u); it != net_.out_end(u); ++it) {
      const EdgeId eid = *it;
      const Edge& f = net_.edge(eid);
      const Weight nd = du + f.weight;
      if (f.level != kLevelInf && sreach_ && !((*sreach_)[f.head] >= nd)) continue;
      if (!is_admissible_from(labels_, config_, u, f)) continue;
      Vertex v = f.head;
      if (anti_reach_ && (*anti_reach_)[v] < nd && (*anti_reach_)[v] < other_top) {
        // Pruned: the label is dropped but the concatenation through v is
        // still a real admissible walk, so report it as a candidate.
        on_prune(u, eid, nd);
        continue;
      }
      if (nd < labels_.dist[v]) {
        labels_.dist[v] = nd;
        labels_.pred[v] = eid;
        gc_.gamma(f, handicaps_[eid], gamma_.data());
        Weight* sv = labels_.sigma.data() + static_cast<std::size_t>(v) * width;
        const Weight* su = labels_.sigma.data() + static_cast<std::size_t>(u) * width;
        for (std::size_t i = 0; i < width; ++i) sv[i] = su[i] + gamma_[i];
        queue_.push({nd, v});
        label_heap_.push({nd, v});
        on_update(v, nd);
      } else if (nd == labels_.dist[v]) {
        gc_.gamma(f, handicaps_[eid], gamma_.data());
        Weight* sv = labels_.sigma.data() + static_cast<std::size_t>(v) * width;
        const Weight* su = labels_.sigma.data() + static_cast<std::size_t>(u) * width;
        for (std::size_t i = 0; i < width; ++i) sv[i] = std::min(sv[i], su[i] + gamma_[i]);
      }
    }
  }

  const SearchLabels& labels() const { return labels_; }

 private:
  void skip_stale() {
    while (!queue_.empty()) {
      auto [d, v] = queue_.top();
      if (labels_.scanned[v] || d != labels_.dist[v])
        queue_.pop();
      else
        break;
    }
  }

  const RoadNetwork& net_;
  const ScopeConfig& config_;
  const HandicapTable& handicaps_;
  const std::vector<Weight>* sreach_;
  const std::vector<Weight>* anti_reach_;
  bool stop_at_saturated_;
  GammaContext gc_;
  std::vector<Weight> gamma_;
  SearchLabels labels_;
  MinQueue queue_;
  MinQueue label_heap_;  // every label ever stored; pruned lazily
};

}  // namespace

std::optional<BidirResult> bidirectional_s_dijkstra(const ScopeNetwork& sn, Vertex s, Vertex t,
                                                    const BidirOptions& options) {
  const RoadNetwork& net = *sn.net;
  if (s >= net.vertex_count() || t >= net.vertex_count())
    throw std::out_of_range("bidirectional_s_dijkstra: vertex out of range");
  if (s == t) {
    BidirResult r;
    r.walk.vertices = {s};
    return r;
  }

  HalfSearch fwd(net, *sn.config, sn.handicaps, s, options.sreach_fwd, options.anti_reach,
                 options.stop_at_saturated);
  HalfSearch rev(sn.reversed, *sn.config, sn.rev_handicaps, t, options.sreach_rev,
                 options.anti_reach, options.stop_at_saturated);

  // The best known connection: either a meeting vertex labeled by both
  // halves, or a relaxation pruned by the anti-reach rule (its edge bridges
  // one half's tree to the other's).
  Weight best = kInfWeight;
  bool via_prune = false;
  bool prune_forward = false;
  Vertex meet = 0;
  EdgeId prune_edge = SearchLabels::kNoEdge;

  auto update_from = [&](const HalfSearch& other) {
    return [&](Vertex v, Weight d) {
      const Weight od = other.labels().dist[v];
      if (od != kInfWeight && d + od < best) {
        best = d + od;
        via_prune = false;
        meet = v;
      }
    };
  };
  auto prune_from = [&](const HalfSearch& other, bool forward) {
    return [&, forward](Vertex u, EdgeId e, Weight d) {
      const Vertex v = forward ? net.edge(e).head : sn.reversed.edge(e).head;
      const Weight od = other.labels().dist[v];
      if (od != kInfWeight && d + od < best) {
        best = d + od;
        via_prune = true;
        prune_forward = forward;
        meet = u;
        prune_edge = e;
      }
    };
  };

  bool forward_turn = true;
  while (!fwd.exhausted() || !rev.exhausted()) {
    // Any connection not yet recorded needs at least one future label store:
    // a store by one half at a vertex the other half has already labeled
    // costs at least that half's top key plus the other's smallest labeled
    // distance (among vertices not settled by the storing half); a
    // connection needing stores on both sides costs at least the sum of the
    // top keys.
    if (!options.run_to_completion) {
      const Weight ft = fwd.top_key(), rt = rev.top_key();
      const Weight bound =
          std::min({ft + rt, fwd.min_labeled_unsettled(rev.labels().scanned) + rt,
                    rev.min_labeled_unsettled(fwd.labels().scanned) + ft});
      if (bound >= best) break;
    }
    if (forward_turn && !fwd.exhausted())
      fwd.scan_one(update_from(rev), prune_from(rev, true), rev.top_key());
    else if (!rev.exhausted())
      rev.scan_one(update_from(fwd), prune_from(fwd, false), fwd.top_key());
    forward_turn = !forward_turn;
  }

  if (best == kInfWeight) return std::nullopt;

  BidirResult r;
  r.stats.scanned_vertices =
      fwd.labels().stats.scanned_vertices + rev.labels().stats.scanned_vertices;
  r.stats.max_queue_size =
      std::max(fwd.labels().stats.max_queue_size, rev.labels().stats.max_queue_size);

  std::optional<Walk> head, tail;
  EdgeId bridge = SearchLabels::kNoEdge;
  if (!via_prune) {
    head = construct_walk(fwd.labels(), net, meet);
    tail = construct_walk(rev.labels(), sn.reversed, meet);
  } else if (prune_forward) {
    bridge = prune_edge;
    head = construct_walk(fwd.labels(), net, meet);
    tail = construct_walk(rev.labels(), sn.reversed, net.edge(prune_edge).head);
  } else {
    // Pruned in the reverse half: the forward original of the edge runs from
    // its reversed head into the reverse-tree vertex `meet`.
    bridge = prune_edge;
    head = construct_walk(fwd.labels(), net, sn.reversed.edge(prune_edge).head);
    tail = construct_walk(rev.labels(), sn.reversed, meet);
  }
  assert(head && tail);
  r.walk = std::move(*head);
  if (bridge != SearchLabels::kNoEdge) {
    r.walk.edges.push_back(bridge);
    r.walk.vertices.push_back(net.edge(bridge).head);
  }
  // Reverse-search edges carry the same ids as their forward originals.
  for (std::size_t i = tail->edges.size(); i-- > 0;) {
    r.walk.edges.push_back(tail->edges[i]);
    r.walk.vertices.push_back(tail->vertices[i]);
  }
  // Labels may have improved after a pruned candidate was recorded, so the
  // reconstructed walk can only be at least as good as `best`.
  r.walk.weight = head->weight + (bridge == SearchLabels::kNoEdge ? 0 : net.edge(bridge).weight) +
                  tail->weight;
  r.weight = r.walk.weight;
  return r;
}

}  // namespace scope_route
