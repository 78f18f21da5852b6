#include "scope_route/boundary.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <queue>
#include <unordered_map>

#include "scope_route/parallel.hpp"
#include "scope_route/scope_search.hpp"

namespace scope_route {

std::optional<std::size_t> BoundaryGraph::index_of(Vertex v) const {
  const auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
  if (it == vertices.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - vertices.begin());
}

DiGraph BoundaryGraph::as_digraph() const {
  std::vector<DiGraph::Arc> arcs;
  arcs.reserve(edges.size());
  for (const auto& e : edges)
    arcs.push_back({static_cast<Vertex>(*index_of(e.u)), static_cast<Vertex>(*index_of(e.v)),
                    e.p});
  return DiGraph(static_cast<Vertex>(vertices.size()), std::move(arcs));
}

InCellDistanceGraph incell_distances(const RoadNetwork& net, const Partition& partition,
                                     CellId cell, const ScopeConfig&) {
  InCellDistanceGraph out;
  out.cell = cell;
  out.vertices = partition.cell_boundary[cell];

  // The cell's unbounded-level subgraph, over a compact vertex set.
  std::vector<Vertex> verts;
  std::vector<EdgeId> cell_edges;
  for (EdgeId e = 0; e < net.edge_count(); ++e) {
    if (partition.edge_cell[e] != cell || net.edge(e).level != kLevelInf) continue;
    cell_edges.push_back(e);
    verts.push_back(net.edge(e).tail);
    verts.push_back(net.edge(e).head);
  }
  std::sort(verts.begin(), verts.end());
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  auto local = [&](Vertex v) -> std::optional<Vertex> {
    const auto it = std::lower_bound(verts.begin(), verts.end(), v);
    if (it == verts.end() || *it != v) return std::nullopt;
    return static_cast<Vertex>(it - verts.begin());
  };
  std::vector<DiGraph::Arc> arcs;
  arcs.reserve(cell_edges.size());
  for (EdgeId e : cell_edges)
    arcs.push_back({*local(net.edge(e).tail), *local(net.edge(e).head), net.edge(e).weight});
  const DiGraph g(static_cast<Vertex>(verts.size()), std::move(arcs));

  for (Vertex b : out.vertices) {
    const auto lb = local(b);
    if (!lb) continue;  // boundary vertex without unbounded edges in this cell
    const DijkstraLabels labels = dijkstra(g, *lb);
    for (Vertex c : out.vertices) {
      if (c == b) continue;
      const auto lc = local(c);
      if (!lc || labels.dist[*lc] == kInfWeight) continue;
      out.edges.push_back({b, c, labels.dist[*lc]});
    }
  }
  return out;
}

BoundaryGraph build_boundary_graph(const RoadNetwork& net, const Partition& partition,
                                   const ScopeConfig& config, unsigned threads) {
  BoundaryGraph bg;
  bg.vertices = partition.global_boundary;

  std::vector<InCellDistanceGraph> per_cell(partition.cell_count);
  parallel_for(partition.cell_count, threads, [&](std::size_t c, unsigned) {
    per_cell[c] = incell_distances(net, partition, static_cast<CellId>(c), config);
  });

  // Union with the minimum-weight rule; cells processed in ascending order,
  // strictly smaller weight wins, so provenance ties go to the lowest cell.
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (const auto& d : per_cell) {
    for (const auto& e : d.edges) {
      const std::uint64_t key = (static_cast<std::uint64_t>(e.u) << 32) | e.v;
      const auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, bg.edges.size());
        bg.edges.push_back({e.u, e.v, e.p, d.cell});
      } else if (e.p < bg.edges[it->second].p) {
        bg.edges[it->second] = {e.u, e.v, e.p, d.cell};
      }
    }
  }
  // Distance-preserving reduction: drop every arc whose weight is already
  // realized by a path through the remaining arcs. In-cell all-pairs tables
  // are heavily redundant (relay boundary vertices), and deleting only
  // redundant arcs keeps all boundary distances bit-identical.
  {
    std::vector<std::size_t> order(bg.edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return bg.edges[a].p > bg.edges[b].p;
    });
    // Local adjacency over boundary-vertex indices with alive flags.
    const std::size_t n = bg.vertices.size();
    std::vector<char> alive(bg.edges.size(), 1);
    std::vector<std::vector<std::size_t>> out(n);
    std::vector<std::size_t> from(bg.edges.size()), to(bg.edges.size());
    for (std::size_t i = 0; i < bg.edges.size(); ++i) {
      from[i] = *bg.index_of(bg.edges[i].u);
      to[i] = *bg.index_of(bg.edges[i].v);
      out[from[i]].push_back(i);
    }
    struct Item {
      Weight d;
      std::size_t v;
      bool operator>(const Item& o) const { return d > o.d; }
    };
    std::vector<Weight> dist(n, kInfWeight);
    std::vector<std::size_t> touched;
    for (std::size_t cand : order) {
      const std::size_t src = from[cand], dst = to[cand];
      const Weight budget = bg.edges[cand].p;
      // Dijkstra from src avoiding the candidate arc, cut off at its weight.
      std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
      dist[src] = 0;
      touched.push_back(src);
      pq.push({0, src});
      bool redundant = false;
      while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (d != dist[u]) continue;
        if (u == dst) {
          redundant = true;
          break;
        }
        for (std::size_t a : out[u]) {
          if (!alive[a] || a == cand) continue;
          const Weight nd = d + bg.edges[a].p;
          if (nd <= budget && nd < dist[to[a]]) {
            dist[to[a]] = nd;
            touched.push_back(to[a]);
            pq.push({nd, to[a]});
          }
        }
      }
      if (redundant) alive[cand] = 0;
      for (std::size_t v : touched) dist[v] = kInfWeight;
      touched.clear();
    }
    std::vector<BoundaryGraph::BEdge> kept;
    kept.reserve(bg.edges.size());
    for (std::size_t i = 0; i < bg.edges.size(); ++i)
      if (alive[i]) kept.push_back(bg.edges[i]);
    bg.edges = std::move(kept);
  }
  std::sort(bg.edges.begin(), bg.edges.end(), [](const auto& a, const auto& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  return bg;
}

BoundaryDistanceReport check_boundary_distance_property(
    const RoadNetwork& net, const BoundaryGraph& bg,
    const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  // The network's unbounded-level subgraph over the full vertex set.
  std::vector<DiGraph::Arc> arcs;
  for (const auto& e : net.edges())
    if (e.level == kLevelInf) arcs.push_back({e.tail, e.head, e.weight});
  const DiGraph ginf(net.vertex_count(), std::move(arcs));
  const DiGraph bgraph = bg.as_digraph();

  BoundaryDistanceReport report;
  for (const auto& [s, t] : pairs) {
    const auto is = bg.index_of(s);
    const auto it = bg.index_of(t);
    if (!is || !it) throw std::invalid_argument("boundary distance check: non-boundary vertex");
    ++report.checked;
    const Weight d_net = (s == t) ? 0 : dijkstra(ginf, s, t).dist[t];
    const Weight d_bg =
        (s == t) ? 0
                 : dijkstra(bgraph, static_cast<Vertex>(*is), static_cast<Vertex>(*it))
                       .dist[*it];
    if (d_net != d_bg) report.mismatches.push_back({s, t, d_net, d_bg});
  }
  return report;
}

namespace {

std::uint64_t fnv1a(std::uint64_t hash, const void* data, std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ull;
  }
  return hash;
}

template <typename T>
std::uint64_t fnv1a_value(std::uint64_t hash, const T& value) {
  return fnv1a(hash, &value, sizeof(value));
}

std::string fmt_weight(Weight w) {
  if (w == kInfWeight) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

Weight parse_weight_token(const std::string& tok) {
  if (tok == "inf") return kInfWeight;
  std::size_t used = 0;
  const double v = std::stod(tok, &used);
  if (used != tok.size()) throw FormatError("bundle: bad number '" + tok + "'");
  return v;
}

}  // namespace

std::uint64_t network_digest(const RoadNetwork& net) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  h = fnv1a_value(h, net.vertex_count());
  h = fnv1a_value(h, net.edge_count());
  for (const auto& e : net.edges()) {
    h = fnv1a_value(h, e.tail);
    h = fnv1a_value(h, e.head);
    h = fnv1a_value(h, e.weight);
    h = fnv1a_value(h, e.level);
  }
  for (const auto& c : net.coordinates()) {
    h = fnv1a_value(h, c.x);
    h = fnv1a_value(h, c.y);
  }
  return h;
}

namespace {

constexpr const char* kBundleMagic = "scope-route-bundle";

class SectionWriter {
 public:
  explicit SectionWriter(std::ostream& out) : out_(out) {}

  void section(const char* name, const std::vector<std::string>& tokens) {
    out_ << name << ' ' << tokens.size() << '\n';
    std::size_t col = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      col += tokens[i].size() + 1;
      out_ << tokens[i];
      if (col >= 96 || i + 1 == tokens.size()) {
        out_ << '\n';
        col = 0;
      } else {
        out_ << ' ';
      }
    }
  }

 private:
  std::ostream& out_;
};

class SectionReader {
 public:
  explicit SectionReader(std::istream& in) : in_(in) {}

  std::vector<std::string> section(const char* name) {
    std::string got;
    std::size_t count = 0;
    if (!(in_ >> got >> count)) throw FormatError("bundle: truncated before section " +
                                                  std::string(name));
    if (got != name)
      throw FormatError("bundle: expected section " + std::string(name) + ", found " + got);
    std::vector<std::string> tokens(count);
    for (auto& t : tokens)
      if (!(in_ >> t)) throw FormatError("bundle: truncated section " + std::string(name));
    return tokens;
  }

 private:
  std::istream& in_;
};

// Cursor over a section's tokens with typed accessors.
class Tokens {
 public:
  explicit Tokens(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  const std::string& str() {
    if (pos_ >= tokens_.size()) throw FormatError("bundle: section too short");
    return tokens_[pos_++];
  }
  std::uint64_t u64() {
    const std::string& t = str();
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(t, &used);
    if (used != t.size()) throw FormatError("bundle: bad integer '" + t + "'");
    return v;
  }
  Weight weight() { return parse_weight_token(str()); }
  void done() const {
    if (pos_ != tokens_.size()) throw FormatError("bundle: trailing tokens in section");
  }

 private:
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
};

std::vector<std::string> reach_tokens(const ReachTable& table) {
  std::vector<std::string> tokens;
  tokens.reserve(table.size() + 1);
  tokens.push_back(std::to_string(table.size()));
  for (Weight w : table) tokens.push_back(fmt_weight(w));
  return tokens;
}

ReachTable parse_reach(Tokens& t) {
  ReachTable table(t.u64());
  for (auto& w : table) w = t.weight();
  t.done();
  return table;
}

}  // namespace

void save_bundle(const PreprocessedBundle& bundle, std::ostream& out) {
  out << kBundleMagic << ' ' << bundle.version << '\n';
  SectionWriter w(out);

  char digest[20];
  std::snprintf(digest, sizeof(digest), "%016llx",
                static_cast<unsigned long long>(bundle.digest));
  w.section("NETWORK-DIGEST", {digest, std::to_string(bundle.vertex_count),
                               std::to_string(bundle.edge_count)});

  std::vector<std::string> cfg;
  const auto& bounded = bundle.config.bounded();
  cfg.push_back(std::to_string(bounded.size() + 1));
  for (const auto& e : bounded) {
    cfg.push_back(level_to_string(e.level));
    cfg.push_back(fmt_weight(e.nu));
    cfg.push_back(fmt_weight(e.kappa));
  }
  cfg.insert(cfg.end(), {"inf", "inf", "-"});
  w.section("SCOPE-CONFIG", cfg);

  std::vector<std::string> part;
  const Partition& p = bundle.partition;
  part.push_back(std::to_string(p.cell_count));
  part.push_back(p.disconnected_cell == kCellNone ? "-" : std::to_string(p.disconnected_cell));
  for (CellId c = 0; c < p.cell_count; ++c) part.push_back(p.oversize[c] ? "1" : "0");
  part.push_back(std::to_string(p.edge_cell.size()));
  for (CellId c : p.edge_cell) part.push_back(std::to_string(c));
  for (CellId c = 0; c < p.cell_count; ++c) {
    part.push_back(std::to_string(p.cell_boundary[c].size()));
    for (Vertex v : p.cell_boundary[c]) part.push_back(std::to_string(v));
  }
  part.push_back(std::to_string(p.global_boundary.size()));
  for (Vertex v : p.global_boundary) part.push_back(std::to_string(v));
  w.section("PARTITION", part);

  std::vector<std::string> bgt;
  const BoundaryGraph& bg = bundle.boundary;
  bgt.push_back(std::to_string(bg.vertices.size()));
  for (Vertex v : bg.vertices) bgt.push_back(std::to_string(v));
  bgt.push_back(std::to_string(bg.edges.size()));
  for (const auto& e : bg.edges) {
    bgt.push_back(std::to_string(e.u));
    bgt.push_back(std::to_string(e.v));
    bgt.push_back(fmt_weight(e.p));
    bgt.push_back(std::to_string(e.cell));
  }
  w.section("BOUNDARY-GRAPH", bgt);

  w.section("SREACH-FWD", reach_tokens(bundle.sreach_fwd));
  w.section("SREACH-REV", reach_tokens(bundle.sreach_rev));
  w.section("ANTI-SREACH", reach_tokens(bundle.anti_sreach));
  w.section("REACH-BE", reach_tokens(bundle.boundary.reach));
}

PreprocessedBundle load_bundle(std::istream& in, const RoadNetwork& net) {
  std::string magic;
  std::uint32_t version = 0;
  if (!(in >> magic >> version) || magic != kBundleMagic)
    throw FormatError("bundle: bad header");
  if (version != 1)
    throw FormatError("bundle: unsupported version " + std::to_string(version));

  PreprocessedBundle bundle;
  bundle.version = version;
  SectionReader r(in);

  {
    Tokens t(r.section("NETWORK-DIGEST"));
    bundle.digest = std::stoull(t.str(), nullptr, 16);
    bundle.vertex_count = static_cast<Vertex>(t.u64());
    bundle.edge_count = static_cast<EdgeId>(t.u64());
    t.done();
    if (bundle.vertex_count != net.vertex_count() || bundle.edge_count != net.edge_count() ||
        bundle.digest != network_digest(net))
      throw FormatError("bundle: digest mismatch, bundle was built for a different network");
  }
  {
    Tokens t(r.section("SCOPE-CONFIG"));
    const std::uint64_t levels = t.u64();
    std::vector<ScopeConfig::LevelEntry> entries;
    for (std::uint64_t i = 0; i < levels; ++i) {
      const Level lvl = level_from_string(t.str());
      const Weight nu = t.weight();
      const std::string& kap = t.str();
      entries.push_back({lvl, nu, kap == "-" ? 0 : parse_weight_token(kap)});
    }
    t.done();
    bundle.config = ScopeConfig(std::move(entries));
  }
  {
    Tokens t(r.section("PARTITION"));
    Partition& p = bundle.partition;
    p.cell_count = static_cast<CellId>(t.u64());
    const std::string& disc = t.str();
    p.disconnected_cell = disc == "-" ? kCellNone : static_cast<CellId>(std::stoul(disc));
    p.oversize.resize(p.cell_count);
    for (CellId c = 0; c < p.cell_count; ++c) p.oversize[c] = t.u64() != 0;
    p.edge_cell.resize(t.u64());
    for (auto& c : p.edge_cell) c = static_cast<CellId>(t.u64());
    if (p.edge_cell.size() != net.edge_count())
      throw FormatError("bundle: partition size mismatch");
    p.cell_boundary.resize(p.cell_count);
    for (CellId c = 0; c < p.cell_count; ++c) {
      p.cell_boundary[c].resize(t.u64());
      for (auto& v : p.cell_boundary[c]) v = static_cast<Vertex>(t.u64());
    }
    p.global_boundary.resize(t.u64());
    for (auto& v : p.global_boundary) v = static_cast<Vertex>(t.u64());
    t.done();
  }
  {
    Tokens t(r.section("BOUNDARY-GRAPH"));
    BoundaryGraph& bg = bundle.boundary;
    bg.vertices.resize(t.u64());
    for (auto& v : bg.vertices) v = static_cast<Vertex>(t.u64());
    bg.edges.resize(t.u64());
    for (auto& e : bg.edges) {
      e.u = static_cast<Vertex>(t.u64());
      e.v = static_cast<Vertex>(t.u64());
      e.p = t.weight();
      e.cell = static_cast<CellId>(t.u64());
    }
    t.done();
  }
  {
    Tokens t(r.section("SREACH-FWD"));
    bundle.sreach_fwd = parse_reach(t);
  }
  {
    Tokens t(r.section("SREACH-REV"));
    bundle.sreach_rev = parse_reach(t);
  }
  {
    Tokens t(r.section("ANTI-SREACH"));
    bundle.anti_sreach = parse_reach(t);
  }
  {
    Tokens t(r.section("REACH-BE"));
    bundle.boundary.reach = parse_reach(t);
  }
  if (bundle.sreach_fwd.size() != net.vertex_count() ||
      bundle.sreach_rev.size() != net.vertex_count() ||
      bundle.anti_sreach.size() != net.vertex_count())
    throw FormatError("bundle: reach table size mismatch");
  return bundle;
}

PreprocessedBundle preprocess_network(const RoadNetwork& net, const ScopeConfig& config,
                                      const PreprocessOptions& options) {
  PreprocessedBundle bundle;
  bundle.digest = network_digest(net);
  bundle.vertex_count = net.vertex_count();
  bundle.edge_count = net.edge_count();
  bundle.config = config;

  bundle.partition = partition_network(net, options.partition);
  bundle.boundary = build_boundary_graph(net, bundle.partition, config, options.threads);
  bundle.boundary.reach = compute_classical_reach(bundle.boundary.as_digraph());

  const ScopeNetwork sn = ScopeNetwork::build(net, config);
  bundle.sreach_fwd = compute_sreach_upper(net, config, sn.handicaps, options.threads);
  bundle.sreach_rev =
      compute_sreach_upper(sn.reversed, config, sn.rev_handicaps, options.threads);
  AntiSreachOptions anti = options.anti_sreach;
  if (anti.threads == 0) anti.threads = options.threads;
  bundle.anti_sreach = compute_anti_sreach(sn, anti);
  return bundle;
}

}  // namespace scope_route
