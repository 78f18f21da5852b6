#include "scope_route/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace scope_route {

// ---------------------------------------------------------------- ScopeConfig

ScopeConfig::ScopeConfig(std::vector<LevelEntry> entries) {
  bool saw_zero = false, saw_inf = false;
  for (const auto& e : entries) {
    if (e.level == kLevelInf) {
      saw_inf = true;
      if (e.nu != kInfWeight)
        throw FormatError("scope config: nu of the unbounded level must be inf");
    } else {
      if (e.level == 0) saw_zero = true;
      bounded_.push_back(e);
    }
  }
  if (!saw_zero || !saw_inf)
    throw FormatError("scope config: levels 0 and inf are both required");
  std::sort(bounded_.begin(), bounded_.end(),
            [](const LevelEntry& a, const LevelEntry& b) { return a.level < b.level; });
  for (std::size_t i = 0; i < bounded_.size(); ++i) {
    if (i > 0 && bounded_[i].level == bounded_[i - 1].level)
      throw FormatError("scope config: duplicate level");
    if (i > 0 && !(bounded_[i].nu > bounded_[i - 1].nu))
      throw FormatError("scope config: nu must be strictly increasing");
    if (i > 0 && !(bounded_[i].kappa > bounded_[i - 1].kappa))
      throw FormatError("scope config: kappa must be strictly increasing");
    if (!(bounded_[i].kappa > 0))
      throw FormatError("scope config: kappa must be positive");
    if (!std::isfinite(bounded_[i].nu))
      throw FormatError("scope config: nu of a bounded level must be finite");
  }
  if (bounded_.front().nu != 0)
    throw FormatError("scope config: nu_0 must be 0");
  index_.assign(bounded_.back().level + 1, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < bounded_.size(); ++i) index_[bounded_[i].level] = i;
}

bool ScopeConfig::has_level(Level level) const {
  if (level == kLevelInf) return true;
  return level < index_.size() && index_[level] != static_cast<std::size_t>(-1);
}

std::size_t ScopeConfig::bounded_index(Level level) const {
  if (level == kLevelInf || !has_level(level))
    throw std::out_of_range("bounded_index: not a bounded level of this config");
  return index_[level];
}

Weight ScopeConfig::nu(Level level) const {
  if (level == kLevelInf) return kInfWeight;
  return bounded_[bounded_index(level)].nu;
}

Weight ScopeConfig::kappa(Level level) const {
  return bounded_[bounded_index(level)].kappa;
}

std::vector<Level> ScopeConfig::levels() const {
  std::vector<Level> out;
  out.reserve(bounded_.size() + 1);
  for (const auto& e : bounded_) out.push_back(e.level);
  out.push_back(kLevelInf);
  return out;
}

// ---------------------------------------------------------------- RoadNetwork

RoadNetwork::RoadNetwork(Vertex vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  for (const auto& e : edges_) {
    if (e.tail >= vertex_count_ || e.head >= vertex_count_)
      throw FormatError("edge endpoint out of range");
    if (!(e.weight >= 0)) throw FormatError("negative edge weight");
  }
  build_adjacency();
}

void RoadNetwork::set_coordinates(std::vector<Coordinates> coords) {
  if (coords.size() != vertex_count_)
    throw FormatError("coordinate count does not match vertex count");
  coords_ = std::move(coords);
}

void RoadNetwork::build_adjacency() {
  out_offsets_.assign(vertex_count_ + 1, 0);
  in_offsets_.assign(vertex_count_ + 1, 0);
  for (const auto& e : edges_) {
    ++out_offsets_[e.tail + 1];
    ++in_offsets_[e.head + 1];
  }
  for (Vertex v = 0; v < vertex_count_; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_edges_.resize(edges_.size());
  in_edges_.resize(edges_.size());
  std::vector<std::size_t> op(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> ip(in_offsets_.begin(), in_offsets_.end() - 1);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    out_edges_[op[edges_[e].tail]++] = e;
    in_edges_[ip[edges_[e].head]++] = e;
  }
}

HandicapTable compute_turn_handicaps(const RoadNetwork& net) {
  HandicapTable t;
  t.level.resize(net.edge_count());
  // Per-vertex max of outgoing scope levels; kLevelInf dominates.
  std::vector<Level> out_max(net.vertex_count(), 0);
  std::vector<char> has_out(net.vertex_count(), 0);
  for (const auto& e : net.edges()) {
    out_max[e.tail] = std::max(out_max[e.tail], e.level);
    has_out[e.tail] = 1;
  }
  for (EdgeId i = 0; i < net.edge_count(); ++i) {
    const Edge& e = net.edge(i);
    t.level[i] = has_out[e.head] ? std::max(e.level, out_max[e.head]) : e.level;
  }
  return t;
}

RoadNetwork reverse_network(const RoadNetwork& net) {
  std::vector<Edge> rev = net.edges();
  for (auto& e : rev) std::swap(e.tail, e.head);
  RoadNetwork out(net.vertex_count(), std::move(rev));
  if (net.has_coordinates()) out.set_coordinates(net.coordinates());
  return out;
}

std::pair<RoadNetwork, Vertex> subdivide_edge(const RoadNetwork& net, EdgeId e) {
  if (e >= net.edge_count()) throw std::out_of_range("subdivide_edge: bad edge id");
  const Edge old = net.edge(e);
  const Vertex m = net.vertex_count();
  std::vector<Edge> edges = net.edges();
  edges[e] = Edge{old.tail, m, old.weight / 2, old.level};
  edges.push_back(Edge{m, old.head, old.weight / 2, old.level});
  RoadNetwork out(net.vertex_count() + 1, std::move(edges));
  if (net.has_coordinates()) {
    auto coords = net.coordinates();
    const auto& a = coords[old.tail];
    const auto& b = coords[old.head];
    coords.push_back(Coordinates{(a.x + b.x) / 2, (a.y + b.y) / 2});
    out.set_coordinates(std::move(coords));
  }
  return {std::move(out), m};
}

// ---------------------------------------------------------------- text formats

std::string level_to_string(Level level) {
  return level == kLevelInf ? "inf" : std::to_string(level);
}

Level level_from_string(const std::string& tok) {
  if (tok == "inf") return kLevelInf;
  std::size_t pos = 0;
  unsigned long v;
  try {
    v = std::stoul(tok, &pos);
  } catch (const std::exception&) {
    throw FormatError("bad scope level token '" + tok + "'");
  }
  if (pos != tok.size() || v >= kLevelInf)
    throw FormatError("bad scope level token '" + tok + "'");
  return static_cast<Level>(v);
}

namespace {

[[noreturn]] void line_error(std::size_t line_no, const std::string& what) {
  throw FormatError("line " + std::to_string(line_no) + ": " + what);
}

std::string format_weight(Weight w) {
  if (w == kInfWeight) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

RoadNetwork load_network(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  Vertex vertex_count = 0;
  std::size_t edge_count = 0;
  std::vector<Edge> edges;
  std::vector<Coordinates> coords;
  std::vector<char> coord_seen;
  bool any_coord = false;

  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag == "c") continue;
    if (tag == "p") {
      if (have_header) line_error(line_no, "duplicate header");
      if (!(ls >> vertex_count >> edge_count)) line_error(line_no, "malformed header");
      have_header = true;
      edges.reserve(edge_count);
      coords.assign(vertex_count, {});
      coord_seen.assign(vertex_count, 0);
    } else if (tag == "v") {
      if (!have_header) line_error(line_no, "vertex line before header");
      Vertex id;
      Coordinates c;
      if (!(ls >> id >> c.x >> c.y)) line_error(line_no, "malformed vertex line");
      if (id >= vertex_count) line_error(line_no, "vertex id out of range");
      coords[id] = c;
      coord_seen[id] = 1;
      any_coord = true;
    } else if (tag == "a") {
      if (!have_header) line_error(line_no, "edge line before header");
      Edge e;
      std::string level_tok;
      if (!(ls >> e.tail >> e.head >> e.weight >> level_tok))
        line_error(line_no, "malformed edge line");
      if (e.tail >= vertex_count || e.head >= vertex_count)
        line_error(line_no, "edge endpoint out of range");
      if (!(e.weight >= 0)) line_error(line_no, "negative edge weight");
      try {
        e.level = level_from_string(level_tok);
      } catch (const FormatError& err) {
        line_error(line_no, err.what());
      }
      edges.push_back(e);
    } else {
      line_error(line_no, "unknown line tag '" + tag + "'");
    }
  }
  if (!have_header) throw FormatError("missing 'p' header line");
  if (edges.size() != edge_count)
    throw FormatError("edge count mismatch: header says " + std::to_string(edge_count) +
                      ", found " + std::to_string(edges.size()));
  RoadNetwork net(vertex_count, std::move(edges));
  if (any_coord) {
    if (std::find(coord_seen.begin(), coord_seen.end(), 0) != coord_seen.end())
      throw FormatError("coordinates given for only some vertices");
    net.set_coordinates(std::move(coords));
  }
  return net;
}

ScopeConfig load_scope_config(std::istream& in) {
  std::vector<ScopeConfig::LevelEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string level_tok, nu_tok, kappa_tok;
    if (!(ls >> level_tok)) continue;
    if (level_tok == "c") continue;
    if (!(ls >> nu_tok >> kappa_tok)) line_error(line_no, "malformed scope config line");
    ScopeConfig::LevelEntry e;
    try {
      e.level = level_from_string(level_tok);
    } catch (const FormatError& err) {
      line_error(line_no, err.what());
    }
    if (e.level == kLevelInf) {
      if (nu_tok != "inf" || kappa_tok != "-")
        line_error(line_no, "unbounded level line must read 'inf inf -'");
      e.nu = kInfWeight;
      e.kappa = 0;
    } else {
      try {
        e.nu = std::stod(nu_tok);
        e.kappa = std::stod(kappa_tok);
      } catch (const std::exception&) {
        line_error(line_no, "malformed scope config numbers");
      }
    }
    entries.push_back(e);
  }
  return ScopeConfig(std::move(entries));
}

LoadedNetwork load_network_and_config(std::istream& net_in, std::istream& cfg_in) {
  LoadedNetwork out{load_network(net_in), load_scope_config(cfg_in)};
  for (EdgeId i = 0; i < out.net.edge_count(); ++i)
    if (!out.config.has_level(out.net.edge(i).level))
      throw FormatError("edge " + std::to_string(i) + " has unknown scope level " +
                        level_to_string(out.net.edge(i).level));
  return out;
}

void save_network(const RoadNetwork& net, std::ostream& out) {
  out << "p " << net.vertex_count() << ' ' << net.edge_count() << '\n';
  if (net.has_coordinates())
    for (Vertex v = 0; v < net.vertex_count(); ++v) {
      const auto& c = net.coordinates()[v];
      out << "v " << v << ' ' << format_weight(c.x) << ' ' << format_weight(c.y) << '\n';
    }
  for (const auto& e : net.edges())
    out << "a " << e.tail << ' ' << e.head << ' ' << format_weight(e.weight) << ' '
        << level_to_string(e.level) << '\n';
}

void save_scope_config(const ScopeConfig& cfg, std::ostream& out) {
  for (const auto& e : cfg.bounded())
    out << e.level << ' ' << format_weight(e.nu) << ' ' << format_weight(e.kappa) << '\n';
  out << "inf inf -\n";
}

}  // namespace scope_route
