#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace scope_route {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Weight = double;

/// Scope level id. Bounded levels are small integers; kLevelInf is the
/// unbounded level and compares greater than every bounded level.
using Level = std::uint32_t;
inline constexpr Level kLevelInf = std::numeric_limits<Level>::max();

inline constexpr Weight kInfWeight = std::numeric_limits<Weight>::infinity();

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Edge {
  Vertex tail = 0;
  Vertex head = 0;
  Weight weight = 0;
  Level level = kLevelInf;

  bool operator==(const Edge&) const = default;
};

/// Scope levels with their scope values (nu) and turn handicaps (kappa).
/// The level set always contains 0 and kLevelInf; nu is strictly increasing
/// with nu_0 = 0 and nu_inf = infinity, kappa strictly increasing and
/// positive over the bounded levels (kappa of the unbounded level is never
/// consulted).
class ScopeConfig {
 public:
  struct LevelEntry {
    Level level;
    Weight nu;
    Weight kappa;  // unused for kLevelInf
    bool operator==(const LevelEntry&) const = default;
  };

  ScopeConfig() = default;
  explicit ScopeConfig(std::vector<LevelEntry> entries);

  /// Bounded levels in increasing order (excludes kLevelInf).
  const std::vector<LevelEntry>& bounded() const { return bounded_; }
  std::size_t bounded_count() const { return bounded_.size(); }

  bool has_level(Level level) const;
  /// Index of a bounded level in bounded(); throws for unknown/inf levels.
  std::size_t bounded_index(Level level) const;

  Weight nu(Level level) const;
  Weight kappa(Level level) const;

  /// All levels, bounded ascending then kLevelInf.
  std::vector<Level> levels() const;

 private:
  std::vector<LevelEntry> bounded_;
  std::vector<std::size_t> index_;  // level -> index into bounded_, dense
};

struct Coordinates {
  double x = 0;
  double y = 0;
  bool operator==(const Coordinates&) const = default;
};

/// Directed weighted multigraph with a per-edge scope level. Immutable in
/// practice: every algorithm takes it by const reference; the mutating
/// helpers (subdivide_edge, reverse_network) return new networks.
class RoadNetwork {
 public:
  RoadNetwork() = default;
  RoadNetwork(Vertex vertex_count, std::vector<Edge> edges);

  Vertex vertex_count() const { return vertex_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }

  bool has_coordinates() const { return !coords_.empty(); }
  const std::vector<Coordinates>& coordinates() const { return coords_; }
  void set_coordinates(std::vector<Coordinates> coords);

  /// Out-edge ids of v in input order.
  const EdgeId* out_begin(Vertex v) const { return out_edges_.data() + out_offsets_[v]; }
  const EdgeId* out_end(Vertex v) const { return out_edges_.data() + out_offsets_[v + 1]; }
  std::size_t out_degree(Vertex v) const { return out_offsets_[v + 1] - out_offsets_[v]; }

  /// In-edge ids of v.
  const EdgeId* in_begin(Vertex v) const { return in_edges_.data() + in_offsets_[v]; }
  const EdgeId* in_end(Vertex v) const { return in_edges_.data() + in_offsets_[v + 1]; }

 private:
  void build_adjacency();

  Vertex vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<Coordinates> coords_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<EdgeId> out_edges_, in_edges_;
};

/// Per-edge turn-scope handicap level h(e).
struct HandicapTable {
  std::vector<Level> level;
  Level operator[](EdgeId e) const { return level[e]; }
};

/// h(e) = max(S(e), max over edges f leaving head(e) of S(f)); the max over
/// an empty out-edge set is S(e).
HandicapTable compute_turn_handicaps(const RoadNetwork& net);

/// Same vertices, every edge reversed; weights and levels kept.
RoadNetwork reverse_network(const RoadNetwork& net);

/// Replaces edge e = (u,v,w,l) by (u,m,w/2,l),(m,v,w/2,l) with a fresh
/// vertex m. Returns the new network and m's id.
std::pair<RoadNetwork, Vertex> subdivide_edge(const RoadNetwork& net, EdgeId e);

struct LoadedNetwork {
  RoadNetwork net;
  ScopeConfig config;
};

/// Line-oriented network format:
///   c <comment>
///   p <vertex_count> <edge_count>
///   v <id> <x> <y>
///   a <tail> <head> <weight> <level>      level: integer or "inf"
/// Scope config format, one line per level:
///   <level> <nu> <kappa>                  "inf inf -" for the unbounded level
RoadNetwork load_network(std::istream& in);
ScopeConfig load_scope_config(std::istream& in);
LoadedNetwork load_network_and_config(std::istream& net_in, std::istream& cfg_in);

void save_network(const RoadNetwork& net, std::ostream& out);
void save_scope_config(const ScopeConfig& cfg, std::ostream& out);

std::string level_to_string(Level level);
Level level_from_string(const std::string& tok);

}  // namespace scope_route
