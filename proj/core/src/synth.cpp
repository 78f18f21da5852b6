#include "scope_route/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace scope_route {

namespace {

struct Builder {
  std::vector<Edge> edges;
  std::vector<Coordinates> coords;
  std::mt19937_64 rng;

  explicit Builder(std::uint64_t seed) : rng(seed) {}

  Vertex add_vertex(double x, double y) {
    coords.push_back({x, y});
    return static_cast<Vertex>(coords.size() - 1);
  }

  Weight road_weight(Vertex a, Vertex b) {
    const double dx = coords[a].x - coords[b].x;
    const double dy = coords[a].y - coords[b].y;
    const double euclid = std::hypot(dx, dy);
    std::uniform_real_distribution<double> factor(1.05, 1.35);
    return std::max<Weight>(1.0, std::ceil(euclid * factor(rng)));
  }

  void add_bidirected(Vertex a, Vertex b, Level level) {
    const Weight w = road_weight(a, b);
    edges.push_back({a, b, w, level});
    edges.push_back({b, a, w, level});
  }
};

}  // namespace

SyntheticNetwork generate_synthetic(const SynthParams& p, std::uint64_t seed) {
  if (p.cities_x == 0 || p.cities_y == 0 || p.block_size < 3)
    throw std::invalid_argument("generate_synthetic: need >= 1x1 cities, block_size >= 3");
  if (!p.intercity_highways && p.cities_x * p.cities_y > 1)
    throw std::invalid_argument(
        "generate_synthetic: intercity highways disabled with more than one city");

  Builder b(seed);
  const std::uint32_t k = p.block_size;
  const std::uint32_t mid = k / 2;
  std::vector<Vertex> interchange(p.cities_x * p.cities_y);

  for (std::uint32_t cy = 0; cy < p.cities_y; ++cy) {
    for (std::uint32_t cx = 0; cx < p.cities_x; ++cx) {
      const double ox = cx * p.city_spacing;
      const double oy = cy * p.city_spacing;
      std::vector<Vertex> grid(k * k);
      for (std::uint32_t j = 0; j < k; ++j)
        for (std::uint32_t i = 0; i < k; ++i)
          grid[j * k + i] = b.add_vertex(ox + i * p.block_spacing, oy + j * p.block_spacing);

      // Street grid: arterial cross through the center, urban elsewhere.
      for (std::uint32_t j = 0; j < k; ++j)
        for (std::uint32_t i = 0; i < k; ++i) {
          if (i + 1 < k) {
            Level lvl = (j == mid) ? 3 : 2;
            b.add_bidirected(grid[j * k + i], grid[j * k + i + 1], lvl);
          }
          if (j + 1 < k) {
            Level lvl = (i == mid) ? 3 : 2;
            b.add_bidirected(grid[j * k + i], grid[(j + 1) * k + i], lvl);
          }
        }

      const Vertex hub = grid[mid * k + mid];
      // Highway interchange just off the hub, connected by a ramp.
      const Vertex x = b.add_vertex(ox + mid * p.block_spacing + p.block_spacing / 2,
                                    oy + mid * p.block_spacing + p.block_spacing / 2);
      b.add_bidirected(hub, x, kLevelInf);
      interchange[cy * p.cities_x + cx] = x;

      // Cul-de-sacs (level 1) hanging off random non-hub grid vertices.
      std::uniform_int_distribution<std::uint32_t> pick(0, k * k - 1);
      std::uniform_int_distribution<int> chain_len(1, 2);
      for (std::uint32_t l = 0; l < p.locals_per_city; ++l) {
        Vertex anchor = grid[pick(b.rng)];
        int len = chain_len(b.rng);
        Vertex prev = anchor;
        for (int step = 0; step < len; ++step) {
          std::uniform_real_distribution<double> off(-40.0, 40.0);
          Vertex nv = b.add_vertex(b.coords[prev].x + off(b.rng), b.coords[prev].y + off(b.rng));
          b.add_bidirected(prev, nv, 1);
          prev = nv;
        }
      }

      // Alleys (level 0): pendant stubs.
      std::uint32_t alleys = p.alleys_per_city;
      if (alleys == 0 && cx == 0 && cy == 0) alleys = 1;  // keep level 0 in Im(S)
      for (std::uint32_t l = 0; l < alleys; ++l) {
        Vertex anchor = grid[pick(b.rng)];
        std::uniform_real_distribution<double> off(-30.0, 30.0);
        Vertex nv = b.add_vertex(b.coords[anchor].x + off(b.rng), b.coords[anchor].y + off(b.rng));
        b.add_bidirected(anchor, nv, 0);
      }
    }
  }

  if (p.intercity_highways) {
    for (std::uint32_t cy = 0; cy < p.cities_y; ++cy)
      for (std::uint32_t cx = 0; cx < p.cities_x; ++cx) {
        if (cx + 1 < p.cities_x)
          b.add_bidirected(interchange[cy * p.cities_x + cx],
                           interchange[cy * p.cities_x + cx + 1], kLevelInf);
        if (cy + 1 < p.cities_y)
          b.add_bidirected(interchange[cy * p.cities_x + cx],
                           interchange[(cy + 1) * p.cities_x + cx], kLevelInf);
      }
  }

  SyntheticNetwork out;
  out.net = RoadNetwork(static_cast<Vertex>(b.coords.size()), std::move(b.edges));
  out.net.set_coordinates(std::move(b.coords));
  out.config = ScopeConfig({{0, 0, p.kappa0},
                            {1, p.nu1, p.kappa1},
                            {2, p.nu2, p.kappa2},
                            {3, p.nu3, p.kappa3},
                            {kLevelInf, kInfWeight, 0}});
  for (Level lvl : out.config.levels()) out.level_distribution[lvl] = 0;
  for (const auto& e : out.net.edges()) ++out.level_distribution[e.level];
  return out;
}

}  // namespace scope_route
