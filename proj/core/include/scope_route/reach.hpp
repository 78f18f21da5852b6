#pragma once

#include <vector>

#include "scope_route/scope_search.hpp"

namespace scope_route {

/// Per-vertex reach values; infinity encodes "undefined" (and disables
/// pruning at that vertex).
using ReachTable = std::vector<Weight>;

/// Effective worker count: `requested` (0 = hardware concurrency), capped by
/// the SCOPE_ROUTE_THREADS environment variable when set. Always >= 1.
unsigned resolve_thread_count(unsigned requested);

/// Discovered vertices u with sigma_l(u) > nu_l for every bounded level l.
std::vector<Vertex> saturated_vertices(const SearchLabels& labels, const RoadNetwork& net,
                                       const ScopeConfig& config);

/// Certified upper bound on the scope reach: per source x (unpruned scope
/// search), every non-x-saturated vertex with finite distance receives the
/// largest distance of any x-saturated vertex as a candidate; the table is
/// the per-vertex maximum over sources, infinity where no candidate exists.
/// Loose by construction; soundness (never below the true value) is the
/// contract.
ReachTable compute_sreach_upper(const RoadNetwork& net, const ScopeConfig& config,
                                const HandicapTable& handicaps, unsigned threads = 0);

struct AntiSreachOptions {
  /// Above this vertex count the brute force is skipped and the all-infinity
  /// table is returned (pruning disabled, still sound).
  std::size_t max_vertices = 600;
  unsigned threads = 0;
};

/// Anti-reach for the unsaturated local search: for every pair (x,y) whose
/// optimal xy-admissible walk is not saturated, every vertex v on one such
/// walk accumulates min(prefix weight, suffix weight); the table is the
/// per-vertex maximum (0 where no such walk passes).
ReachTable compute_anti_sreach(const ScopeNetwork& sn, const AntiSreachOptions& options = {});

}  // namespace scope_route
