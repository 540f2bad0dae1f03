#ifndef SIRSHARE_ROUTE_SEARCH_H_
#define SIRSHARE_ROUTE_SEARCH_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "sirshare/instance.h"
#include "sirshare/numeric.h"
#include "sirshare/starvation.h"

// Exact search over single-dropoff routes. Every pickup stage constraint
// involves only two consecutive pickups and the passengers already aboard,
// so a prefix that violates one can be discarded together with all of its
// extensions.

namespace sirshare {

struct SearchStats {
  int64_t nodes_expanded = 0;
  int64_t prunes = 0;
};

struct OptimalRoute {
  Route route;
  double distance = 0.0;
};

struct SearchResult {
  // Feasible routes in lexicographic order of pickup sequence, truncated at
  // the limit.
  std::vector<Route> routes;
  int64_t total_feasible = 0;  // counted even past the limit
  bool truncated = false;
  std::optional<OptimalRoute> optimal;
  SearchStats stats;
};

struct SearchOptions {
  int64_t limit = std::numeric_limits<int64_t>::max();
  int cap = kDefaultEnumerationCap;
  bool prune = true;
};

// Total distance d(N; r) of a single-dropoff route.
double RouteDistance(const Instance& instance, std::span<const int> order);

// Depth-first enumeration of all SIR-feasible pickup orders. With
// options.prune == false every full permutation is generated and checked,
// which serves as the reference for the pruned search.
SearchResult EnumerateSirRoutes(const Instance& instance,
                                const SearchOptions& options = {},
                                const Tolerance& tolerance = Tolerance::Default());

// Streams feasible pickup orders (instance labels) to `visit` in
// lexicographic order without storing them; returning false stops the walk.
void VisitSirRoutes(const Instance& instance,
                    const std::function<bool(const std::vector<int>&)>& visit,
                    int cap = kDefaultEnumerationCap,
                    const Tolerance& tolerance = Tolerance::Default());

// Shortest SIR-feasible route (branch and bound on partial distance), ties
// broken lexicographically. nullopt when no route is feasible.
std::optional<OptimalRoute> OptSirRoute(
    const Instance& instance, int cap = kDefaultEnumerationCap,
    const Tolerance& tolerance = Tolerance::Default(),
    SearchStats* stats = nullptr);

struct LineVerdict {
  bool feasible = false;
  // Farthest-from-dropoff first; indices into the input positions.
  std::vector<int> pickup_order;
};

// Closed-form verdict for collinear instances with alpha_i == alpha_op: a
// dropoff at or beyond either end of the pickups admits the zero-detour
// sweep, a dropoff strictly inside admits nothing.
LineVerdict LineMetricVerdict(std::span<const double> pickup_positions,
                              double dropoff_position);

}  // namespace sirshare

#endif  // SIRSHARE_ROUTE_SEARCH_H_
