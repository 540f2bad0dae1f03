#include "sirshare/route_search.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sirshare/errors.h"
#include "sirshare/sir_check.h"

namespace sirshare {

namespace {

void RequireSearchable(const Instance& instance, int cap) {
  if (instance.dropoff_mode() != DropoffMode::kSingle) {
    throw UnsupportedModeError(
        "route search covers single-dropoff instances only");
  }
  if (instance.num_passengers() > cap) {
    throw SizeError("exact route search refuses n = " +
                    std::to_string(instance.num_passengers()) +
                    " above the enumeration cap of " + std::to_string(cap));
  }
}

// Depth-first walk over pickup prefixes in lexicographic order. `visit`
// receives every complete order that passes the stage checks and returns
// false to stop the walk. `bound` may veto a prefix by its partial hop
// distance.
class PrefixWalker {
 public:
  PrefixWalker(const Instance& instance, const Tolerance& tolerance,
               bool check_stages)
      : instance_(instance),
        tolerance_(tolerance),
        check_stages_(check_stages),
        n_(instance.num_passengers()),
        used_(n_, 0) {}

  template <typename Visit, typename Bound>
  void Run(Visit&& visit, Bound&& bound) {
    order_.clear();
    stopped_ = false;
    Extend(0.0, 0.0, visit, bound);
  }

  SearchStats stats;

 private:
  template <typename Visit, typename Bound>
  void Extend(double alpha_aboard, double hops, Visit& visit, Bound& bound) {
    if (static_cast<int>(order_.size()) == n_) {
      if (!visit(order_, hops)) stopped_ = true;
      return;
    }
    for (int next = 0; next < n_ && !stopped_; ++next) {
      if (used_[next]) continue;
      ++stats.nodes_expanded;
      double next_hops = hops;
      if (!order_.empty()) {
        const int prev = order_.back();
        if (check_stages_ &&
            !CheckPickupStage(instance_, prev, next, alpha_aboard, tolerance_)
                 .within) {
          ++stats.prunes;
          continue;
        }
        next_hops += instance_.points()(prev, next);
      }
      if (!bound(next_hops)) {
        ++stats.prunes;
        continue;
      }
      used_[next] = 1;
      order_.push_back(next);
      Extend(alpha_aboard + instance_.alphas()[next], next_hops, visit, bound);
      order_.pop_back();
      used_[next] = 0;
    }
  }

  const Instance& instance_;
  const Tolerance& tolerance_;
  bool check_stages_;
  int n_;
  std::vector<char> used_;
  std::vector<int> order_;
  bool stopped_ = false;
};

}  // namespace

double RouteDistance(const Instance& instance, std::span<const int> order) {
  const DistanceTable& t = instance.points();
  double total = 0.0;
  for (size_t k = 1; k < order.size(); ++k) total += t(order[k - 1], order[k]);
  return total + t(order.back(), instance.dropoff_point(0));
}

SearchResult EnumerateSirRoutes(const Instance& instance,
                                const SearchOptions& options,
                                const Tolerance& tolerance) {
  RequireSearchable(instance, options.cap);
  SearchResult result;
  PrefixWalker walker(instance, tolerance, options.prune);
  auto visit = [&](const std::vector<int>& order, double) {
    if (!options.prune) {
      const Route route = Route::SingleDropoff(order);
      if (!CheckSirFeasible(instance, route, tolerance).feasible) return true;
    }
    ++result.total_feasible;
    const double distance = RouteDistance(instance, order);
    if (!result.optimal ||
        distance < result.optimal->distance -
                       tolerance.Allowance(distance, result.optimal->distance)) {
      result.optimal = OptimalRoute{Route::SingleDropoff(order), distance};
    }
    if (static_cast<int64_t>(result.routes.size()) < options.limit) {
      result.routes.push_back(Route::SingleDropoff(order));
    } else {
      result.truncated = true;
    }
    return true;
  };
  walker.Run(visit, [](double) { return true; });
  result.stats = walker.stats;
  return result;
}

void VisitSirRoutes(const Instance& instance,
                    const std::function<bool(const std::vector<int>&)>& visit,
                    int cap, const Tolerance& tolerance) {
  RequireSearchable(instance, cap);
  PrefixWalker walker(instance, tolerance, /*check_stages=*/true);
  walker.Run([&](const std::vector<int>& order, double) { return visit(order); },
             [](double) { return true; });
}

std::optional<OptimalRoute> OptSirRoute(const Instance& instance, int cap,
                                        const Tolerance& tolerance,
                                        SearchStats* stats) {
  RequireSearchable(instance, cap);
  std::optional<OptimalRoute> best;
  PrefixWalker walker(instance, tolerance, /*check_stages=*/true);
  auto visit = [&](const std::vector<int>& order, double) {
    const double distance = RouteDistance(instance, order);
    if (!best ||
        distance < best->distance - tolerance.Allowance(distance, best->distance)) {
      best = OptimalRoute{Route::SingleDropoff(order), distance};
    }
    return true;
  };
  // The remaining distance is bounded below by zero, so a prefix that
  // already matches the incumbent cannot win.
  auto bound = [&](double partial) {
    return !best ||
           partial < best->distance - tolerance.Allowance(partial, best->distance);
  };
  walker.Run(visit, bound);
  if (stats != nullptr) *stats = walker.stats;
  return best;
}

LineVerdict LineMetricVerdict(std::span<const double> pickup_positions,
                              double dropoff_position) {
  if (pickup_positions.empty()) {
    throw PreconditionError("line verdict needs at least one pickup");
  }
  const auto [lo, hi] =
      std::minmax_element(pickup_positions.begin(), pickup_positions.end());
  LineVerdict verdict;
  const bool dropoff_left = dropoff_position <= *lo;
  const bool dropoff_right = dropoff_position >= *hi;
  if (!dropoff_left && !dropoff_right) return verdict;
  verdict.feasible = true;
  verdict.pickup_order.resize(pickup_positions.size());
  std::iota(verdict.pickup_order.begin(), verdict.pickup_order.end(), 0);
  std::stable_sort(verdict.pickup_order.begin(), verdict.pickup_order.end(),
                   [&](int a, int b) {
                     return dropoff_left
                                ? pickup_positions[a] > pickup_positions[b]
                                : pickup_positions[a] < pickup_positions[b];
                   });
  return verdict;
}

}  // namespace sirshare
