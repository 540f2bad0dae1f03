#include "sirshare/starvation.h"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "sirshare/errors.h"
#include "sirshare/route_search.h"
#include "sirshare/sir_check.h"

namespace sirshare {

StarvationReport ComputeStarvation(const Instance& instance, const Route& route,
                                   const Tolerance& tolerance) {
  if (instance.dropoff_mode() != DropoffMode::kSingle) {
    throw UnsupportedModeError("starvation factors need a single-dropoff route");
  }
  ValidateRoute(instance, route);
  const std::vector<int> order = route.PickupOrder();
  const DistanceTable& t = instance.points();
  const int dropoff = instance.dropoff_point(0);
  const int n = static_cast<int>(order.size());

  StarvationReport report;
  report.per_passenger.assign(n, 0.0);
  // Suffix sums: distance from pickup i to the dropoff along the route.
  double ride = t(order[n - 1], dropoff);
  for (int i = n - 1; i >= 0; --i) {
    if (i < n - 1) ride += t(order[i], order[i + 1]);
    const double direct = t(order[i], dropoff);
    if (direct == 0.0) {
      throw DegenerateError("pickup of passenger " + std::to_string(order[i] + 1) +
                            " coincides with the dropoff");
    }
    report.per_passenger[i] = ride / direct;
  }
  report.route_factor =
      *std::max_element(report.per_passenger.begin(), report.per_passenger.end());

  report.sir_feasible = CheckSirFeasible(instance, route, tolerance).feasible;
  if (!report.sir_feasible) return report;

  const double gamma = report.route_factor;
  switch (instance.regime()) {
    case Regime::kInfiniteLimit:
      report.bound_checks.push_back(
          {"no-detour", 1.0, tolerance.Equal(gamma, 1.0)});
      break;
    case Regime::kZeroLimit: {
      const double bound = std::ldexp(1.0, n);
      report.bound_checks.push_back(
          {"exponential", bound, tolerance.LessOrEqual(gamma, bound)});
      break;
    }
    case Regime::kFinite: {
      const bool sensitive =
          std::all_of(instance.alphas().begin(), instance.alphas().end(),
                      [&](double a) { return a >= instance.alpha_op(); });
      if (sensitive) {
        const double bound = 2.0 * std::sqrt(static_cast<double>(n));
        report.bound_checks.push_back(
            {"sqrt", bound, tolerance.LessOrEqual(gamma, bound)});
      }
      break;
    }
  }
  return report;
}

double CentralProduct(int m) {
  double product = 1.0;
  for (int k = 1; k <= m; ++k) product *= (2.0 * k) / (2.0 * k - 1.0);
  return product;
}

double LowerBoundValue(int n, double alpha_op,
                       const std::vector<double>& alphas) {
  if (static_cast<int>(alphas.size()) < n - 1) {
    throw PreconditionError("lower bound needs alpha_1..alpha_{n-1}");
  }
  if (!(alpha_op > 0.0)) throw PreconditionError("alpha_op must be positive");
  double total = 0.0;
  double prefix = 0.0;
  for (int j = 0; j < n; ++j) {
    total += 1.0 / (1.0 + prefix / alpha_op);
    if (j < static_cast<int>(alphas.size())) prefix += alphas[j];
  }
  return total;
}

std::optional<MinStarvation> MinRouteStarvation(const Instance& instance,
                                                int cap,
                                                const Tolerance& tolerance) {
  std::optional<MinStarvation> best;
  // Routes arrive in lexicographic order, so a strict improvement test keeps
  // the lexicographically smallest among ties.
  VisitSirRoutes(
      instance,
      [&](const std::vector<int>& order) {
        const Route route = Route::SingleDropoff(order);
        const double factor =
            ComputeStarvation(instance, route, tolerance).route_factor;
        if (!best || (factor < best->factor &&
                      !tolerance.Equal(factor, best->factor))) {
          best = MinStarvation{route, factor};
        }
        return true;
      },
      cap, tolerance);
  return best;
}

}  // namespace sirshare
