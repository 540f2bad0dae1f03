#ifndef SIRSHARE_STARVATION_H_
#define SIRSHARE_STARVATION_H_

#include <optional>
#include <string>
#include <vector>

#include "sirshare/instance.h"
#include "sirshare/numeric.h"

namespace sirshare {

inline constexpr int kDefaultEnumerationCap = 10;

struct BoundCheck {
  std::string theorem;  // "no-detour", "sqrt", "exponential"
  double bound = 0.0;
  bool holds = false;
};

struct StarvationReport {
  // Ratio d_i(N) / S_iD per passenger, in pickup order.
  std::vector<double> per_passenger;
  double route_factor = 0.0;
  bool sir_feasible = false;
  // Filled only for SIR-feasible routes, one entry per upper bound whose
  // regime the instance satisfies.
  std::vector<BoundCheck> bound_checks;
};

// Starvation factors of a single-dropoff route. Throws
// UnsupportedModeError for multi-dropoff instances and DegenerateError
// when some pickup coincides with the dropoff.
StarvationReport ComputeStarvation(
    const Instance& instance, const Route& route,
    const Tolerance& tolerance = Tolerance::Default());

// C_m = prod_{k<=m} 2k / (2k - 1).
double CentralProduct(int m);

// sum_j (1 + sum_{k<j} alpha_k / alpha_op)^{-1}.
double LowerBoundValue(int n, double alpha_op, const std::vector<double>& alphas);

struct MinStarvation {
  Route route;
  double factor = 0.0;
};

// The SIR-feasible route with the smallest starvation factor, ties broken by
// the lexicographically smallest pickup sequence; nullopt when no route is
// feasible. Throws SizeError when n exceeds `cap`.
std::optional<MinStarvation> MinRouteStarvation(
    const Instance& instance, int cap = kDefaultEnumerationCap,
    const Tolerance& tolerance = Tolerance::Default());

}  // namespace sirshare

#endif  // SIRSHARE_STARVATION_H_
