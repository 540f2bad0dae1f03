#ifndef SIRSHARE_SIR_CHECK_H_
#define SIRSHARE_SIR_CHECK_H_

#include <vector>

#include "sirshare/instance.h"
#include "sirshare/numeric.h"

// Costs, disutilities and (sequential) individual rationality along a route.
//
// Indexing convention for every table in this header: passengers are
// identified by their 0-based position in the route's pickup order (the
// "theory index"), and stage s is the state right after the (s+1)-th pickup,
// i.e. the set S(s+1) = {0, ..., s}. `passengers[i]` maps a theory index
// back to the instance label.

namespace sirshare {

// The route with every event of passengers picked up after the first
// `stage` pickups removed (1 <= stage <= n). Throws PreconditionError when
// the stage is out of range.
Route ConditionalRoute(const Route& route, int stage);

struct StageCosts {
  std::vector<int> passengers;  // theory index -> instance label
  double alpha_op = 0.0;
  std::vector<double> alpha;      // effective alpha per theory index
  std::vector<double> direct;     // d({i}) = S_i D_i
  std::vector<int> last_arrival;  // last stage before i is dropped off
  std::vector<double> d;          // d(S(s)) per stage
  std::vector<double> oc;         // OC(S(s)) = alpha_op * d(S(s))
  // d_i[s][i] and ic[s][i] for i <= s.
  std::vector<std::vector<double>> d_i;
  std::vector<std::vector<double>> ic;

  int size() const { return static_cast<int>(passengers.size()); }
};

// Validates the route, then evaluates every conditional route.
StageCosts ComputeStageCosts(const Instance& instance, const Route& route);

// Lower-triangular table of shares: share(i, s) = f(i, S(s)), i <= s.
class CostShareTable {
 public:
  CostShareTable() = default;
  explicit CostShareTable(int n);

  int size() const { return static_cast<int>(rows_.size()); }
  double& share(int passenger, int stage) { return rows_[stage][passenger]; }
  double share(int passenger, int stage) const {
    return rows_[stage][passenger];
  }
  double StageTotal(int stage) const;
  const std::vector<std::vector<double>>& rows() const { return rows_; }

 private:
  std::vector<std::vector<double>> rows_;
};

// du[i][k] = DU_i(t_k) for k = 0..n. Column 0 is exclusive service.
struct DisutilityTrace {
  std::vector<std::vector<double>> du;
};

// Throws PreconditionError naming the first (1-based) stage whose shares do
// not add up to the operational cost, or when the table size differs from
// the route.
void RequireBudgetBalanced(const StageCosts& costs, const CostShareTable& table,
                           const Tolerance& tolerance);

DisutilityTrace ComputeDisutility(const StageCosts& costs,
                                  const CostShareTable& table);

struct RationalityViolation {
  int passenger;  // theory index
  int stage;      // 1-based time index t_k whose disutility rose
  double excess;
};

struct RationalityReport {
  bool holds = true;
  std::vector<RationalityViolation> violations;
};

// DU_i(t_n) <= DU_i(t_0) for every passenger.
RationalityReport CheckIndividuallyRational(
    const Instance& instance, const Route& route, const CostShareTable& table,
    const Tolerance& tolerance = Tolerance::Default());

// DU_i(t_k) <= DU_i(t_{k-1}) for every passenger and every 1 <= k <= n.
RationalityReport CheckSequentiallyRational(
    const Instance& instance, const Route& route, const CostShareTable& table,
    const Tolerance& tolerance = Tolerance::Default());

struct FeasibilityReport {
  bool feasible = true;
  // One entry per pickup stage 2..n (index 0 is stage 2): bound minus
  // left-hand side. Distance units for single-dropoff routes and the limit
  // regimes, currency units for the general finite form.
  std::vector<double> slack;
  std::vector<double> lhs;
  std::vector<double> rhs;
  int first_failing_stage = 0;  // 1-based, 0 when feasible
};

struct PickupStageCheck {
  double detour = 0.0;  // S_{j-1}S_j + S_jD - S_{j-1}D
  double bound = 0.0;   // permitted detour under the instance's regime
  bool within = false;
};

// The single-dropoff constraint for picking up instance label `current`
// right after `previous`, with `alpha_aboard` the summed alphas of everyone
// already aboard.
PickupStageCheck CheckPickupStage(const Instance& instance, int previous,
                                  int current, double alpha_aboard,
                                  const Tolerance& tolerance);

// Decides whether some budget-balanced scheme is SIR on the route.
// Single-dropoff instances use the incremental-detour form; multi-dropoff
// routes use the stage-cost form.
FeasibilityReport CheckSirFeasible(
    const Instance& instance, const Route& route,
    const Tolerance& tolerance = Tolerance::Default());

// The stage-cost form for any route: OC and IC increments against
// alpha_op d({j}) - IC_j(S(j)). Used as the cross-check for the
// single-dropoff specialisation.
FeasibilityReport CheckSirFeasibleByStageCosts(
    const Instance& instance, const Route& route,
    const Tolerance& tolerance = Tolerance::Default());

// Recursive witness: f(i,{i}) = OC, then each existing share drops by that
// passenger's incremental inconvenience and the newcomer pays the rest.
// Throws FeasibilityError carrying the failing stage if the route is not
// SIR-feasible.
CostShareTable WitnessScheme(const Instance& instance, const Route& route,
                             const Tolerance& tolerance = Tolerance::Default());

}  // namespace sirshare

#endif  // SIRSHARE_SIR_CHECK_H_
