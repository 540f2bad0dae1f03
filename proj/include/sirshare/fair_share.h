#ifndef SIRSHARE_FAIR_SHARE_H_
#define SIRSHARE_FAIR_SHARE_H_

#include <span>
#include <vector>

#include "sirshare/instance.h"
#include "sirshare/numeric.h"
#include "sirshare/sir_check.h"

// Benefit accounting and sequentially fair cost sharing for single-dropoff
// routes. Tables use the theory-index convention of sir_check.h.

namespace sirshare {

// Split fractions beta_2..beta_n, each in [0, 1]. values()[0] is beta_2.
class BetaVector {
 public:
  BetaVector() = default;
  // Throws PreconditionError for entries outside [0, 1].
  explicit BetaVector(std::vector<double> values);

  // beta_j = 1 / j for every stage, the split the equal-segment scheme uses.
  static BetaVector Harmonic(int n);

  int size() const { return static_cast<int>(values_.size()); }
  // Fraction for 0-based stage s >= 1.
  double at_stage(int stage) const { return values_[stage - 1]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct BenefitBreakdown {
  // ib[s][i] for i <= s; row 0 is the single entry 0.
  std::vector<std::vector<double>> ib;
  // Closed form alpha_op S_jD - (alpha_op + sum alpha) * detour; tib[0] = 0.
  std::vector<double> tib;
};

// Incremental detour S_{j-1}S_j + S_jD - S_{j-1}D for each stage s >= 1 of
// a single-dropoff route; entry 0 is 0.
std::vector<double> IncrementalDetours(const Instance& instance,
                                       const Route& route);

// Throws UnsupportedModeError for multi-dropoff instances and
// PreconditionError if the table is not budget balanced.
BenefitBreakdown ComputeBenefits(
    const Instance& instance, const Route& route, const CostShareTable& table,
    const Tolerance& tolerance = Tolerance::Default());

// The beta-sequentially fair table: the newcomer pays
// beta_j alpha_op S_jD + (1 - beta_j)(alpha_op + sum alpha) detour_j and each
// existing passenger gets the matching discount. Throws FeasibilityError on
// infeasible routes and DegenerateError when the existing passengers' alphas
// sum to zero.
CostShareTable BetaFairTable(const Instance& instance, const Route& route,
                             const BetaVector& betas,
                             const Tolerance& tolerance = Tolerance::Default());

// Equal split of every segment among its riders plus detour compensation
// between passengers. Requires alpha_i == alpha_op for all i (any common
// scale); throws UnsupportedModeError otherwise.
CostShareTable XcTable(const Instance& instance, const Route& route,
                       const Tolerance& tolerance = Tolerance::Default());

struct FairnessReport {
  bool holds = true;
  // residual[s][i] = IB/TIB minus the target ratio; row 0 is {0}.
  std::vector<std::vector<double>> residual;
};

// Throws IndeterminateError when TIB vanishes at some stage (or the
// existing passengers' alphas sum to zero).
FairnessReport VerifyFairnessRatios(
    const Instance& instance, const Route& route, const CostShareTable& table,
    const BetaVector& betas, const Tolerance& tolerance = Tolerance::Default());

// beta_j that treats the newcomer like everyone else. `increments` holds
// the incremental inconvenience of each existing passenger followed by the
// newcomer's own inconvenience. Throws IndeterminateError when they sum to
// zero.
double NeutralBetaFromIncrements(std::span<const double> increments);

// Same, read off the route's stage costs for 1-based stage j >= 2.
double NeutralBeta(const Instance& instance, const Route& route, int stage);

// Running disutility of every passenger; nonincreasing under any SIR table.
DisutilityTrace ReverseMeter(const Instance& instance, const Route& route,
                             const CostShareTable& table,
                             const Tolerance& tolerance = Tolerance::Default());

// Per-stage view used by the `share` report.
struct LedgerStage {
  int stage = 0;  // 1-based
  double detour = 0.0;
  double incoming_fare = 0.0;
  std::vector<double> discounts;  // existing passengers, theory order
  std::vector<double> ib;         // existing passengers then the newcomer
  double tib = 0.0;
  std::vector<double> disutility;  // DU_i(t_stage) for i <= stage
};

std::vector<LedgerStage> BuildLedger(
    const Instance& instance, const Route& route, const CostShareTable& table,
    const Tolerance& tolerance = Tolerance::Default());

}  // namespace sirshare

#endif  // SIRSHARE_FAIR_SHARE_H_
