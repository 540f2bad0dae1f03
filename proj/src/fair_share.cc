#include "sirshare/fair_share.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sirshare/errors.h"

namespace sirshare {

BetaVector::BetaVector(std::vector<double> values) : values_(std::move(values)) {
  for (size_t k = 0; k < values_.size(); ++k) {
    if (!(values_[k] >= 0.0 && values_[k] <= 1.0)) {
      std::ostringstream msg;
      msg << "beta_" << k + 2 << " = " << values_[k] << " is outside [0, 1]";
      throw PreconditionError(msg.str());
    }
  }
}

BetaVector BetaVector::Harmonic(int n) {
  std::vector<double> values;
  for (int j = 2; j <= n; ++j) values.push_back(1.0 / j);
  return BetaVector(std::move(values));
}

namespace {

void RequireSingleDropoff(const Instance& instance, const char* what) {
  if (instance.dropoff_mode() != DropoffMode::kSingle) {
    throw UnsupportedModeError(std::string(what) +
                               " is defined for single-dropoff routes only");
  }
}

void RequireBetaCount(const BetaVector& betas, int n) {
  if (betas.size() != std::max(n - 1, 0)) {
    throw PreconditionError("expected " + std::to_string(std::max(n - 1, 0)) +
                            " betas (beta_2..beta_n), got " +
                            std::to_string(betas.size()));
  }
}

}  // namespace

std::vector<double> IncrementalDetours(const Instance& instance,
                                       const Route& route) {
  RequireSingleDropoff(instance, "incremental detour");
  ValidateRoute(instance, route);
  const std::vector<int> order = route.PickupOrder();
  const DistanceTable& t = instance.points();
  const int dropoff = instance.dropoff_point(0);
  std::vector<double> detours(order.size(), 0.0);
  for (size_t j = 1; j < order.size(); ++j) {
    detours[j] = t(order[j - 1], order[j]) + t(order[j], dropoff) -
                 t(order[j - 1], dropoff);
  }
  return detours;
}

BenefitBreakdown ComputeBenefits(const Instance& instance, const Route& route,
                                 const CostShareTable& table,
                                 const Tolerance& tolerance) {
  RequireSingleDropoff(instance, "benefit accounting");
  const StageCosts c = ComputeStageCosts(instance, route);
  RequireBudgetBalanced(c, table, tolerance);
  const std::vector<double> detour = IncrementalDetours(instance, route);
  const int n = c.size();
  BenefitBreakdown out;
  out.ib.assign(n, {});
  out.tib.assign(n, 0.0);
  out.ib[0] = {0.0};
  double alpha_prefix = c.alpha[0];
  for (int j = 1; j < n; ++j) {
    out.ib[j].resize(j + 1);
    for (int i = 0; i < j; ++i) {
      out.ib[j][i] = table.share(i, j - 1) - table.share(i, j) -
                     c.alpha[i] * detour[j];
    }
    out.ib[j][j] = c.alpha_op * c.direct[j] - table.share(j, j);
    out.tib[j] = c.alpha_op * c.direct[j] -
                 (c.alpha_op + alpha_prefix) * detour[j];
    alpha_prefix += c.alpha[j];
  }
  return out;
}

CostShareTable BetaFairTable(const Instance& instance, const Route& route,
                             const BetaVector& betas,
                             const Tolerance& tolerance) {
  RequireSingleDropoff(instance, "sequential fairness");
  const FeasibilityReport feasibility =
      CheckSirFeasible(instance, route, tolerance);
  if (!feasibility.feasible) {
    throw FeasibilityError("sequentially fair shares need an SIR-feasible route",
                           feasibility.first_failing_stage);
  }
  const StageCosts c = ComputeStageCosts(instance, route);
  const int n = c.size();
  RequireBetaCount(betas, n);
  const std::vector<double> detour = IncrementalDetours(instance, route);
  const double a_op = c.alpha_op;

  CostShareTable table(n);
  table.share(0, 0) = a_op * c.direct[0];
  double alpha_prefix = c.alpha[0];
  for (int j = 1; j < n; ++j) {
    if (!(alpha_prefix > 0.0)) {
      throw DegenerateError("alphas of the passengers aboard before stage " +
                            std::to_string(j + 1) + " sum to zero");
    }
    const double beta = betas.at_stage(j);
    const double private_fare = a_op * c.direct[j];
    table.share(j, j) = beta * private_fare +
                        (1.0 - beta) * (a_op + alpha_prefix) * detour[j];
    const double surplus = private_fare - a_op * detour[j];
    for (int i = 0; i < j; ++i) {
      const double discount =
          beta * (c.alpha[i] / alpha_prefix) * surplus +
          (1.0 - beta) * c.alpha[i] * detour[j];
      table.share(i, j) = table.share(i, j - 1) - discount;
    }
    alpha_prefix += c.alpha[j];
  }
  return table;
}

CostShareTable XcTable(const Instance& instance, const Route& route,
                       const Tolerance& tolerance) {
  RequireSingleDropoff(instance, "the equal-segment scheme");
  ValidateRoute(instance, route);
  const double scale = instance.alpha_op();
  for (int p = 0; p < instance.num_passengers(); ++p) {
    if (!tolerance.Equal(instance.effective_alpha(p), scale)) {
      throw UnsupportedModeError(
          "the equal-segment scheme assumes alpha_i == alpha_op for every "
          "passenger");
    }
  }
  const std::vector<int> order = route.PickupOrder();
  const DistanceTable& t = instance.points();
  const int dropoff = instance.dropoff_point(0);
  const int n = static_cast<int>(order.size());
  auto hop = [&](int k) { return t(order[k - 1], order[k]); };  // k >= 1
  auto direct = [&](int k) { return t(order[k], dropoff); };
  auto detour = [&](int k) { return hop(k) + direct(k) - direct(k - 1); };

  CostShareTable table(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= j; ++i) {
      // 1-based index of passenger i is i + 1; of stage j is j + 1.
      double equal_split = direct(j) / (j + 1);
      double received = 0.0;
      for (int k = i + 1; k <= j; ++k) {
        equal_split += hop(k) / k;
        received += detour(k);
      }
      const double paid = i > 0 ? i * detour(i) : 0.0;
      table.share(i, j) = scale * (equal_split + paid - received);
    }
  }
  return table;
}

FairnessReport VerifyFairnessRatios(const Instance& instance,
                                    const Route& route,
                                    const CostShareTable& table,
                                    const BetaVector& betas,
                                    const Tolerance& tolerance) {
  const BenefitBreakdown benefits =
      ComputeBenefits(instance, route, table, tolerance);
  const StageCosts c = ComputeStageCosts(instance, route);
  const int n = c.size();
  RequireBetaCount(betas, n);
  FairnessReport report;
  report.residual.assign(n, {});
  report.residual[0] = {0.0};
  double alpha_prefix = c.alpha[0];
  for (int j = 1; j < n; ++j) {
    const double tib = benefits.tib[j];
    const double magnitude = c.alpha_op * c.direct[j];
    if (tolerance.IsZero(tib, magnitude)) {
      throw IndeterminateError("total incremental benefit vanishes at stage " +
                               std::to_string(j + 1) +
                               "; fairness ratios are undefined");
    }
    if (!(alpha_prefix > 0.0)) {
      throw IndeterminateError("alphas aboard before stage " +
                               std::to_string(j + 1) + " sum to zero");
    }
    const double beta = betas.at_stage(j);
    report.residual[j].resize(j + 1);
    for (int i = 0; i <= j; ++i) {
      const double target =
          i < j ? beta * c.alpha[i] / alpha_prefix : 1.0 - beta;
      const double ib = benefits.ib[j][i];
      report.residual[j][i] = ib / tib - target;
      double share_scale = std::max(std::fabs(table.share(i, j)), magnitude);
      if (i < j) {
        share_scale = std::max(share_scale, std::fabs(table.share(i, j - 1)));
      }
      if (!tolerance.Equal(ib, target * tib, share_scale)) report.holds = false;
    }
    alpha_prefix += c.alpha[j];
  }
  return report;
}

double NeutralBetaFromIncrements(std::span<const double> increments) {
  if (increments.empty()) {
    throw PreconditionError("neutral beta needs the newcomer's inconvenience");
  }
  const double total =
      std::accumulate(increments.begin(), increments.end(), 0.0);
  if (total == 0.0) {
    throw IndeterminateError(
        "incremental inconvenience costs sum to zero; neutral beta is "
        "undefined");
  }
  return 1.0 - increments.back() / total;
}

double NeutralBeta(const Instance& instance, const Route& route, int stage) {
  const StageCosts c = ComputeStageCosts(instance, route);
  if (stage < 2 || stage > c.size()) {
    throw PreconditionError("stage " + std::to_string(stage) +
                            " out of range 2.." + std::to_string(c.size()));
  }
  const int j = stage - 1;
  std::vector<double> increments;
  for (int m = 0; m < j; ++m) increments.push_back(c.ic[j][m] - c.ic[j - 1][m]);
  increments.push_back(c.ic[j][j]);
  // Rounding noise in a zero detour must not produce a spurious ratio.
  const Tolerance tolerance;
  double total = 0.0;
  for (double v : increments) total += v;
  if (tolerance.IsZero(total, c.oc[j])) {
    throw IndeterminateError("incremental inconvenience costs at stage " +
                             std::to_string(stage) +
                             " sum to zero; neutral beta is undefined");
  }
  return NeutralBetaFromIncrements(increments);
}

DisutilityTrace ReverseMeter(const Instance& instance, const Route& route,
                             const CostShareTable& table,
                             const Tolerance& tolerance) {
  const StageCosts c = ComputeStageCosts(instance, route);
  RequireBudgetBalanced(c, table, tolerance);
  return ComputeDisutility(c, table);
}

std::vector<LedgerStage> BuildLedger(const Instance& instance,
                                     const Route& route,
                                     const CostShareTable& table,
                                     const Tolerance& tolerance) {
  const BenefitBreakdown benefits =
      ComputeBenefits(instance, route, table, tolerance);
  const DisutilityTrace trace = ReverseMeter(instance, route, table, tolerance);
  const std::vector<double> detour = IncrementalDetours(instance, route);
  const int n = table.size();
  std::vector<LedgerStage> ledger;
  for (int j = 0; j < n; ++j) {
    LedgerStage stage;
    stage.stage = j + 1;
    stage.detour = detour[j];
    stage.incoming_fare = table.share(j, j);
    for (int i = 0; i < j; ++i) {
      stage.discounts.push_back(table.share(i, j - 1) - table.share(i, j));
    }
    stage.ib = benefits.ib[j];
    stage.tib = benefits.tib[j];
    for (int i = 0; i <= j; ++i) stage.disutility.push_back(trace.du[i][j + 1]);
    ledger.push_back(std::move(stage));
  }
  return ledger;
}

}  // namespace sirshare
