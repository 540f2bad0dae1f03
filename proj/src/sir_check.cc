#include "sirshare/sir_check.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "sirshare/errors.h"

namespace sirshare {

namespace {

// Theory index of every instance label, -1 if not picked up.
std::vector<int> PositionOfLabel(const std::vector<int>& order, int n) {
  std::vector<int> position(n, -1);
  for (int i = 0; i < static_cast<int>(order.size()); ++i) {
    position[order[i]] = i;
  }
  return position;
}

int PointOf(const Instance& instance, const RouteEvent& e) {
  return e.kind == EventKind::kPickup ? instance.pickup_point(e.passenger)
                                      : instance.dropoff_point(e.passenger);
}

}  // namespace

Route ConditionalRoute(const Route& route, int stage) {
  const std::vector<int> order = route.PickupOrder();
  const int n = static_cast<int>(order.size());
  if (stage < 1 || stage > n) {
    throw PreconditionError("stage " + std::to_string(stage) +
                            " out of range 1.." + std::to_string(n));
  }
  int max_label = 0;
  for (const RouteEvent& e : route.events()) {
    max_label = std::max(max_label, e.passenger);
  }
  const std::vector<int> position = PositionOfLabel(order, max_label + 1);
  std::vector<RouteEvent> kept;
  for (const RouteEvent& e : route.events()) {
    const int pos = position[e.passenger];
    if (pos >= 0 && pos < stage) kept.push_back(e);
  }
  return Route(std::move(kept));
}

StageCosts ComputeStageCosts(const Instance& instance, const Route& route) {
  ValidateRoute(instance, route);
  const int n = instance.num_passengers();
  const DistanceTable& table = instance.points();

  StageCosts costs;
  costs.passengers = route.PickupOrder();
  costs.alpha_op = instance.alpha_op();
  const std::vector<int> position = PositionOfLabel(costs.passengers, n);
  for (int label : costs.passengers) {
    costs.alpha.push_back(instance.effective_alpha(label));
    costs.direct.push_back(instance.direct_distance(label));
  }

  // Last arrival before each passenger leaves.
  costs.last_arrival.assign(n, -1);
  {
    int pickups_so_far = 0;
    for (const RouteEvent& e : route.events()) {
      if (e.kind == EventKind::kPickup) {
        ++pickups_so_far;
      } else {
        costs.last_arrival[position[e.passenger]] = pickups_so_far - 1;
      }
    }
  }

  costs.d.resize(n);
  costs.oc.resize(n);
  costs.d_i.resize(n);
  costs.ic.resize(n);
  for (int s = 0; s < n; ++s) {
    costs.d_i[s].assign(s + 1, 0.0);
    costs.ic[s].assign(s + 1, 0.0);
    // Each leg is added to everyone aboard, so a ride is the plain forward
    // sum of its legs.
    std::vector<char> aboard(s + 1, 0);
    double odometer = 0.0;
    int previous_point = -1;
    for (const RouteEvent& e : route.events()) {
      const int pos = position[e.passenger];
      if (pos > s) continue;
      const int point = PointOf(instance, e);
      if (previous_point >= 0) {
        const double leg = table(previous_point, point);
        odometer += leg;
        for (int i = 0; i <= s; ++i) {
          if (aboard[i]) costs.d_i[s][i] += leg;
        }
      }
      previous_point = point;
      aboard[pos] = e.kind == EventKind::kPickup;
    }
    costs.d[s] = odometer;
    costs.oc[s] = costs.alpha_op * odometer;
    for (int i = 0; i <= s; ++i) {
      costs.ic[s][i] = costs.alpha[i] * (costs.d_i[s][i] - costs.direct[i]);
    }
  }
  return costs;
}

CostShareTable::CostShareTable(int n) : rows_(n) {
  for (int s = 0; s < n; ++s) rows_[s].assign(s + 1, 0.0);
}

double CostShareTable::StageTotal(int stage) const {
  return std::accumulate(rows_[stage].begin(), rows_[stage].end(), 0.0);
}

void RequireBudgetBalanced(const StageCosts& costs, const CostShareTable& table,
                           const Tolerance& tolerance) {
  if (table.size() != costs.size()) {
    throw PreconditionError("cost share table has " +
                            std::to_string(table.size()) +
                            " stages; route has " +
                            std::to_string(costs.size()));
  }
  for (int s = 0; s < costs.size(); ++s) {
    const double total = table.StageTotal(s);
    if (!tolerance.Equal(total, costs.oc[s])) {
      std::ostringstream msg;
      msg << "cost share table is not budget balanced at stage " << s + 1
          << ": shares sum to " << total << ", operational cost is "
          << costs.oc[s];
      throw PreconditionError(msg.str());
    }
  }
}

DisutilityTrace ComputeDisutility(const StageCosts& costs,
                                  const CostShareTable& table) {
  const int n = costs.size();
  DisutilityTrace trace;
  trace.du.assign(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    std::vector<double>& row = trace.du[i];
    row[0] = costs.alpha_op * costs.direct[i];
    for (int s = 0; s < n; ++s) {
      const int k = s + 1;  // time index t_k
      if (s < i) {
        row[k] = row[0];
      } else if (s <= costs.last_arrival[i]) {
        row[k] = table.share(i, s) + costs.ic[s][i];
      } else {
        row[k] = row[k - 1];
      }
    }
  }
  return trace;
}

namespace {

DisutilityTrace CheckedTrace(const Instance& instance, const Route& route,
                             const CostShareTable& table,
                             const Tolerance& tolerance) {
  const StageCosts costs = ComputeStageCosts(instance, route);
  RequireBudgetBalanced(costs, table, tolerance);
  return ComputeDisutility(costs, table);
}

}  // namespace

RationalityReport CheckIndividuallyRational(const Instance& instance,
                                            const Route& route,
                                            const CostShareTable& table,
                                            const Tolerance& tolerance) {
  const DisutilityTrace trace = CheckedTrace(instance, route, table, tolerance);
  RationalityReport report;
  const int n = static_cast<int>(trace.du.size());
  for (int i = 0; i < n; ++i) {
    const double final_du = trace.du[i][n];
    const double exclusive = trace.du[i][0];
    if (!tolerance.LessOrEqual(final_du, exclusive)) {
      report.holds = false;
      report.violations.push_back({i, n, final_du - exclusive});
    }
  }
  return report;
}

RationalityReport CheckSequentiallyRational(const Instance& instance,
                                            const Route& route,
                                            const CostShareTable& table,
                                            const Tolerance& tolerance) {
  const DisutilityTrace trace = CheckedTrace(instance, route, table, tolerance);
  RationalityReport report;
  const int n = static_cast<int>(trace.du.size());
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= n; ++k) {
      const double now = trace.du[i][k];
      const double before = trace.du[i][k - 1];
      if (!tolerance.LessOrEqual(now, before)) {
        report.holds = false;
        report.violations.push_back({i, k, now - before});
      }
    }
  }
  return report;
}

namespace {

void Record(FeasibilityReport& report, int stage, double lhs, double rhs,
            double slack, bool ok) {
  report.lhs.push_back(lhs);
  report.rhs.push_back(rhs);
  report.slack.push_back(slack);
  if (!ok && report.feasible) {
    report.feasible = false;
    report.first_failing_stage = stage;
  }
}

FeasibilityReport SingleDropoffFeasibility(const Instance& instance,
                                           const std::vector<int>& order,
                                           const Tolerance& tolerance) {
  FeasibilityReport report;
  double alpha_aboard = instance.alphas()[order[0]];
  for (int j = 1; j < static_cast<int>(order.size()); ++j) {
    const PickupStageCheck check = CheckPickupStage(
        instance, order[j - 1], order[j], alpha_aboard, tolerance);
    Record(report, j + 1, check.detour, check.bound, check.bound - check.detour,
           check.within);
    alpha_aboard += instance.alphas()[order[j]];
  }
  return report;
}

}  // namespace

PickupStageCheck CheckPickupStage(const Instance& instance, int previous,
                                  int current, double alpha_aboard,
                                  const Tolerance& tolerance) {
  const DistanceTable& table = instance.points();
  const int dropoff = instance.dropoff_point(0);
  const double hop = table(previous, current);
  const double cur_direct = table(current, dropoff);
  const double prev_direct = table(previous, dropoff);
  PickupStageCheck check;
  check.detour = hop + cur_direct - prev_direct;
  switch (instance.regime()) {
    case Regime::kFinite:
      check.bound = cur_direct / (1.0 + alpha_aboard / instance.alpha_op());
      break;
    case Regime::kZeroLimit:
      check.bound = cur_direct;
      break;
    case Regime::kInfiniteLimit:
      check.bound = 0.0;
      break;
  }
  const double scale = std::max({hop, cur_direct, prev_direct});
  check.within = tolerance.LessOrEqual(check.detour, check.bound, scale);
  return check;
}

FeasibilityReport CheckSirFeasibleByStageCosts(const Instance& instance,
                                               const Route& route,
                                               const Tolerance& tolerance) {
  const StageCosts c = ComputeStageCosts(instance, route);
  const int n = c.size();
  FeasibilityReport report;
  for (int j = 1; j < n; ++j) {
    const double delta_d = c.d[j] - c.d[j - 1];
    const double own_detour = c.d_i[j][j] - c.direct[j];
    if (instance.regime() == Regime::kInfiniteLimit) {
      // Unit weights stand in for the diverging alphas; the operator term
      // survives only as a tie-breaker once every detour vanishes.
      double weighted = own_detour;
      double scale = std::max(c.d_i[j][j], c.direct[j]);
      for (int i = 0; i < j; ++i) {
        weighted += c.d_i[j][i] - c.d_i[j - 1][i];
        scale = std::max(scale, c.d_i[j][i]);
      }
      const bool detours_ok = tolerance.LessOrEqual(weighted, 0.0, scale);
      const bool operator_ok =
          tolerance.LessOrEqual(delta_d, c.direct[j], c.d[j]);
      const double slack = std::min(-weighted, c.direct[j] - delta_d);
      Record(report, j + 1, weighted, 0.0, slack, detours_ok && operator_ok);
      continue;
    }
    double lhs = c.oc[j] - c.oc[j - 1];
    double scale = c.oc[j];
    for (int i = 0; i < j; ++i) {
      lhs += c.ic[j][i] - c.ic[j - 1][i];
      scale = std::max(scale, std::fabs(c.ic[j][i]));
    }
    const double rhs = c.alpha_op * c.direct[j] - c.ic[j][j];
    scale = std::max(scale, c.alpha_op * c.direct[j]);
    Record(report, j + 1, lhs, rhs, rhs - lhs,
           tolerance.LessOrEqual(lhs, rhs, scale));
  }
  return report;
}

FeasibilityReport CheckSirFeasible(const Instance& instance, const Route& route,
                                   const Tolerance& tolerance) {
  ValidateRoute(instance, route);
  if (instance.dropoff_mode() == DropoffMode::kSingle) {
    return SingleDropoffFeasibility(instance, route.PickupOrder(), tolerance);
  }
  return CheckSirFeasibleByStageCosts(instance, route, tolerance);
}

CostShareTable WitnessScheme(const Instance& instance, const Route& route,
                             const Tolerance& tolerance) {
  const FeasibilityReport feasibility =
      CheckSirFeasible(instance, route, tolerance);
  if (!feasibility.feasible) {
    const int stage = feasibility.first_failing_stage;
    std::ostringstream msg;
    msg << "route is not SIR-feasible: stage " << stage << " exceeds its bound by "
        << -feasibility.slack[stage - 2];
    throw FeasibilityError(msg.str(), stage);
  }
  const StageCosts c = ComputeStageCosts(instance, route);
  const int n = c.size();
  CostShareTable table(n);
  table.share(0, 0) = c.oc[0];
  for (int j = 1; j < n; ++j) {
    double existing = 0.0;
    for (int i = 0; i < j; ++i) {
      table.share(i, j) =
          table.share(i, j - 1) - (c.ic[j][i] - c.ic[j - 1][i]);
      existing += table.share(i, j);
    }
    table.share(j, j) = c.oc[j] - existing;
  }
  return table;
}

}  // namespace sirshare
