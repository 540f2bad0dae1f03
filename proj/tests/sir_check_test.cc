#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sirshare/errors.h"
#include "sirshare/instance.h"
#include "sirshare/sir_check.h"
#include "support/corpus.h"

namespace sirshare {
namespace {

using testing::Rng;

// S_1D = 10, S_2D = 6, S_1S_2 = 5.
Instance TwoRiders(double alpha_op = 1.0, std::vector<double> alphas = {1.0, 1.0}) {
  return Instance(DistanceTable::FromRows({{0, 5, 10}, {5, 0, 6}, {10, 6, 0}}),
                  DropoffMode::kSingle, alpha_op, std::move(alphas));
}

Route Order(std::vector<int> order) { return Route::SingleDropoff(order); }

CostShareTable Table(std::vector<std::vector<double>> rows) {
  CostShareTable t(static_cast<int>(rows.size()));
  for (size_t s = 0; s < rows.size(); ++s) {
    for (size_t i = 0; i <= s; ++i) t.share(static_cast<int>(i), static_cast<int>(s)) = rows[s][i];
  }
  return t;
}

TEST(ConditionalRoute, SingleDropoffPrefix) {
  const Route r = Order({0, 1, 2});
  EXPECT_EQ(ConditionalRoute(r, 2), Order({0, 1}));
  EXPECT_EQ(ConditionalRoute(r, 3), r);
  EXPECT_THROW(ConditionalRoute(r, 0), PreconditionError);
  EXPECT_THROW(ConditionalRoute(r, 4), PreconditionError);
}

TEST(ConditionalRoute, GeneralRouteKeepsOrder) {
  using E = RouteEvent;
  const Route r({E{EventKind::kPickup, 0}, E{EventKind::kPickup, 1}, E{EventKind::kDropoff, 1},
                 E{EventKind::kPickup, 2}, E{EventKind::kDropoff, 0}, E{EventKind::kDropoff, 2}});
  const Route expected({E{EventKind::kPickup, 0}, E{EventKind::kPickup, 1},
                        E{EventKind::kDropoff, 1}, E{EventKind::kDropoff, 0}});
  EXPECT_EQ(ConditionalRoute(r, 2), expected);
}

TEST(StageCosts, MultiDropoffHandSums) {
  // Line points: P1=0, P2=1, P3=3; D1=6, D2=2, D3=5.
  const Instance inst(FromEuclidean({{0}, {1}, {3}, {6}, {2}, {5}}), DropoffMode::kMulti, 1.0,
                      {1.0, 2.0, 1.0});
  using E = RouteEvent;
  const Route r({E{EventKind::kPickup, 0}, E{EventKind::kPickup, 1}, E{EventKind::kDropoff, 1},
                 E{EventKind::kPickup, 2}, E{EventKind::kDropoff, 0}, E{EventKind::kDropoff, 2}});
  const StageCosts c = ComputeStageCosts(inst, r);
  // Stage 2: 0 -> 1 -> 2 -> 6.
  EXPECT_DOUBLE_EQ(c.d[1], 6.0);
  EXPECT_DOUBLE_EQ(c.d_i[1][0], 6.0);
  EXPECT_DOUBLE_EQ(c.d_i[1][1], 1.0);
  // Stage 3: 0 -> 1 -> 2 -> 3 -> 6 -> 5.
  EXPECT_DOUBLE_EQ(c.d[2], 7.0);
  EXPECT_DOUBLE_EQ(c.d_i[2][2], 4.0);
  EXPECT_DOUBLE_EQ(c.ic[2][2], 1.0 * (4.0 - 2.0));
  EXPECT_DOUBLE_EQ(c.ic[1][1], 2.0 * (1.0 - 1.0));
  EXPECT_EQ(c.last_arrival[0], 2);
  EXPECT_EQ(c.last_arrival[1], 1);
}

TEST(StageCosts, TwoRiders) {
  const StageCosts c = ComputeStageCosts(TwoRiders(2.0), Order({0, 1}));
  EXPECT_DOUBLE_EQ(c.d[1], 11.0);
  EXPECT_DOUBLE_EQ(c.oc[1], 22.0);
  EXPECT_DOUBLE_EQ(c.ic[1][0], 1.0);
  EXPECT_DOUBLE_EQ(c.ic[1][1], 0.0);
  EXPECT_DOUBLE_EQ(c.oc[0], 20.0);
}

TEST(StageCosts, SingleRider) {
  const Instance inst(FromEuclidean({{4}, {0}}), DropoffMode::kSingle, 3.0, {1.0});
  const StageCosts c = ComputeStageCosts(inst, Order({0}));
  EXPECT_DOUBLE_EQ(c.oc[0], 12.0);
  EXPECT_DOUBLE_EQ(c.ic[0][0], 0.0);
}

TEST(StageCosts, ThreeRiderInconvenience) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = testing::RandomEuclideanInstance(rng, 3, testing::AlphaLaw::kAny);
    const DistanceTable& t = inst.points();
    const StageCosts c = ComputeStageCosts(inst, Order({0, 1, 2}));
    const double expected = inst.alphas()[0] * (t(0, 1) + t(1, 2) + t(2, 3) - t(0, 3));
    EXPECT_NEAR(c.ic[2][0], expected, 1e-12 * (1 + std::fabs(expected)));
    EXPECT_DOUBLE_EQ(c.ic[2][2], 0.0);
  }
}

TEST(StageCosts, SuffixSumsAndOperatorCost) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::UniformInt(rng, 1, 7);
    const Instance inst = testing::RandomEuclideanInstance(rng, n, testing::AlphaLaw::kAny);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    const StageCosts c = ComputeStageCosts(inst, Order(order));
    const DistanceTable& t = inst.points();
    for (int s = 0; s < n; ++s) {
      EXPECT_EQ(c.oc[s], inst.alpha_op() * c.d[s]);
      // Ride of the s-th pickup on its own conditional route: it is the last
      // one aboard, so it goes straight to D.
      EXPECT_EQ(c.d_i[s][s], t(order[s], n));
      for (int i = 0; i < s; ++i) {
        double ride = 0.0;
        for (int k = i; k < s; ++k) ride += t(order[k], order[k + 1]);
        ride += t(order[s], n);
        EXPECT_EQ(c.d_i[s][i], ride);
      }
    }
  }
}

TEST(Rationality, IndividualViolation) {
  const Instance inst = TwoRiders();
  const CostShareTable table = Table({{10}, {11, 0}});
  const RationalityReport r = CheckIndividuallyRational(inst, Order({0, 1}), table);
  EXPECT_FALSE(r.holds);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].passenger, 0);
  EXPECT_DOUBLE_EQ(r.violations[0].excess, 2.0);
}

TEST(Rationality, SequentialViolationOfNewcomer) {
  const Instance inst = TwoRiders();
  const CostShareTable table = Table({{10}, {4, 7}});
  const RationalityReport r = CheckSequentiallyRational(inst, Order({0, 1}), table);
  EXPECT_FALSE(r.holds);
  bool newcomer = false;
  for (const RationalityViolation& v : r.violations) {
    newcomer |= v.passenger == 1 && v.stage == 2;
  }
  EXPECT_TRUE(newcomer);
}

TEST(Rationality, SingleRiderHoldsWithEquality) {
  const Instance inst(FromEuclidean({{4}, {0}}), DropoffMode::kSingle, 3.0, {1.0});
  EXPECT_TRUE(CheckIndividuallyRational(inst, Order({0}), Table({{12}})).holds);
}

TEST(Rationality, UnbalancedTableNamesStage) {
  const Instance inst = TwoRiders();
  try {
    CheckIndividuallyRational(inst, Order({0, 1}), Table({{10}, {5, 5}}));
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("stage 2"), std::string::npos);
  }
}

TEST(SirFeasible, TwoRidersBothOrders) {
  const Instance inst = TwoRiders();
  const FeasibilityReport forward = CheckSirFeasible(inst, Order({0, 1}));
  EXPECT_TRUE(forward.feasible);
  ASSERT_EQ(forward.slack.size(), 1u);
  EXPECT_DOUBLE_EQ(forward.slack[0], 3.0 - 1.0);

  const FeasibilityReport backward = CheckSirFeasible(inst, Order({1, 0}));
  EXPECT_FALSE(backward.feasible);
  EXPECT_EQ(backward.first_failing_stage, 2);
  EXPECT_DOUBLE_EQ(backward.slack[0], 5.0 - 9.0);
}

TEST(SirFeasible, SingleRiderVacuous) {
  const Instance inst(FromEuclidean({{4}, {0}}), DropoffMode::kSingle, 1.0, {1.0});
  const FeasibilityReport r = CheckSirFeasible(inst, Order({0}));
  EXPECT_TRUE(r.feasible);
  EXPECT_TRUE(r.slack.empty());
}

TEST(SirFeasible, ThreeRiderConditions) {
  Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = testing::RandomEuclideanInstance(rng, 3, testing::AlphaLaw::kAny);
    const DistanceTable& t = inst.points();
    const double a0 = inst.alpha_op();
    const double a1 = inst.alphas()[0];
    const double a2 = inst.alphas()[1];
    const bool second = t(0, 1) + t(1, 3) - t(0, 3) <= a0 / (a0 + a1) * t(1, 3) + 1e-9;
    const bool third = t(1, 2) + t(2, 3) - t(1, 3) <= a0 / (a0 + a1 + a2) * t(2, 3) + 1e-9;
    const FeasibilityReport r = CheckSirFeasible(inst, Order({0, 1, 2}));
    // Skip draws that sit on the tolerance boundary.
    if (std::fabs(r.slack[0]) < 1e-6 || std::fabs(r.slack[1]) < 1e-6) continue;
    EXPECT_EQ(r.feasible, second && third);
  }
}

TEST(SirFeasible, StageCostFormAgreesWithDetourForm) {
  Rng rng(29);
  const Regime regimes[] = {Regime::kFinite, Regime::kZeroLimit, Regime::kInfiniteLimit};
  for (int trial = 0; trial < 300; ++trial) {
    const int n = testing::UniformInt(rng, 1, 6);
    const Regime regime = regimes[trial % 3];
    const Instance inst =
        regime == Regime::kInfiniteLimit && trial % 2 == 0
            ? testing::RandomLineInstance(rng, n, regime)
            : testing::RandomEuclideanInstance(rng, n, testing::AlphaLaw::kAny, regime);
    testing::ForEachPermutation(n, [&](const std::vector<int>& order) {
      const Route r = Order(order);
      const FeasibilityReport a = CheckSirFeasible(inst, r);
      const FeasibilityReport b = CheckSirFeasibleByStageCosts(inst, r);
      double tightest = 1e300;
      for (double s : a.slack) tightest = std::min(tightest, std::fabs(s));
      if (tightest < 1e-7 && regime != Regime::kInfiniteLimit) return;
      EXPECT_EQ(a.feasible, b.feasible) << "trial " << trial;
      EXPECT_EQ(a.feasible, testing::OracleSingleDropoffFeasible(inst, order));
    });
  }
}

TEST(SirFeasible, PrefixOfFeasibleRouteIsFeasible) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::UniformInt(rng, 2, 6);
    const Instance inst = testing::RandomEuclideanInstance(rng, n, testing::AlphaLaw::kAny);
    testing::ForEachPermutation(n, [&](const std::vector<int>& order) {
      if (!CheckSirFeasible(inst, Order(order)).feasible) return;
      for (int k = 1; k < n; ++k) {
        std::vector<int> labels(order.begin(), order.begin() + k);
        std::vector<int> sub_points = labels;
        sub_points.push_back(n);
        std::vector<double> sub_alphas;
        for (int p : labels) sub_alphas.push_back(inst.alphas()[p]);
        const Instance sub(inst.points().Submatrix(sub_points), DropoffMode::kSingle,
                           inst.alpha_op(), sub_alphas);
        std::vector<int> identity(k);
        for (int i = 0; i < k; ++i) identity[i] = i;
        EXPECT_TRUE(CheckSirFeasible(sub, Order(identity)).feasible);
      }
    });
  }
}

TEST(Witness, SingleRiderPaysExclusiveFare) {
  const Instance inst(FromEuclidean({{4}, {0}}), DropoffMode::kSingle, 2.5, {1.0});
  const CostShareTable t = WitnessScheme(inst, Order({0}));
  EXPECT_DOUBLE_EQ(t.share(0, 0), 10.0);
}

TEST(Witness, TwoRiders) {
  const Instance inst = TwoRiders();
  const CostShareTable t = WitnessScheme(inst, Order({0, 1}));
  EXPECT_DOUBLE_EQ(t.share(0, 1), 9.0);
  EXPECT_DOUBLE_EQ(t.share(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(t.StageTotal(1), 11.0);
  EXPECT_LE(t.share(1, 1), 6.0);
  EXPECT_TRUE(CheckSequentiallyRational(inst, Order({0, 1}), t).holds);
}

TEST(Witness, InfeasibleRouteCarriesStage) {
  try {
    WitnessScheme(TwoRiders(), Order({1, 0}));
    FAIL() << "expected a feasibility error";
  } catch (const FeasibilityError& e) {
    EXPECT_EQ(e.stage(), 2);
  }
}

TEST(Witness, BalancedAtEveryPrefixAndMonotone) {
  Rng rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::UniformInt(rng, 1, 6);
    const Instance inst = testing::RandomEuclideanInstance(rng, n, testing::AlphaLaw::kAny);
    testing::ForEachPermutation(n, [&](const std::vector<int>& order) {
      const Route r = Order(order);
      if (!CheckSirFeasible(inst, r).feasible) return;
      const CostShareTable t = WitnessScheme(inst, r);
      const StageCosts c = ComputeStageCosts(inst, r);
      for (int s = 0; s < n; ++s) {
        EXPECT_NEAR(t.StageTotal(s), c.oc[s], 1e-9 * c.oc[s]);
      }
      const DisutilityTrace trace = ComputeDisutility(c, t);
      for (int i = 0; i < n; ++i) {
        for (int k = 1; k <= n; ++k) {
          EXPECT_LE(trace.du[i][k], trace.du[i][k - 1] + 1e-9 * trace.du[i][0]);
        }
      }
    });
  }
}

// Multi-dropoff routes use the stage-cost form. The witness built on a
// feasible route must be SIR, and infeasible routes must be refused.
TEST(Witness, MultiDropoffRoutes) {
  Rng rng(41);
  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = testing::UniformInt(rng, 2, 4);
    const double alpha_op = testing::Uniform(rng, 0.5, 2.0);
    const Instance inst(FromEuclidean(testing::RandomPoints(rng, 2 * n)), DropoffMode::kMulti,
                        alpha_op, testing::RandomAlphas(rng, n, alpha_op, testing::AlphaLaw::kAny));
    // Random interleaving: pickups in a random order, each dropoff after
    // its pickup.
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<RouteEvent> events;
    std::vector<int> aboard;
    for (int p : order) {
      events.push_back({EventKind::kPickup, p});
      aboard.push_back(p);
      while (!aboard.empty() && testing::UniformInt(rng, 0, 2) == 0) {
        const int k = testing::UniformInt(rng, 0, static_cast<int>(aboard.size()) - 1);
        events.push_back({EventKind::kDropoff, aboard[k]});
        aboard.erase(aboard.begin() + k);
      }
    }
    std::shuffle(aboard.begin(), aboard.end(), rng);
    for (int p : aboard) events.push_back({EventKind::kDropoff, p});
    const Route r(events);
    const FeasibilityReport report = CheckSirFeasible(inst, r);
    if (report.feasible) {
      ++feasible;
      const CostShareTable t = WitnessScheme(inst, r);
      EXPECT_TRUE(CheckSequentiallyRational(inst, r, t).holds);
    } else {
      EXPECT_THROW(WitnessScheme(inst, r), FeasibilityError);
    }
  }
  EXPECT_GT(feasible, 0);
}

}  // namespace
}  // namespace sirshare
