#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sirshare/errors.h"
#include "sirshare/instance.h"
#include "support/corpus.h"

namespace sirshare {
namespace {

using testing::Rng;

TEST(DistanceTable, RejectsRaggedAndNonFinite) {
  EXPECT_THROW(DistanceTable::FromRows({{0, 1}, {1}}), MalformedInputError);
  EXPECT_THROW(DistanceTable::FromRows({{0, NAN}, {NAN, 0}}), MalformedInputError);
}

TEST(ValidateMetric, LinePointsAreMetric) {
  const DistanceTable t = FromEuclidean({{0}, {1}, {2}});
  const MetricReport r = ValidateMetric(t);
  EXPECT_TRUE(r.metric_flag);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_DOUBLE_EQ(t(0, 2), 2.0);
}

TEST(ValidateMetric, ReportsTriangleViolation) {
  const DistanceTable t = DistanceTable::FromRows({{0, 1, 10}, {1, 0, 1}, {10, 1, 0}});
  const MetricReport r = ValidateMetric(t);
  EXPECT_FALSE(r.metric_flag);
  ASSERT_FALSE(r.violations.empty());
  bool found = false;
  for (const MetricViolation& v : r.violations) {
    if (v.kind == MetricViolation::Kind::kTriangle && v.a == 0 && v.b == 1 && v.c == 2) {
      found = true;
      EXPECT_DOUBLE_EQ(v.excess, 8.0);
    }
  }
  EXPECT_TRUE(found);
}

TEST(ValidateMetric, ReportsAsymmetryNegativityAndDiagonal) {
  DistanceTable t(2);
  t.SetDirected(0, 1, 1.0);
  t.SetDirected(1, 0, 2.0);
  t.SetDirected(1, 1, 0.5);
  const MetricReport r = ValidateMetric(t);
  bool asym = false;
  bool diag = false;
  for (const MetricViolation& v : r.violations) {
    asym |= v.kind == MetricViolation::Kind::kAsymmetric;
    diag |= v.kind == MetricViolation::Kind::kNonzeroDiagonal;
  }
  EXPECT_TRUE(asym);
  EXPECT_TRUE(diag);

  DistanceTable neg(2);
  neg.Set(0, 1, -1.0);
  bool negative = false;
  for (const MetricViolation& v : ValidateMetric(neg).violations) {
    negative |= v.kind == MetricViolation::Kind::kNegative;
  }
  EXPECT_TRUE(negative);
}

TEST(FromEuclidean, Basics) {
  EXPECT_DOUBLE_EQ(FromEuclidean({{0, 0}, {3, 4}})(0, 1), 5.0);
  const DistanceTable one = FromEuclidean({{1.5, 2.5}});
  EXPECT_EQ(one.size(), 1);
  EXPECT_EQ(one(0, 0), 0.0);
  EXPECT_THROW(FromEuclidean({{0, 0}, {1}}), MalformedInputError);
}

TEST(FromEuclidean, AlwaysMetricOnRandomClouds) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int count = testing::UniformInt(rng, 1, 9);
    const DistanceTable t = FromEuclidean(testing::RandomPoints(rng, count));
    EXPECT_TRUE(t.metric_flag());
    EXPECT_TRUE(ValidateMetric(t).metric_flag);
  }
}

TEST(Instance, ValidatesShapeAndWeights) {
  const DistanceTable t = FromEuclidean({{0}, {1}, {2}});
  EXPECT_NO_THROW(Instance(t, DropoffMode::kSingle, 1.0, {1.0, 1.0}));
  EXPECT_THROW(Instance(t, DropoffMode::kSingle, 1.0, {1.0}), MalformedInputError);
  EXPECT_THROW(Instance(t, DropoffMode::kSingle, 0.0, {1.0, 1.0}), MalformedInputError);
  EXPECT_THROW(Instance(t, DropoffMode::kSingle, 1.0, {1.0, -0.5}), MalformedInputError);
  const DistanceTable four = FromEuclidean({{0}, {1}, {2}, {3}});
  EXPECT_NO_THROW(Instance(four, DropoffMode::kMulti, 1.0, {1.0, 1.0}));
}

TEST(Instance, ZeroRegimeHidesAlphas) {
  const Instance inst(FromEuclidean({{0}, {1}, {2}}), DropoffMode::kSingle, 1.0, {2.0, 3.0},
                      Regime::kZeroLimit);
  EXPECT_EQ(inst.effective_alpha(1), 0.0);
  EXPECT_EQ(inst.WithRegime(Regime::kFinite).effective_alpha(1), 3.0);
}

TEST(ValidateRoute, CatchesMalformedRoutes) {
  const Instance single(FromEuclidean({{0}, {1}, {2}}), DropoffMode::kSingle, 1.0, {1.0, 1.0});
  EXPECT_NO_THROW(ValidateRoute(single, Route::SingleDropoff(std::vector<int>{1, 0})));
  EXPECT_THROW(ValidateRoute(single, Route::SingleDropoff(std::vector<int>{1})),
               PreconditionError);
  EXPECT_THROW(ValidateRoute(single, Route({{EventKind::kPickup, 0},
                                            {EventKind::kDropoff, 0},
                                            {EventKind::kPickup, 1},
                                            {EventKind::kDropoff, 1}})),
               PreconditionError);

  const Instance multi(FromEuclidean({{0}, {1}, {2}, {3}}), DropoffMode::kMulti, 1.0, {1.0, 1.0});
  EXPECT_NO_THROW(ValidateRoute(multi, Route({{EventKind::kPickup, 0},
                                              {EventKind::kDropoff, 0},
                                              {EventKind::kPickup, 1},
                                              {EventKind::kDropoff, 1}})));
  EXPECT_THROW(ValidateRoute(multi, Route({{EventKind::kDropoff, 0},
                                           {EventKind::kPickup, 0},
                                           {EventKind::kPickup, 1},
                                           {EventKind::kDropoff, 1}})),
               PreconditionError);
}

TEST(LowerBoundInstance, EqualWeightsNThree) {
  const Instance inst = GenerateLowerBoundInstance(3, 1.0, {1, 1, 1}, 1.0);
  const DistanceTable& t = inst.points();
  EXPECT_DOUBLE_EQ(t(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(t(1, 2), 1.0 / 3.0);
  for (int j = 0; j < 3; ++j) EXPECT_DOUBLE_EQ(t(j, 3), 1.0);
  EXPECT_GT(t(0, 2), 0.5);
  EXPECT_TRUE(ValidateMetric(t).metric_flag);
  EXPECT_TRUE(t.metric_flag());
}

TEST(LowerBoundInstance, NOneIsTrivial) {
  const Instance inst = GenerateLowerBoundInstance(1, 1.0, {1}, 2.0);
  EXPECT_EQ(inst.num_passengers(), 1);
  EXPECT_DOUBLE_EQ(inst.direct_distance(0), 2.0);
}

TEST(LowerBoundInstance, RandomWeightsStayMetricAndStrict) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = testing::UniformInt(rng, 2, 8);
    const double alpha_op = testing::Uniform(rng, 0.5, 2.0);
    const std::vector<double> alphas =
        testing::RandomAlphas(rng, n, alpha_op, testing::AlphaLaw::kSensitive);
    const Instance inst = GenerateLowerBoundInstance(n, alpha_op, alphas, 1.0);
    const DistanceTable& t = inst.points();
    EXPECT_TRUE(ValidateMetric(t).metric_flag);
    double prefix = 0.0;
    for (int j = 1; j < n; ++j) {
      prefix += alphas[j - 1];
      const double z = 1.0 / (1.0 + prefix / alpha_op);
      EXPECT_NEAR(t(j - 1, j), z, 1e-12);
      for (int k = j + 1; k < n; ++k) EXPECT_GT(t(j - 1, k), t(j - 1, j));
    }
  }
}

TEST(LowerBoundInstance, RejectsBadParameters) {
  EXPECT_THROW(GenerateLowerBoundInstance(0, 1.0, {}, 1.0), PreconditionError);
  EXPECT_THROW(GenerateLowerBoundInstance(2, 1.0, {1, 1}, 0.0), PreconditionError);
  EXPECT_THROW(GenerateLowerBoundInstance(2, 1.0, {1}, 1.0), PreconditionError);
}

TEST(SqrtTightInstance, Distances) {
  const Instance two = GenerateSqrtTightInstance(2, 1.0);
  EXPECT_DOUBLE_EQ(two.direct_distance(0), 1.0);
  EXPECT_NEAR(two.direct_distance(1), 4.0 / 3.0, 1e-15);
  const Instance one = GenerateSqrtTightInstance(1, 3.0);
  EXPECT_DOUBLE_EQ(one.direct_distance(0), 3.0);
  const Instance five = GenerateSqrtTightInstance(5, 1.0);
  for (int j = 1; j <= 5; ++j) {
    EXPECT_NEAR(five.direct_distance(j - 1),
                testing::CentralProductOracle(j) / testing::CentralProductOracle(1), 1e-12);
  }
}

TEST(ExpTightInstance, Distances) {
  const Instance inst = GenerateExpTightInstance(3, 1.0);
  EXPECT_EQ(inst.regime(), Regime::kZeroLimit);
  EXPECT_DOUBLE_EQ(inst.direct_distance(0), 1.0);
  EXPECT_DOUBLE_EQ(inst.direct_distance(1), 2.0);
  EXPECT_DOUBLE_EQ(inst.direct_distance(2), 4.0);
  EXPECT_DOUBLE_EQ(GenerateExpTightInstance(1, 2.5).direct_distance(0), 2.5);
}

TEST(ReduceHamiltonianPath, DistancesAndFlag) {
  SimpleGraph path{3, {{0, 1}, {1, 2}}};
  const Instance inst = ReduceHamiltonianPath(path, 3.0);
  const DistanceTable& t = inst.points();
  EXPECT_DOUBLE_EQ(t(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(t(1, 2), 1.0);
  EXPECT_DOUBLE_EQ(t(0, 2), 3.0);
  for (int v = 0; v < 3; ++v) EXPECT_DOUBLE_EQ(t(v, 3), 3.0);
  EXPECT_FALSE(t.metric_flag());
  EXPECT_FALSE(ValidateMetric(t).metric_flag);
}

TEST(ReducePathTsp, BigDropoffDistance) {
  const DistanceTable m = FromEuclidean({{0}, {1}, {3}});
  const Instance inst = ReducePathTsp(m);
  const double big_l = inst.direct_distance(0);
  EXPECT_GT(big_l, 3 * 3.0);
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(inst.direct_distance(i), big_l);
  EXPECT_DOUBLE_EQ(inst.points()(0, 2), 3.0);
  EXPECT_THROW(ReducePathTsp(DistanceTable(3)), ConstructionError);
  EXPECT_THROW(ReducePathTsp(DistanceTable::FromRows({{0, 1, 10}, {1, 0, 1}, {10, 1, 0}})),
               PreconditionError);
}

}  // namespace
}  // namespace sirshare
