#include "aamr/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"

namespace aamr {
namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(Dykstra, ThirdQuadrant) {
  const OracleResult r = dykstra(ConvexSet::halfspace(vec({1, 0}), 0),
                                 ConvexSet::halfspace(vec({0, 1}), 0), vec({1, 1}), 1000, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.point.norm(), 1e-12);
}

TEST(Dykstra, SingleSet) {
  const ConvexSet ball = ConvexSet::ball(vec({0, 0}), 1);
  const OracleResult r = dykstra(ball, ball, vec({2, 0}), 1000, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.point - vec({1, 0})).norm(), 1e-12);
}

// Segment {u >= 0, u1 + u2 = 1}: dense grid search in t gives the minimizer.
TEST(Dykstra, MatchesGridSearchOnSegment) {
  const Vector q = vec({2, -1});
  const Vector grid = testing::grid_search_segment(vec({0, 1}), vec({1, 0}), q, 1e-4);
  EXPECT_LE((grid - vec({1, 0})).norm(), 1e-12);
  const OracleResult r = dykstra(ConvexSet::hyperplane(vec({1, 1}), 1),
                                 ConvexSet::nonneg_orthant(2), q, 100000, 1e-12);
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.point - grid).norm(), 1e-4);
}

TEST(Dykstra, ClosedForms) {
  testing::Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const Index d = testing::uniform_int(rng, 1, 6);
    // Box ∩ box = box of the componentwise max/min bounds.
    const Vector l1 = testing::random_vector(rng, d), l2 = testing::random_vector(rng, d);
    const Vector lo = l1.cwiseMax(l2);
    const Vector hi = lo + testing::random_vector(rng, d).cwiseAbs();
    const Vector u1 = hi + testing::random_vector(rng, d).cwiseAbs();
    const Vector u2 = hi;
    const Vector q = testing::random_vector(rng, d, 3.0);
    const OracleResult r =
        dykstra(ConvexSet::box(l1, u1), ConvexSet::box(l2, u2), q, 100000, 1e-12);
    EXPECT_LE((r.point - q.cwiseMax(lo).cwiseMin(hi)).norm(), 1e-8);

    // Ball ∩ halfspace through the center: projection onto the halfspace
    // then radial scaling.
    const Vector c = testing::random_vector(rng, d);
    const Vector a = testing::random_vector(rng, d);
    const ConvexSet ball = ConvexSet::ball(c, 1.0);
    const ConvexSet half = ConvexSet::halfspace(a, a.dot(c));
    const Vector expected = project(ball, project(half, q));
    const OracleResult r2 = dykstra(ball, half, q, 100000, 1e-12);
    EXPECT_LE((r2.point - expected).norm(), 1e-8);
  }
  // Two orthogonal hyperplanes in R^3 meet in a line.
  const OracleResult r3 = dykstra(ConvexSet::hyperplane(vec({1, 0, 0}), 1),
                                  ConvexSet::hyperplane(vec({0, 1, 0}), 2), vec({5, 5, 5}), 1000,
                                  1e-12);
  EXPECT_LE((r3.point - vec({1, 2, 5})).norm(), 1e-8);
}

TEST(Dykstra, ReportsExhaustedBudget) {
  const OracleResult r = dykstra(ConvexSet::halfspace(vec({1, 0}), -1),
                                 ConvexSet::halfspace(vec({-1, 0}), -1), vec({0, 0}), 50, 1e-12);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 50);
  EXPECT_NEAR(r.gap, 2.0, 1e-12);
  EXPECT_THROW(dykstra(ConvexSet::nonneg_orthant(2), ConvexSet::nonneg_orthant(2), vec({0, 0}), 0,
                       1e-12),
               InvalidInput);
}

TEST(AlternatingProjections, Examples) {
  const ConvexSet ball = ConvexSet::ball(vec({0, 0}), 1);
  const OracleResult same = alternating_projections(ball, ball, vec({5, 5}), 100, 1e-12);
  EXPECT_EQ(same.gap, 0.0);
  EXPECT_EQ(same.iterations, 1);

  Eigen::MatrixXd rows(1, 2);
  rows << 0, 1;
  const ConvexSet line = ConvexSet::affine(rows, vec({1}));
  const ConvexSet shifted_orthant =
      ConvexSet::shifted(ConvexSet::nonneg_orthant(2), vec({0.1, 0.1}));
  const OracleResult feasible =
      alternating_projections(line, shifted_orthant, vec({-5, -5}), 100000, 1e-9);
  EXPECT_LE(feasible.gap, 1e-7);

  const OracleResult apart =
      alternating_projections(ConvexSet::halfspace(vec({1, 0}), -1),
                              ConvexSet::halfspace(vec({-1, 0}), -1), vec({0, 0}), 1000, 1e-9);
  EXPECT_FALSE(apart.converged);
  EXPECT_NEAR(apart.gap, 2.0, 1e-12);
  EXPECT_LT(apart.iterations, 1000);  // stall detection
}

}  // namespace
}  // namespace aamr
