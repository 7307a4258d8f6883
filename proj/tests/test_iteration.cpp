#include "ilo/domains.hpp"
#include "ilo/elliptope.hpp"
#include "ilo/iteration.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace ilo;

namespace {

Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

}  // namespace

TEST(Iterate, DiskConvergesToA) {
  const DomainOracle disk = BallDomain(pt(1, 0), 2.0);
  const auto t = iterate(disk, pt(0, 1.5));
  EXPECT_EQ(t.status, IterationStatus::converged);
  EXPECT_LE((t.final_point() - pt(3, 0)).norm(), 1e-8);
  EXPECT_LE(t.final_residual, 1e-9);
  EXPECT_TRUE(check_monotone(t).passed);
}

TEST(Iterate, PolytopeOneStep) {
  std::vector<Point> v{pt(1, 1), pt(-1, 1), pt(-1, -1), pt(1, -1)};
  const DomainOracle sq = PolytopeDomain(v);
  const auto t = iterate(sq, pt(0.3, 0.2));
  ASSERT_GE(t.points.size(), 2u);
  EXPECT_EQ(t.points[1], pt(1, 1));
  EXPECT_EQ(t.final_point(), pt(1, 1));
  EXPECT_EQ(t.step_norms.back(), 0.0);
}

TEST(Iterate, CenteredCircleImmediate) {
  const DomainOracle c = BallDomain(pt(0, 0), 1.0);
  const auto t = iterate(c, pt(0.6, 0.8));
  EXPECT_EQ(t.status, IterationStatus::converged);
  EXPECT_EQ(t.iterations(), 1u);
  EXPECT_LE((t.final_point() - pt(0.6, 0.8)).norm(), 1e-15);
}

TEST(Iterate, RejectsInfeasibleStart) {
  const DomainOracle disk = BallDomain(pt(1, 0), 2.0);
  EXPECT_THROW(iterate(disk, pt(5, 5)), InfeasibleStart);
  IterationConfig cfg;
  cfg.validate_start = false;
  EXPECT_NO_THROW(iterate(disk, pt(5, 5), cfg));
}

TEST(Iterate, ConfigValidation) {
  const DomainOracle disk = BallDomain(pt(1, 0), 2.0);
  IterationConfig cfg;
  cfg.tol = 0;
  EXPECT_THROW(iterate(disk, pt(0, 1), cfg), InvalidArgument);
  cfg.tol = 1e-10;
  cfg.max_iter = 0;
  EXPECT_THROW(iterate(disk, pt(0, 1), cfg), InvalidArgument);
}

TEST(Iterate, StallOnConeBaseCircle) {
  // every base-circle point is fixed; starting there converges immediately
  Point apex(3), base(3), x(3);
  apex << 0, 0, 2;
  base << 0, 0, 0;
  x << 1, 0, 0;
  const DomainOracle cone = ConeDomain(apex, base, 1.0);
  const auto t = iterate(cone, x);
  EXPECT_EQ(t.status, IterationStatus::converged);
}

TEST(Monotone, ReversedTrajectoryFailsAtZero) {
  const DomainOracle disk = BallDomain(pt(1, 0), 2.0);
  auto t = iterate(disk, pt(0, 1.5));
  std::reverse(t.norms_sq.begin(), t.norms_sq.end());
  std::reverse(t.step_norms.begin(), t.step_norms.end());
  const auto r = check_monotone(t);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.first_violation.has_value());
  // the reversed converged tail is flat, so the first drop comes later
  const std::size_t v = *r.first_violation;
  EXPECT_GT(t.norms_sq[v], t.norms_sq[v + 1]);
}

TEST(Monotone, EllipseFromNearMinorAxis) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 4;
  a(1, 1) = 1;
  const DomainOracle e = EllipsoidDomain(SymMatrix(a));
  const auto t = iterate(e, pt(0.1, 0.99));
  EXPECT_TRUE(check_monotone(t).passed);
  EXPECT_EQ(t.status, IterationStatus::converged);
  EXPECT_LE((t.final_point() - pt(2, 0)).norm(), 1e-8);
}

TEST(Objective, HalfNormSquared) {
  Trajectory<Vector> t;
  t.norms_sq = {1, 2, 2.5};
  const auto f = objective_interpretation(t);
  EXPECT_EQ(f, (std::vector<double>{0.5, 1.0, 1.25}));
}

TEST(Objective, DiskStrictlyIncreasing) {
  const DomainOracle disk = BallDomain(pt(1, 0), 2.0);
  const auto t = iterate(disk, pt(0, 1.5));
  const auto f = objective_interpretation(t);
  // strictly increasing until rounding takes over near the limit
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    if (f.back() - f[i + 1] > 1e-12)
      EXPECT_LT(f[i], f[i + 1]) << i;
    else
      EXPECT_NEAR(f[i + 1], f.back(), 1e-12);
  }
}

TEST(Csv, ColumnsAndPrecision) {
  const DomainOracle disk = BallDomain(pt(1, 0), 2.0);
  const auto t = iterate(disk, pt(0, 1.5));
  std::ostringstream os;
  write_trajectory_csv(os, t);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "iter,x0,x1,norm_sq,step_norm,residual");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0,0,1.5,", 0), 0u) << line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows + 1, t.points.size());
}

TEST(Elliptope, IterationIsMonotone) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0, 1);
  const ElliptopeOracle oracle;
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + t % 6;
    Matrix v(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v(i, j) = g(rng);
    const auto x0 = gram_to_matrix(GramFactor::normalized(v));
    const auto traj = iterate(oracle, x0.sym());
    EXPECT_TRUE(check_monotone(traj).passed) << "n=" << n;
  }
}
