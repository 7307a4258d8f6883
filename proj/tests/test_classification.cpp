#include "ilo/classification.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ilo;

namespace {

Point pt(std::initializer_list<double> v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) p(k++) = x;
  return p;
}

DomainOracle ellipse41() {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 0) = 4;
  a(1, 1) = 1;
  return EllipsoidDomain(SymMatrix(a));
}

ElliptopeMatrix em(const Matrix& m) { return ElliptopeMatrix::validated(m); }

ElliptopeMatrix reducible3() {
  Matrix m(3, 3);
  m << 1, 1, 0, 1, 1, 0, 0, 0, 1;
  return em(m);
}

}  // namespace

TEST(Empirical, DiskA) {
  const DomainOracle disk = BallDomain(pt({1, 0}), 2.0);
  const auto r = classify_empirical(disk, pt({3, 0}));
  EXPECT_EQ(r.label, FixedPointLabel::attractive);
  EXPECT_EQ(r.returned + r.escaped, r.samples);
}

TEST(Empirical, DiskR) {
  const DomainOracle disk = BallDomain(pt({1, 0}), 2.0);
  EXPECT_EQ(classify_empirical(disk, pt({-1, 0})).label, FixedPointLabel::repelling);
}

TEST(Empirical, EllipseMinorAxisRepels) {
  EXPECT_EQ(classify_empirical(ellipse41(), pt({0, 1})).label, FixedPointLabel::repelling);
  EXPECT_EQ(classify_empirical(ellipse41(), pt({2, 0})).label, FixedPointLabel::attractive);
}

TEST(Empirical, ConeBaseCircleIsNeither) {
  const DomainOracle cone = ConeDomain(pt({0, 0, 2}), pt({0, 0, 0}), 1.0);
  EXPECT_EQ(classify_empirical(cone, pt({1, 0, 0})).label, FixedPointLabel::neither);
}

TEST(Empirical, TooFewSamplesCannotBeAttractive) {
  const DomainOracle disk = BallDomain(pt({1, 0}), 2.0);
  ClassificationConfig cfg;
  cfg.samples = 8;
  const auto r = classify_empirical(disk, pt({3, 0}), cfg);
  EXPECT_EQ(r.returned, 8);
  EXPECT_EQ(r.label, FixedPointLabel::indeterminate);
}

TEST(Empirical, NotFixedRejected) {
  const DomainOracle disk = BallDomain(pt({1, 0}), 2.0);
  EXPECT_THROW(classify_empirical(disk, pt({0, 1})), NotFixedPoint);
}

TEST(Empirical, AgreesWithCurvature) {
  // disk: k = 1/r; ellipse diag(a², b²): k = a/b² at (±a,0), b/a² at (0,±b)
  const BallDomain d(pt({1, 0}), 2.0);
  for (const auto& lp : ball_fixed_points(d).points)
    EXPECT_EQ(classify_empirical(DomainOracle(d), lp.point).label, curvature_classify_2d(0.5, lp.point));
  const std::vector<std::pair<Point, double>> e{
      {pt({2, 0}), 2.0}, {pt({-2, 0}), 2.0}, {pt({0, 1}), 0.25}, {pt({0, -1}), 0.25}};
  for (const auto& [x, k] : e)
    EXPECT_EQ(classify_empirical(ellipse41(), x).label, curvature_classify_2d(k, x));
}

TEST(Empirical, ScheduleIndependent) {
  ClassificationConfig a, b;
  b.threads = 4;
  const auto ra = classify_empirical(ellipse41(), pt({0, 1}), a);
  const auto rb = classify_empirical(ellipse41(), pt({0, 1}), b);
  EXPECT_EQ(ra.returned, rb.returned);
  EXPECT_EQ(ra.left_ball, rb.left_ball);
}

TEST(Empirical, L3CensusAgreesWithStructuralLabel) {
  const ElliptopeOracle t;
  ClassificationConfig cfg;
  cfg.samples = 32;
  for (const auto& e : l3_census()) {
    const auto r = classify_empirical(t, e.x, cfg);
    if (e.group == CensusGroup::vertex)
      EXPECT_EQ(r.label, FixedPointLabel::attractive);
    else
      EXPECT_NE(r.label, FixedPointLabel::attractive);
  }
}

TEST(Basin, Examples) {
  const auto j = em(Matrix::Ones(3, 3));
  Matrix m = Matrix::Constant(3, 3, 0.9);
  m.diagonal().setOnes();
  EXPECT_TRUE(vertex_basin_check(j, em(m)));
  EXPECT_TRUE(vertex_basin_check(j, j));
  Matrix far = Matrix::Ones(3, 3);
  far(0, 1) = far(1, 0) = -0.5;
  EXPECT_THROW(vertex_basin_check(j, ElliptopeMatrix::trusted(SymMatrix(far))), PreconditionError);
  EXPECT_THROW(vertex_basin_check(em(Matrix::Identity(3, 3)), j), PreconditionError);
}

TEST(Escape, Examples) {
  const auto x = reducible3();
  EXPECT_EQ(escape_curve(x, 0.0).mat(), x.mat());
  const auto x1 = escape_curve(x, 0.1);
  EXPECT_GT(inner_product(x1, x1), 5.0);
  const auto id = em(Matrix::Identity(4, 4));
  const auto h = escape_curve(id, 0.5);
  EXPECT_GT(inner_product(h, h), 4.0);
  EXPECT_THROW(escape_curve(em(Matrix::Ones(3, 3)), 0.5), PreconditionError);
}

TEST(Escape, MatchesGramConstruction) {
  // X̂(α) rebuilt from an explicit Gram factor
  const auto x = sign_kernel_fixed_point({1, 1, 1});
  const auto pair = escape_pair(x);
  const Matrix v = psd_factor(x.mat());
  for (double a : {0.1, 0.37, 0.8}) {
    Matrix w = v;
    const Eigen::RowVectorXd u = (1 - a) * v.row(pair.i) + a * pair.sign * v.row(pair.j);
    w.row(pair.i) = u / u.norm();
    Matrix g = w * w.transpose();
    g.diagonal().setOnes();
    EXPECT_LE((escape_curve(x, pair, a).mat() - g).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Escape, MonotoneAndFeasibleOnCensus) {
  for (const auto& e : l3_census()) {
    if (e.group == CensusGroup::vertex) continue;
    const auto w = escape_witness(e.x);
    double prev = w.base_norm_sq;
    for (std::size_t k = 0; k < w.alphas.size(); ++k) {
      EXPECT_GT(w.norms_sq[k], prev);
      prev = w.norms_sq[k];
      const auto xa = escape_curve(e.x, w.pair, w.alphas[k]);
      EXPECT_GE(min_eigenvalue(xa.mat()), -1e-9);
      EXPECT_EQ(xa.mat().diagonal(), Vector::Ones(3));
    }
  }
}

TEST(Structural, Labels) {
  EXPECT_EQ(classify_elliptope_fixed_point(em(Matrix::Ones(3, 3))).label, FixedPointLabel::attractive);
  const auto p = classify_elliptope_fixed_point(sign_kernel_fixed_point({1, 1, 1}));
  EXPECT_EQ(p.label, FixedPointLabel::not_attractive);
  EXPECT_TRUE(p.witness.has_value());
  const auto i = classify_elliptope_fixed_point(em(Matrix::Identity(5, 5)));
  EXPECT_EQ(i.label, FixedPointLabel::not_attractive);
  EXPECT_TRUE(i.witness.has_value());
  Matrix g(3, 3);
  g << 1, 0.2, 0.1, 0.2, 1, 0.3, 0.1, 0.3, 1;
  EXPECT_THROW(classify_elliptope_fixed_point(em(g)), NotFixedPoint);
}

TEST(Property, VertexBasin) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0, 1);
  std::uniform_int_distribution<int> pick(4, 8);
  for (int t = 0; t < 100; ++t) {
    const int n = pick(rng);
    SignVector s(n);
    for (auto& si : s) si = g(rng) < 0 ? -1 : 1;
    const auto x = vertex_from_signs(s);
    Matrix v = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) v(i, 0) = s[i];
    Matrix noise(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) noise(i, j) = g(rng);
    // shrink a random-size perturbation until it is inside the unit ball around X
    double scale = (0.2 + 2.0 * std::abs(g(rng))) / noise.norm();
    ElliptopeMatrix m;
    do {
      m = gram_to_matrix(GramFactor::normalized(v + scale * noise));
      scale *= 0.5;
    } while (distance(m, x) >= 1.0);
    EXPECT_TRUE(vertex_basin_check(x, m));
  }
}
