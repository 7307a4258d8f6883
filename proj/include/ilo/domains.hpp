#pragma once

// Low-dimensional convex domains and their linear-maximization maps
// T(x) = argmax_{y in domain} x·y, with closed-form fixed points where
// they exist.

#include "ilo/linalg.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ilo {

using Point = Vector;

/// not_attractive: proven non-attractive (elliptope non-vertex fixed points)
/// without a claim about repulsion.
enum class FixedPointLabel { attractive, repelling, neither, indeterminate, not_attractive };

inline std::string_view to_string(FixedPointLabel l) {
  switch (l) {
    case FixedPointLabel::attractive: return "attractive";
    case FixedPointLabel::repelling: return "repelling";
    case FixedPointLabel::neither: return "neither";
    case FixedPointLabel::indeterminate: return "indeterminate";
    case FixedPointLabel::not_attractive: return "not_attractive";
  }
  return "indeterminate";
}

/// Default tolerances; overridable per call.
struct DomainTolerances {
  double feasibility = 1e-10;
  double classification_margin = 1e-8;
};

namespace detail {

inline void require_dim(const Point& x, Eigen::Index d, const char* what) {
  if (x.size() != d)
    throw InvalidArgument(std::string(what) + ": dimension mismatch (expected " +
                          std::to_string(d) + ", got " + std::to_string(x.size()) + ")");
}

inline void require_finite(const Point& x, const char* what) {
  if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite coordinates");
}

}  // namespace detail

// ---------------------------------------------------------------- ball

struct BallDomain {
  Point center;
  double radius = 1.0;

  BallDomain() = default;
  BallDomain(Point c, double r) : center(std::move(c)), radius(r) {
    detail::require_finite(center, "BallDomain");
    if (!(radius > 0.0)) throw InvalidArgument("BallDomain: radius must be positive");
  }

  Eigen::Index dim() const { return center.size(); }
  bool contains_origin() const { return center.norm() < radius; }
};

/// c + r·x/‖x‖. Every point maximizes when x = 0; the center is returned.
inline Point ball_oracle(const BallDomain& dom, const Point& x) {
  detail::require_dim(x, dom.dim(), "ball_oracle");
  const double nx = x.norm();
  if (nx == 0.0) return dom.center;
  return dom.center + (dom.radius / nx) * x;
}

struct LabeledPoint {
  Point point;
  FixedPointLabel label;
};

struct BallFixedPoints {
  /// Set when the center is the origin: every boundary point is fixed and
  /// none is individually attractive or repelling.
  bool whole_boundary = false;
  std::vector<LabeledPoint> points;
};

/// The two fixed points where the line through the origin and the center
/// meets the circle: A = c(1 + r/‖c‖) attractive, R = c(1 − r/‖c‖)
/// repelling.
inline BallFixedPoints ball_fixed_points(const BallDomain& dom) {
  const double nc = dom.center.norm();
  if (nc > dom.radius)
    throw InvalidArgument("ball_fixed_points: origin lies outside the ball");
  BallFixedPoints out;
  if (nc == 0.0) {
    out.whole_boundary = true;
    return out;
  }
  out.points.push_back({dom.center * (1.0 + dom.radius / nc), FixedPointLabel::attractive});
  out.points.push_back({dom.center * (1.0 - dom.radius / nc), FixedPointLabel::repelling});
  return out;
}

// ----------------------------------------------------------- ellipsoid

/// {y : yᵀ A⁻¹ y ≤ 1} for symmetric positive definite A.
struct EllipsoidDomain {
  SymMatrix shape;
  Matrix shape_inv;

  EllipsoidDomain() = default;
  explicit EllipsoidDomain(SymMatrix a, double pd_tol = 1e-12) : shape(std::move(a)) {
    if (shape.size() == 0) throw InvalidArgument("EllipsoidDomain: empty shape matrix");
    if (min_eigenvalue(shape.mat()) <= pd_tol)
      throw InvalidArgument("EllipsoidDomain: shape matrix is not positive definite");
    shape_inv = shape.mat().inverse();
  }

  Eigen::Index dim() const { return shape.size(); }
};

/// A·x / √(xᵀAx); for x = 0 the canonical point A·e₁/√A₁₁.
inline Point ellipsoid_oracle(const EllipsoidDomain& dom, const Point& x) {
  detail::require_dim(x, dom.dim(), "ellipsoid_oracle");
  const Matrix& a = dom.shape.mat();
  if (x.isZero(0.0)) return a.col(0) / std::sqrt(a(0, 0));
  const Point ax = a * x;
  return ax / std::sqrt(x.dot(ax));
}

// ------------------------------------------------------------ polytope

/// Convex hull of a finite vertex list.
struct PolytopeDomain {
  std::vector<Point> vertices;

  PolytopeDomain() = default;
  explicit PolytopeDomain(std::vector<Point> v, double dup_tol = 1e-12) : vertices(std::move(v)) {
    if (vertices.empty()) throw InvalidArgument("PolytopeDomain: empty vertex list");
    const auto d = vertices.front().size();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      detail::require_dim(vertices[i], d, "PolytopeDomain");
      detail::require_finite(vertices[i], "PolytopeDomain");
      for (std::size_t j = 0; j < i; ++j)
        if ((vertices[i] - vertices[j]).norm() <= dup_tol)
          throw InvalidArgument("PolytopeDomain: duplicate vertices " + std::to_string(j) +
                                " and " + std::to_string(i));
    }
  }

  Eigen::Index dim() const { return vertices.front().size(); }
};

/// Index of the vertex maximizing x·v; ties go to the lowest index.
inline std::size_t polytope_argmax(const PolytopeDomain& dom, const Point& x) {
  if (dom.vertices.empty()) throw InvalidArgument("polytope_oracle: empty vertex list");
  detail::require_dim(x, dom.dim(), "polytope_oracle");
  std::size_t best = 0;
  double best_val = x.dot(dom.vertices[0]);
  for (std::size_t k = 1; k < dom.vertices.size(); ++k) {
    const double v = x.dot(dom.vertices[k]);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }
  return best;
}

inline Point polytope_oracle(const PolytopeDomain& dom, const Point& x) {
  return dom.vertices[polytope_argmax(dom, x)];
}

// ---------------------------------------------------------------- cone

/// Solid cone: convex hull of an apex and a base disk centered at
/// base_center in the hyperplane orthogonal to the axis.
struct ConeDomain {
  Point apex;
  Point base_center;
  double base_radius = 1.0;

  ConeDomain() = default;
  ConeDomain(Point a, Point c, double r) : apex(std::move(a)), base_center(std::move(c)), base_radius(r) {
    detail::require_finite(apex, "ConeDomain");
    detail::require_dim(base_center, apex.size(), "ConeDomain");
    detail::require_finite(base_center, "ConeDomain");
    if (apex.size() < 2) throw InvalidArgument("ConeDomain: dimension must be at least 2");
    if (!(base_radius > 0.0)) throw InvalidArgument("ConeDomain: degenerate cone (base radius)");
    if ((apex - base_center).norm() == 0.0)
      throw InvalidArgument("ConeDomain: degenerate cone (apex equals base center)");
  }

  Eigen::Index dim() const { return apex.size(); }
  Point axis() const { return (apex - base_center).normalized(); }
  double height() const { return (apex - base_center).norm(); }

  /// Canonical unit direction in the base plane: the first coordinate axis
  /// with a non-negligible projection onto the plane.
  Point canonical_base_direction() const {
    const Point u = axis();
    for (Eigen::Index k = 0; k < dim(); ++k) {
      Point e = Point::Unit(dim(), k);
      e -= e.dot(u) * u;
      if (e.norm() > 1e-8) return e.normalized();
    }
    return Point::Unit(dim(), 0);  // unreachable for dim >= 2
  }
};

/// Maximizes over the extreme points only: the apex and the base circle.
/// Ties go to the apex.
inline Point cone_oracle(const ConeDomain& dom, const Point& x) {
  detail::require_dim(x, dom.dim(), "cone_oracle");
  const Point u = dom.axis();
  const Point x_perp = x - x.dot(u) * u;
  const double perp_norm = x_perp.norm();
  const double apex_val = x.dot(dom.apex);
  const double base_val = x.dot(dom.base_center) + dom.base_radius * perp_norm;
  if (apex_val >= base_val) return dom.apex;
  if (perp_norm <= 1e-15 * x.norm())
    return dom.base_center + dom.base_radius * dom.canonical_base_direction();
  return dom.base_center + (dom.base_radius / perp_norm) * x_perp;
}

// ---------------------------------------------------------- membership

inline bool contains(const BallDomain& dom, const Point& y, double tol = 1e-10) {
  detail::require_dim(y, dom.dim(), "contains");
  return (y - dom.center).norm() <= dom.radius + tol;
}

inline bool contains(const EllipsoidDomain& dom, const Point& y, double tol = 1e-10) {
  detail::require_dim(y, dom.dim(), "contains");
  return y.dot(dom.shape_inv * y) <= 1.0 + tol;
}

inline bool contains(const ConeDomain& dom, const Point& y, double tol = 1e-10) {
  detail::require_dim(y, dom.dim(), "contains");
  const Point u = dom.axis();
  const double h = dom.height();
  const Point rel = y - dom.base_center;
  const double t = rel.dot(u);
  if (t < -tol || t > h + tol) return false;
  const double rho = (rel - t * u).norm();
  return rho <= dom.base_radius * (1.0 - std::clamp(t, 0.0, h) / h) + tol;
}

/// Membership in the vertex hull by Frank–Wolfe on ½‖Vλ − y‖² over the
/// simplex. Stops as soon as either a hull point within `tol` of y is found
/// or the separating hyperplane along y − p certifies distance > tol.
/// Wolfe's min-norm-point algorithm on {v_k − y}: finite, and unaffected by
/// thin or nearly degenerate hulls.
inline bool contains(const PolytopeDomain& dom, const Point& y, double tol = 1e-10) {
  detail::require_dim(y, dom.dim(), "contains");
  const std::size_t m = dom.vertices.size();
  std::vector<Point> q;
  q.reserve(m);
  for (const auto& v : dom.vertices) q.push_back(v - y);
  std::size_t first = 0;
  for (std::size_t k = 1; k < m; ++k)
    if (q[k].squaredNorm() < q[first].squaredNorm()) first = k;
  std::vector<std::size_t> set{first};
  std::vector<double> lam{1.0};
  Point x = q[first];
  for (int major = 0; major < 1000; ++major) {
    const double xn = x.norm();
    if (xn <= tol) return true;
    std::size_t j = 0;
    for (std::size_t k = 1; k < m; ++k)
      if (x.dot(q[k]) < x.dot(q[j])) j = k;
    // Every hull point z has x·z ≥ x·q_j, so dist(y, hull) ≥ x·q_j/‖x‖.
    if (x.dot(q[j]) / xn > tol) return false;
    if (std::find(set.begin(), set.end(), j) != set.end()) break;
    set.push_back(j);
    lam.push_back(0.0);
    for (;;) {
      // affine minimizer over the current set via the bordered normal equations
      const auto ns = static_cast<Eigen::Index>(set.size());
      Matrix kkt = Matrix::Zero(ns + 1, ns + 1);
      for (Eigen::Index a = 0; a < ns; ++a) {
        for (Eigen::Index b = 0; b < ns; ++b) kkt(a, b) = q[set[a]].dot(q[set[b]]);
        kkt(a, ns) = kkt(ns, a) = 1.0;
      }
      Vector rhs = Vector::Zero(ns + 1);
      rhs(ns) = 1.0;
      const Vector alpha = kkt.completeOrthogonalDecomposition().solve(rhs).head(ns);
      if (alpha.minCoeff() > 0.0) {
        for (Eigen::Index a = 0; a < ns; ++a) lam[a] = alpha(a);
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < ns; ++a)
        if (alpha(a) <= 0.0) theta = std::min(theta, lam[a] / (lam[a] - alpha(a)));
      std::vector<std::size_t> keep_set;
      std::vector<double> keep_lam;
      for (Eigen::Index a = 0; a < ns; ++a) {
        const double l = theta * alpha(a) + (1.0 - theta) * lam[a];
        if (l > 1e-15) {
          keep_set.push_back(set[a]);
          keep_lam.push_back(l);
        }
      }
      set = std::move(keep_set);
      lam = std::move(keep_lam);
    }
    x = Point::Zero(y.size());
    for (std::size_t a = 0; a < set.size(); ++a) x += lam[a] * q[set[a]];
  }
  return x.norm() <= tol;
}

// ----------------------------------------------------- classification

/// Smooth planar boundary: attractive when the curvature at x exceeds
/// 1/‖x‖, repelling when below, indeterminate inside the margin.
inline FixedPointLabel curvature_classify_2d(double curvature, const Point& x,
                                             double margin = 1e-8) {
  const double nx = x.norm();
  if (nx == 0.0) throw InvalidArgument("curvature_classify_2d: x must be nonzero");
  const double critical = 1.0 / nx;
  if (curvature > critical + margin) return FixedPointLabel::attractive;
  if (curvature < critical - margin) return FixedPointLabel::repelling;
  return FixedPointLabel::indeterminate;
}

// ------------------------------------------------------- domain oracle

using DomainShape = std::variant<BallDomain, EllipsoidDomain, PolytopeDomain, ConeDomain>;

/// A domain descriptor together with its linear-maximization rule.
class DomainOracle {
 public:
  DomainOracle() = default;
  template <class D>
    requires std::is_constructible_v<DomainShape, D>
  DomainOracle(D shape) : shape_(std::move(shape)) {}  // NOLINT

  Point operator()(const Point& x) const {
    return std::visit(
        [&](const auto& d) -> Point {
          using D = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<D, BallDomain>) return ball_oracle(d, x);
          else if constexpr (std::is_same_v<D, EllipsoidDomain>) return ellipsoid_oracle(d, x);
          else if constexpr (std::is_same_v<D, PolytopeDomain>) return polytope_oracle(d, x);
          else return cone_oracle(d, x);
        },
        shape_);
  }

  bool contains(const Point& y, double tol = 1e-10) const {
    return std::visit([&](const auto& d) { return ilo::contains(d, y, tol); }, shape_);
  }

  Eigen::Index dim() const {
    return std::visit([](const auto& d) { return d.dim(); }, shape_);
  }

  /// Smooth boundary: iteration approaches fixed points without reaching them.
  bool smooth() const {
    return std::holds_alternative<BallDomain>(shape_) ||
           std::holds_alternative<EllipsoidDomain>(shape_);
  }

  std::string_view kind() const {
    switch (shape_.index()) {
      case 0: return "ball";
      case 1: return "ellipsoid";
      case 2: return "polytope";
      default: return "cone";
    }
  }

  const DomainShape& shape() const { return shape_; }

 private:
  DomainShape shape_;
};

}  // namespace ilo
