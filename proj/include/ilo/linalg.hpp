#pragma once

// Dense linear algebra helpers shared by every module: the symmetric matrix
// type, Frobenius products, and spectral queries backed by Eigen.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilo {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a value violates the documented shape or range of an input.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense real symmetric matrix. The upper triangle of the source is
/// authoritative; the lower triangle is mirrored on construction so the
/// stored matrix is exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& m) : m_(m.rows(), m.cols()) {
    if (m.rows() != m.cols())
      throw InvalidArgument("SymMatrix: matrix is not square");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i <= j; ++i) {
        if (!std::isfinite(m(i, j)))
          throw InvalidArgument("SymMatrix: non-finite entry");
        m_(i, j) = m(i, j);
        m_(j, i) = m(i, j);
      }
    }
  }

  /// Rejects inputs whose asymmetry exceeds `tol` instead of silently
  /// discarding the lower triangle.
  static SymMatrix checked(const Matrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols())
      throw InvalidArgument("SymMatrix: matrix is not square");
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (m.size() > 0 && asym > tol)
      throw InvalidArgument("SymMatrix: matrix is not symmetric (max |A-A^T| = " +
                            std::to_string(asym) + ")");
    return SymMatrix(m);
  }

  static SymMatrix identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix ones(Eigen::Index n) { return SymMatrix(Matrix::Ones(n, n)); }
  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }

  Eigen::Index size() const { return m_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  const Matrix& mat() const { return m_; }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

/// Trace inner product A·B = Σ_ij A_ij B_ij.
inline double frobenius_inner(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

// Inner product and distance overloads used by the generic iteration engine.
inline double inner_product(const Vector& a, const Vector& b) { return a.dot(b); }
inline double distance(const Vector& a, const Vector& b) { return (a - b).norm(); }
inline double inner_product(const SymMatrix& a, const SymMatrix& b) {
  return frobenius_inner(a.mat(), b.mat());
}
inline double distance(const SymMatrix& a, const SymMatrix& b) {
  return (a.mat() - b.mat()).norm();
}

/// Eigenvalues in ascending order.
inline Vector eigenvalues(const Matrix& sym) {
  if (sym.size() == 0) return Vector();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix& sym) {
  return sym.size() == 0 ? 0.0 : eigenvalues(sym)(0);
}

/// Number of eigenvalues strictly above `tol`. Intended for PSD input.
inline int numeric_rank(const Matrix& sym, double tol = 1e-9) {
  const Vector ev = eigenvalues(sym);
  int r = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > tol) ++r;
  return r;
}

/// Factor a PSD matrix as V Vᵀ with V n×n (columns scaled eigenvectors).
/// Negative round-off eigenvalues are clamped to zero.
inline Matrix psd_factor(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal();
}

/// Print a double with 17 significant digits, the output convention for
/// every report and CSV file.
inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace ilo
