#pragma once

// The elliptope L_n = { X symmetric : X ⪰ 0, X_ii = 1 }.
//
// Contents: the Gram-factor representation, the linear-maximization oracle
// T(C) = argmax_{X in L_n} C·X computed by coordinate ascent on Gram rows,
// the algebraic fixed-point test X² = DX, support-graph irreducibility,
// normal-cone membership, and the fixed-point catalogs (vertices, sign-kernel
// points, the complete L_3 list, the one-parameter L_4 family).

#include "ilo/linalg.hpp"
#include "ilo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ilo {

class ElliptopeError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ElliptopeTolerances {
  double diagonal = 1e-12;
  double psd = 1e-9;
  double entry = 1e-12;
};

/// A symmetric matrix known to lie in L_n.
class ElliptopeMatrix {
 public:
  ElliptopeMatrix() = default;

  static ElliptopeMatrix validated(SymMatrix x, const ElliptopeTolerances& tol = {}) {
    const Matrix& m = x.mat();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (std::abs(m(i, i) - 1.0) > tol.diagonal)
        throw ElliptopeError("not in the elliptope: diagonal entry " + std::to_string(i) +
                             " is " + fmt17(m(i, i)));
    if (m.size() > 0 && m.cwiseAbs().maxCoeff() > 1.0 + tol.entry)
      throw ElliptopeError("not in the elliptope: off-diagonal entry exceeds 1 in magnitude");
    const double lmin = min_eigenvalue(m);
    if (lmin < -tol.psd)
      throw ElliptopeError("not in the elliptope: minimum eigenvalue " + fmt17(lmin));
    return ElliptopeMatrix(std::move(x));
  }

  static ElliptopeMatrix validated(const Matrix& m, const ElliptopeTolerances& tol = {}) {
    return validated(SymMatrix::checked(m), tol);
  }

  /// For matrices feasible by construction (Gram matrices, closed forms).
  static ElliptopeMatrix trusted(SymMatrix x) { return ElliptopeMatrix(std::move(x)); }

  static bool is_member(const SymMatrix& x, const ElliptopeTolerances& tol = {}) {
    try {
      validated(x, tol);
      return true;
    } catch (const ElliptopeError&) {
      return false;
    }
  }

  Eigen::Index size() const { return x_.size(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return x_(i, j); }
  const SymMatrix& sym() const { return x_; }
  const Matrix& mat() const { return x_.mat(); }

 private:
  explicit ElliptopeMatrix(SymMatrix x) : x_(std::move(x)) {}
  SymMatrix x_;
};

inline double inner_product(const ElliptopeMatrix& a, const ElliptopeMatrix& b) {
  return frobenius_inner(a.mat(), b.mat());
}
inline double distance(const ElliptopeMatrix& a, const ElliptopeMatrix& b) {
  return (a.mat() - b.mat()).norm();
}

// ------------------------------------------------------------ Gram rows

/// n×r matrix whose rows are unit vectors; X = V Vᵀ.
class GramFactor {
 public:
  GramFactor() = default;

  explicit GramFactor(Matrix v, double tol = 1e-12) : v_(std::move(v)) {
    for (Eigen::Index i = 0; i < v_.rows(); ++i)
      if (std::abs(v_.row(i).norm() - 1.0) > tol)
        throw ElliptopeError("GramFactor: row " + std::to_string(i) + " is not a unit vector");
  }

  /// Normalizes every row; zero rows become e₁.
  static GramFactor normalized(Matrix v) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      const double nr = v.row(i).norm();
      if (nr > 0.0) {
        v.row(i) /= nr;
      } else {
        v.row(i).setZero();
        v(i, 0) = 1.0;
      }
    }
    GramFactor g;
    g.v_ = std::move(v);
    return g;
  }

  Eigen::Index n() const { return v_.rows(); }
  Eigen::Index rank_budget() const { return v_.cols(); }
  const Matrix& rows() const { return v_; }

 private:
  Matrix v_;
};

/// X = V Vᵀ with the diagonal set to exactly 1.
inline ElliptopeMatrix gram_to_matrix(const GramFactor& v) {
  Matrix x = v.rows() * v.rows().transpose();
  x.diagonal().setOnes();
  return ElliptopeMatrix::trusted(SymMatrix(x));
}

/// Square Gram factor of X from its eigendecomposition, rows renormalized.
inline GramFactor gram_factor(const ElliptopeMatrix& x) {
  return GramFactor::normalized(psd_factor(x.mat()));
}

// --------------------------------------------------------------- oracle

struct OracleConfig {
  int rank = 0;  // 0 selects default_rank(n)
  double sweep_tol = 1e-12;
  int max_sweeps = 20000;
  int restarts = 5;
  std::uint64_t seed = 0;
  double grad_tol = 1e-12;
  int threads = 1;
  bool record_objective_trace = false;

  static int default_rank(Eigen::Index n) {
    const int r = static_cast<int>(std::ceil(std::sqrt(2.0 * static_cast<double>(n)))) + 1;
    return static_cast<int>(std::min<Eigen::Index>(n, r));
  }

  int rank_for(Eigen::Index n) const {
    return rank > 0 ? static_cast<int>(std::min<Eigen::Index>(rank, std::max<Eigen::Index>(n, 1)))
                    : default_rank(n);
  }

  void validate() const {
    if (rank < 0) throw InvalidArgument("OracleConfig: rank must be non-negative");
    if (restarts < 1) throw InvalidArgument("OracleConfig: restarts must be at least 1");
    if (max_sweeps < 1) throw InvalidArgument("OracleConfig: max_sweeps must be at least 1");
    if (threads < 1) throw InvalidArgument("OracleConfig: threads must be at least 1");
  }
};

struct AscentRun {
  Matrix v;
  double objective = 0.0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // C·X after each sweep
};

inline double gram_objective(const Matrix& c, const Matrix& v) {
  return (c * v).cwiseProduct(v).sum();
}

/// Row-by-row ascent: v_i ← g_i/‖g_i‖ with g_i = Σ_{j≠i} C_ij v_j, which
/// maximizes C·X over v_i with the other rows held fixed. Rows whose g_i is
/// below grad_tol are left in place.
inline AscentRun coordinate_ascent(const Matrix& c, Matrix v, const OracleConfig& cfg) {
  AscentRun run;
  const Eigen::Index n = c.rows();
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double max_move = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::RowVectorXd g = c.row(i) * v - c(i, i) * v.row(i);
      const double gn = g.norm();
      if (gn < cfg.grad_tol) continue;
      g /= gn;
      max_move = std::max(max_move, (g - v.row(i)).norm());
      v.row(i) = g;
    }
    run.sweeps = sweep;
    if (cfg.record_objective_trace) run.objective_trace.push_back(gram_objective(c, v));
    if (max_move < cfg.sweep_tol) {
      run.converged = true;
      break;
    }
  }
  run.objective = gram_objective(c, v);
  run.v = std::move(v);
  return run;
}

/// max_i ‖g_i − (g_i·v_i) v_i‖: zero exactly when every row satisfies the
/// stationarity condition Σ_{j≠i} C_ij v_j = α_i v_i.
inline double stationarity_residual(const Matrix& c, const Matrix& v) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    const Eigen::RowVectorXd g = c.row(i) * v - c(i, i) * v.row(i);
    const Eigen::RowVectorXd tangential = g - g.dot(v.row(i)) * v.row(i);
    worst = std::max(worst, tangential.norm());
  }
  return worst;
}

inline Matrix random_unit_rows(Eigen::Index n, Eigen::Index r, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix v(n, r);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < r; ++k) v(i, k) = normal(rng);
  return GramFactor::normalized(std::move(v)).rows();
}

struct OracleResult {
  ElliptopeMatrix x;
  GramFactor factor;
  double objective = 0.0;
  double certificate_residual = 0.0;
  /// Objectives in candidate order: the warm start first (when given), then
  /// restarts 0..R−1.
  std::vector<double> candidate_objectives;
  std::vector<GramFactor> candidate_factors;  // same order
  int best_candidate = 0;
  int sweeps = 0;
  bool converged = false;
  std::vector<double> objective_trace;

  double restart_spread() const {
    if (candidate_objectives.empty()) return 0.0;
    const auto [lo, hi] =
        std::minmax_element(candidate_objectives.begin(), candidate_objectives.end());
    return *hi - *lo;
  }
};

/// Approximately solves max_{X ∈ L_n} C·X. Each candidate is one ascent run:
/// the optional warm start (row-normalized, any width) and then `restarts`
/// random starts seeded with seed + restart_index. The best objective wins;
/// a candidate replaces the incumbent only if it improves by more than a
/// relative 1e-12, so ties go to the earliest candidate.
inline OracleResult elliptope_oracle(const SymMatrix& cost, const OracleConfig& cfg = {},
                                     const Matrix* warm_start = nullptr) {
  cfg.validate();
  const Matrix& c = cost.mat();
  const Eigen::Index n = c.rows();
  const int r = cfg.rank_for(n);

  std::vector<Matrix> starts;
  if (warm_start != nullptr) {
    if (warm_start->rows() != n)
      throw InvalidArgument("elliptope_oracle: warm start has wrong row count");
    starts.push_back(GramFactor::normalized(*warm_start).rows());
  }
  for (int k = 0; k < cfg.restarts; ++k)
    starts.push_back(random_unit_rows(n, r, cfg.seed + static_cast<std::uint64_t>(k)));

  std::vector<AscentRun> runs = detail::parallel_map(
      starts.size(), cfg.threads, [&](std::size_t k) { return coordinate_ascent(c, starts[k], cfg); });

  OracleResult out;
  std::size_t best = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    out.candidate_objectives.push_back(runs[k].objective);
    out.candidate_factors.push_back(GramFactor::normalized(runs[k].v));
    const double inc = runs[best].objective;
    if (k > 0 && runs[k].objective > inc + 1e-12 * std::max(1.0, std::abs(inc))) best = k;
  }
  AscentRun& win = runs[best];
  out.best_candidate = static_cast<int>(best);
  out.objective = win.objective;
  out.sweeps = win.sweeps;
  out.converged = win.converged;
  out.objective_trace = std::move(win.objective_trace);
  out.certificate_residual = stationarity_residual(c, win.v);
  out.factor = GramFactor::normalized(std::move(win.v));
  out.x = gram_to_matrix(out.factor);
  return out;
}

/// T over L_n as a state-to-state map for the iteration engine. The state
/// is the cost matrix of the next step; when it lies in L_n its own Gram
/// factor seeds the first ascent candidate, so a fixed point maps to itself
/// and C·T(C) ≥ C·C holds up to round-off.
struct ElliptopeOracle {
  OracleConfig config;
  bool warm_start = true;
  ElliptopeTolerances tolerances;

  SymMatrix operator()(const SymMatrix& c) const { return solve(c).x.sym(); }

  OracleResult solve(const SymMatrix& c) const {
    if (warm_start && ElliptopeMatrix::is_member(c, tolerances)) {
      const Matrix f = psd_factor(c.mat());
      return elliptope_oracle(c, config, &f);
    }
    return elliptope_oracle(c, config);
  }

  bool contains(const SymMatrix& x, double tol) const {
    ElliptopeTolerances t = tolerances;
    t.diagonal = std::max(t.diagonal, tol);
    return ElliptopeMatrix::is_member(x, t);
  }
};

// ----------------------------------------------------- fixed-point test

struct DiagonalCertificate {
  Vector d;              // d_i = Σ_j X_ij²
  double residual = 0.0; // ‖X² − diag(d) X‖_F
  bool fixed = false;
};

/// X is a fixed point of T iff X² = DX for diagonal D; the only candidate
/// is D_ii = Σ_j X_ij². Verdict: residual ≤ tol·n.
inline DiagonalCertificate fixed_point_certificate(const ElliptopeMatrix& x, double tol = 1e-8) {
  const Matrix& m = x.mat();
  DiagonalCertificate cert;
  cert.d = m.rowwise().squaredNorm();
  cert.residual = (m * m - cert.d.asDiagonal() * m).norm();
  cert.fixed = cert.residual <= tol * static_cast<double>(std::max<Eigen::Index>(1, m.rows()));
  return cert;
}

using IndexBlock = std::vector<int>;

/// Connected components of the support graph {i,j} with |X_ij| > zero_tol,
/// each sorted, ordered by smallest member.
inline std::vector<IndexBlock> irreducible_components(const SymMatrix& x, double zero_tol = 1e-9) {
  const int n = static_cast<int>(x.size());
  std::vector<int> comp(n, -1);
  std::vector<IndexBlock> blocks;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    blocks.emplace_back();
    std::vector<int> stack{s};
    comp[s] = id;
    while (!stack.empty()) {
      const int i = stack.back();
      stack.pop_back();
      blocks[id].push_back(i);
      for (int j = 0; j < n; ++j)
        if (comp[j] < 0 && j != i && std::abs(x(i, j)) > zero_tol) {
          comp[j] = id;
          stack.push_back(j);
        }
    }
    std::sort(blocks[id].begin(), blocks[id].end());
  }
  return blocks;
}

inline std::vector<IndexBlock> irreducible_components(const ElliptopeMatrix& x, double zero_tol = 1e-9) {
  return irreducible_components(x.sym(), zero_tol);
}

/// Principal submatrix X|_A.
inline ElliptopeMatrix restrict_to(const ElliptopeMatrix& x, const IndexBlock& block) {
  const auto k = static_cast<Eigen::Index>(block.size());
  Matrix sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = x(block[a], block[b]);
  return ElliptopeMatrix::trusted(SymMatrix(sub));
}

struct IrreducibleGamma {
  double gamma = 0.0;
  int rank = 0;
};

/// For an irreducible fixed point D = γI and γ = n/rank(X).
inline IrreducibleGamma gamma_of_irreducible(const ElliptopeMatrix& x, double tol = 1e-8,
                                             double rank_tol = 1e-9) {
  const auto cert = fixed_point_certificate(x, tol);
  if (!cert.fixed) throw ElliptopeError("gamma_of_irreducible: X is not a fixed point");
  const double gamma = cert.d(0);
  if ((cert.d.array() - gamma).abs().maxCoeff() > tol)
    throw ElliptopeError("gamma_of_irreducible: diagonal certificate is not constant");
  if (gamma < 1.0 - tol) throw ElliptopeError("gamma_of_irreducible: gamma below 1");
  IrreducibleGamma out{gamma, numeric_rank(x.mat(), rank_tol)};
  const double n = static_cast<double>(x.size());
  if (std::abs(gamma * out.rank - n) > 1e-6 * n)
    throw ElliptopeError("gamma_of_irreducible: gamma·rank differs from n");
  return out;
}

/// Y ∈ N(L_n, X) iff Y = D − M with D diagonal and M ⪰ 0, MX = 0. D is
/// forced to D_ii = (YX)_ii because (MX)_ii must vanish.
inline bool normal_cone_membership(const ElliptopeMatrix& x, const SymMatrix& y, double tol = 1e-8) {
  if (y.size() != x.size()) throw InvalidArgument("normal_cone_membership: size mismatch");
  const Matrix yx = y.mat() * x.mat();
  const Matrix m = Matrix(yx.diagonal().asDiagonal()) - y.mat();
  return (m * x.mat()).norm() <= tol && min_eigenvalue(m) >= -tol;
}

// ---------------------------------------------------------------- vertices

/// Rank-one ±1 matrices ssᵀ: the cut matrices.
inline bool is_vertex(const ElliptopeMatrix& x, double tol = 1e-9) {
  const Matrix& m = x.mat();
  if (m.size() == 0) return false;
  if (((m.cwiseAbs().array() - 1.0).abs() > tol).any()) return false;
  if (m.rows() == 1) return true;
  const Vector ev = eigenvalues(m);
  return ev(ev.size() - 2) <= tol;
}

using SignVector = std::vector<int>;

inline ElliptopeMatrix vertex_from_signs(const SignVector& s) {
  const auto n = static_cast<Eigen::Index>(s.size());
  Matrix x(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) x(i, j) = static_cast<double>(s[i] * s[j]);
  return ElliptopeMatrix::trusted(SymMatrix(x));
}

/// Sign of row 0 (s_0 = +1); for a vertex every row agrees up to sign.
inline SignVector vertex_signs(const ElliptopeMatrix& x) {
  SignVector s(static_cast<std::size_t>(x.size()));
  for (Eigen::Index j = 0; j < x.size(); ++j) s[j] = x(0, j) >= 0.0 ? 1 : -1;
  return s;
}

/// All 2^{n−1} vertices, s_0 = +1 and s_1..s_{n−1} in lexicographic order
/// with −1 before +1.
inline std::vector<ElliptopeMatrix> enumerate_vertices(int n) {
  if (n < 1) throw InvalidArgument("enumerate_vertices: n must be positive");
  if (n > 16) throw InvalidArgument("enumerate_vertices: n > 16 exceeds the enumeration cap");
  std::vector<ElliptopeMatrix> out;
  const std::uint32_t count = 1u << (n - 1);
  out.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    SignVector s(static_cast<std::size_t>(n), 1);
    for (int i = 1; i < n; ++i) s[i] = (mask >> (n - 1 - i)) & 1u ? 1 : -1;
    out.push_back(vertex_from_signs(s));
  }
  return out;
}

/// The unique fixed point whose kernel on supp(w) is spanned by
/// w ∈ {0,±1}ⁿ: X_ij = −w_i w_j/(p−1) for i ≠ j in the support, identity
/// elsewhere. On the support block X² = (p/(p−1)) X.
inline ElliptopeMatrix sign_kernel_fixed_point(const SignVector& w) {
  const auto n = static_cast<Eigen::Index>(w.size());
  int p = 0;
  for (int wi : w) {
    if (wi != 0 && wi != 1 && wi != -1)
      throw InvalidArgument("sign_kernel_fixed_point: entries must be in {0, 1, -1}");
    if (wi != 0) ++p;
  }
  if (p < 2) throw InvalidArgument("sign_kernel_fixed_point: need at least two nonzero entries");
  Matrix x = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j && w[i] != 0 && w[j] != 0) x(i, j) = -static_cast<double>(w[i] * w[j]) / (p - 1);
  return ElliptopeMatrix::trusted(SymMatrix(x));
}

/// Every w ∈ {0,±1}ⁿ with at least two nonzeros and leading nonzero +1
/// (w and −w give the same matrix), grouped by support size, then support
/// in lexicographic order, then signs with −1 before +1.
inline std::vector<SignVector> enumerate_sign_kernels(int n) {
  if (n < 2) throw InvalidArgument("enumerate_sign_kernels: n must be at least 2");
  std::vector<SignVector> out;
  for (int p = 2; p <= n; ++p) {
    // supports of size p in lexicographic order
    std::vector<int> idx(p);
    for (int k = 0; k < p; ++k) idx[k] = k;
    while (true) {
      const std::uint32_t count = 1u << (p - 1);
      for (std::uint32_t mask = 0; mask < count; ++mask) {
        SignVector w(static_cast<std::size_t>(n), 0);
        w[idx[0]] = 1;
        for (int k = 1; k < p; ++k) w[idx[k]] = (mask >> (p - 1 - k)) & 1u ? 1 : -1;
        out.push_back(std::move(w));
      }
      int k = p - 1;
      while (k >= 0 && idx[k] == n - p + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int m = k + 1; m < p; ++m) idx[m] = idx[m - 1] + 1;
    }
  }
  return out;
}

enum class CensusGroup { vertex, reducible, irreducible_nonvertex };

inline const char* to_string(CensusGroup g) {
  switch (g) {
    case CensusGroup::vertex: return "vertex";
    case CensusGroup::reducible: return "reducible";
    case CensusGroup::irreducible_nonvertex: return "irreducible";
  }
  return "vertex";
}

struct CensusEntry {
  ElliptopeMatrix x;
  int rank = 0;
  bool reducible = false;
  CensusGroup group = CensusGroup::vertex;
};

inline CensusEntry make_census_entry(ElliptopeMatrix x) {
  CensusEntry e;
  e.rank = numeric_rank(x.mat());
  e.reducible = irreducible_components(x).size() > 1;
  e.group = is_vertex(x) ? CensusGroup::vertex
                         : (e.reducible ? CensusGroup::reducible : CensusGroup::irreducible_nonvertex);
  e.x = std::move(x);
  return e;
}

/// Vertices followed by all sign-kernel fixed points. Complete for n = 3
/// (4 vertices, 6 edge midpoints, 4 puffed-face points); for n > 3 the
/// fixed-point set is infinite and this list is partial.
inline std::vector<CensusEntry> sign_census(int n) {
  if (n < 2) throw InvalidArgument("census: n must be at least 2");
  if (n > 10) throw InvalidArgument("census: n > 10 exceeds the enumeration cap");
  std::vector<CensusEntry> out;
  for (auto& v : enumerate_vertices(n)) out.push_back(make_census_entry(std::move(v)));
  for (const auto& w : enumerate_sign_kernels(n))
    out.push_back(make_census_entry(sign_kernel_fixed_point(w)));
  return out;
}

inline std::vector<CensusEntry> l3_census() { return sign_census(3); }

/// The one-parameter family of rank-2 fixed points in L_4 with X(c)² = 2X(c).
inline ElliptopeMatrix l4_family(double c) {
  if (!(c > -1.0 && c < 1.0)) throw InvalidArgument("l4_family: c must lie in (-1, 1)");
  const double s = std::sqrt(1.0 - c * c);
  Matrix x(4, 4);
  x << 1, -s, 0, c,
      -s, 1, -c, 0,
       0, -c, 1, -s,
       c, 0, -s, 1;
  return ElliptopeMatrix::trusted(SymMatrix(x));
}

}  // namespace ilo
