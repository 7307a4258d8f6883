#pragma once

// Attractive / repelling classification of fixed points.
//
// Two routes: empirical perturbation sampling (any domain, including L_n)
// and, on L_n, the structural rule that exactly the vertices are
// attractive, with an escape curve of strictly increasing ‖X̂(α)‖² as the
// witness for every other fixed point.

#include "ilo/domains.hpp"
#include "ilo/elliptope.hpp"
#include "ilo/iteration.hpp"
#include "ilo/parallel.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ilo {

class NotFixedPoint : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

class PreconditionError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct ClassificationConfig {
  double eps = 1e-2;
  int samples = 32;
  std::uint64_t seed = 0;
  double tol = 1e-10;       // iteration step tolerance
  int max_iter = 10000;
  double fixed_tol = 1e-8;  // ‖T(x) − x‖ accepted as a fixed point
  int threads = 1;
};

/// Pair (i, j) and direction sign σ used by the escape curve: row i moves
/// toward σ·v_j.
struct EscapePair {
  int i = 0;
  int j = 0;
  int sign = 1;
};

struct EscapeWitness {
  EscapePair pair;
  double base_norm_sq = 0.0;     // X·X
  std::vector<double> alphas;
  std::vector<double> norms_sq;  // X̂(α)·X̂(α)
};

struct ClassificationResult {
  FixedPointLabel label = FixedPointLabel::indeterminate;
  int samples = 0;
  int returned = 0;  // iteration ended within 10·tol of x
  int escaped = 0;   // samples − returned
  int left_ball = 0; // some iterate left the eps-ball
  double eps = 0.0;
  std::optional<EscapeWitness> witness;
};

namespace detail {

inline std::mt19937_64 sample_rng(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

struct SampleOutcome {
  bool returned = false;
  bool left = false;
};

// Fewer than this many samples cannot support an "attractive" verdict.
inline constexpr int kMinAttractiveSamples = 32;

inline FixedPointLabel decide(const ClassificationResult& r) {
  if (r.returned == r.samples)
    return r.samples >= kMinAttractiveSamples ? FixedPointLabel::attractive : FixedPointLabel::indeterminate;
  if (r.left_ball == r.samples) return FixedPointLabel::repelling;
  if (r.returned == 0 && r.left_ball == 0) return FixedPointLabel::neither;
  return FixedPointLabel::indeterminate;
}

template <class State, class Oracle>
SampleOutcome follow(const Oracle& oracle, const State& start, const State& x,
                     const ClassificationConfig& cfg) {
  IterationConfig it;
  it.tol = cfg.tol;
  it.max_iter = cfg.max_iter;
  it.validate_start = false;
  const auto traj = iterate(oracle, start, it);
  SampleOutcome out;
  for (const auto& p : traj.points)
    if (distance(p, x) > cfg.eps) out.left = true;
  out.returned = distance(traj.final_point(), x) <= 10.0 * cfg.tol;
  return out;
}

template <class Outcomes>
ClassificationResult tally(const Outcomes& outcomes, const ClassificationConfig& cfg) {
  ClassificationResult r;
  r.samples = cfg.samples;
  r.eps = cfg.eps;
  for (const auto& o : outcomes) {
    r.returned += o.returned ? 1 : 0;
    r.left_ball += o.left ? 1 : 0;
  }
  r.escaped = r.samples - r.returned;
  r.label = decide(r);
  return r;
}

}  // namespace detail

/// Samples feasible starts uniformly in the eps-ball around x (rejection
/// against the domain), iterates each, and labels: attractive if all return,
/// repelling if all leave the ball, neither if none does either, and
/// indeterminate for mixed outcomes.
inline ClassificationResult classify_empirical(const DomainOracle& oracle, const Point& x,
                                               const ClassificationConfig& cfg = {}) {
  if (cfg.samples < 1) throw InvalidArgument("classify_empirical: samples must be positive");
  if (distance(oracle(x), x) > cfg.fixed_tol)
    throw NotFixedPoint("classify_empirical: x is not a fixed point");
  const Eigen::Index d = x.size();
  auto outcomes = detail::parallel_map(
      static_cast<std::size_t>(cfg.samples), cfg.threads, [&](std::size_t k) {
        auto rng = detail::sample_rng(cfg.seed, k);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        for (int attempt = 0; attempt < 100000; ++attempt) {
          Point dir(d);
          for (Eigen::Index c = 0; c < d; ++c) dir(c) = normal(rng);
          const double radius = cfg.eps * std::pow(unif(rng), 1.0 / static_cast<double>(d));
          const Point start = x + radius * dir.normalized();
          if (start == x || !oracle.contains(start, 0.0)) continue;
          return detail::follow(oracle, start, x, cfg);
        }
        throw PreconditionError("classify_empirical: no feasible start found near x");
      });
  return detail::tally(outcomes, cfg);
}

/// Elliptope variant: starts are Gram-row perturbations of X, renormalized,
/// so every sample is feasible; the perturbation is shrunk until
/// ‖M − X‖_F < eps.
inline ClassificationResult classify_empirical(const ElliptopeOracle& oracle, const ElliptopeMatrix& x,
                                               const ClassificationConfig& cfg) {
  if (cfg.samples < 1) throw InvalidArgument("classify_empirical: samples must be positive");
  if (!fixed_point_certificate(x, cfg.fixed_tol).fixed)
    throw NotFixedPoint("classify_empirical: X is not a fixed point");
  const Matrix v = psd_factor(x.mat());
  const Eigen::Index n = v.rows();
  const SymMatrix& target = x.sym();
  auto outcomes = detail::parallel_map(
      static_cast<std::size_t>(cfg.samples), cfg.threads, [&](std::size_t k) {
        auto rng = detail::sample_rng(cfg.seed, k);
        std::normal_distribution<double> normal(0.0, 1.0);
        Matrix noise(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
          for (Eigen::Index c = 0; c < n; ++c) noise(i, c) = normal(rng);
        double scale = cfg.eps / (noise.norm() + 1e-300);
        for (int attempt = 0; attempt < 60; ++attempt, scale *= 0.5) {
          const SymMatrix start = gram_to_matrix(GramFactor::normalized(v + scale * noise)).sym();
          const double dist = distance(start, target);
          if (dist > 0.0 && dist < cfg.eps) return detail::follow(oracle, start, target, cfg);
        }
        throw PreconditionError("classify_empirical: could not build a perturbation inside eps");
      });
  return detail::tally(outcomes, cfg);
}

/// If X is a vertex and ‖M − X‖_F < 1, M has X's sign pattern and T(M) = X
/// in one step. Returns whether the oracle reproduces X entrywise within
/// `entry_tol`.
inline bool vertex_basin_check(const ElliptopeMatrix& x, const ElliptopeMatrix& m,
                               const OracleConfig& cfg = {}, double entry_tol = 1e-9) {
  if (!is_vertex(x)) throw PreconditionError("vertex_basin_check: X is not a vertex");
  if (m.size() != x.size()) throw PreconditionError("vertex_basin_check: size mismatch");
  if (distance(m, x) >= 1.0) throw PreconditionError("vertex_basin_check: ‖M − X‖_F must be below 1");
  const ElliptopeOracle oracle{cfg, true, {}};
  const auto result = oracle.solve(m.sym());
  return (result.x.mat() - x.mat()).cwiseAbs().maxCoeff() <= entry_tol;
}

/// Lowest (i, j) in lexicographic order with X_ij ∉ {−1, +1} and
/// Σ_l X_il² ≤ Σ_l X_jl². σ = +1 when X_ij ≥ 0.
inline EscapePair escape_pair(const ElliptopeMatrix& x, double tol = 1e-12) {
  const Vector row_sq = x.mat().rowwise().squaredNorm();
  const int n = static_cast<int>(x.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || std::abs(std::abs(x(i, j)) - 1.0) <= tol) continue;
      if (row_sq(i) <= row_sq(j) + tol) return {i, j, x(i, j) >= 0.0 ? 1 : -1};
    }
  throw PreconditionError("escape_curve: X is a vertex (no pair with |X_ij| < 1)");
}

/// X̂(α): the Gram matrix after replacing v_i by
/// z_α((1−α) v_i + α σ v_j), z_α normalizing. Computed from the entries of
/// X directly, so no factorization is needed and X̂(α) stays in L_n.
inline ElliptopeMatrix escape_curve(const ElliptopeMatrix& x, const EscapePair& pair, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("escape_curve: alpha must lie in [0, 1]");
  const auto [i, j, sigma] = pair;
  const double xij = x(i, j);
  const double z =
      1.0 / std::sqrt((1 - alpha) * (1 - alpha) + alpha * alpha + 2 * alpha * (1 - alpha) * sigma * xij);
  Matrix out = x.mat();
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    if (l == i) continue;
    const double v = z * ((1 - alpha) * x(i, l) + alpha * sigma * x(j, l));
    out(i, l) = v;
    out(l, i) = v;
  }
  out(i, i) = 1.0;
  return ElliptopeMatrix::trusted(SymMatrix(out));
}

inline ElliptopeMatrix escape_curve(const ElliptopeMatrix& x, double alpha) {
  return escape_curve(x, escape_pair(x), alpha);
}

inline EscapeWitness escape_witness(const ElliptopeMatrix& x) {
  EscapeWitness w;
  w.pair = escape_pair(x);
  w.base_norm_sq = inner_product(x, x);
  for (int k = 1; k <= 10; ++k) {
    const double a = 0.1 * k;
    const auto xa = escape_curve(x, w.pair, a);
    w.alphas.push_back(a);
    w.norms_sq.push_back(inner_product(xa, xa));
  }
  return w;
}

/// Structural classification on L_n: attractive iff X is a vertex. Any
/// other fixed point is labeled not_attractive and carries the escape-curve
/// witness.
inline ClassificationResult classify_elliptope_fixed_point(const ElliptopeMatrix& x,
                                                           double fixed_tol = 1e-8,
                                                           double vertex_tol = 1e-9) {
  if (!fixed_point_certificate(x, fixed_tol).fixed)
    throw NotFixedPoint("classify_elliptope_fixed_point: X is not a fixed point");
  ClassificationResult r;
  if (is_vertex(x, vertex_tol)) {
    r.label = FixedPointLabel::attractive;
    return r;
  }
  r.label = FixedPointLabel::not_attractive;
  r.witness = escape_witness(x);
  return r;
}

}  // namespace ilo
