#pragma once

// Max-cut over the elliptope relaxation: graph ingestion, the relaxation
// max_{X ∈ L_n} (−W)·X, rounding by iterating T until a vertex appears,
// random-hyperplane rounding as a baseline, and exhaustive search for
// small graphs.

#include "ilo/classification.hpp"
#include "ilo/elliptope.hpp"
#include "ilo/linalg.hpp"
#include "ilo/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ilo {

class GraphParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Edge {
  int u = 0;
  int v = 0;
  double w = 1.0;
};

/// Undirected weighted graph; edges stored with u < v, no duplicates.
struct WeightedGraph {
  int n = 0;
  std::vector<Edge> edges;

  void validate() const {
    if (n < 0) throw InvalidArgument("WeightedGraph: negative vertex count");
    std::map<std::pair<int, int>, int> seen;
    for (const auto& e : edges) {
      if (!(0 <= e.u && e.u < e.v && e.v < n))
        throw InvalidArgument("WeightedGraph: edge endpoints must satisfy 0 <= u < v < n");
      if (!std::isfinite(e.w)) throw InvalidArgument("WeightedGraph: non-finite weight");
      if (seen[{e.u, e.v}]++ > 0) throw InvalidArgument("WeightedGraph: duplicate edge");
    }
  }

  double total_weight() const {
    double s = 0.0;
    for (const auto& e : edges) s += e.w;
    return s;
  }

  static WeightedGraph complete(int n) {
    WeightedGraph g{n, {}};
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, 1.0});
    return g;
  }

  static WeightedGraph path(int n) {
    WeightedGraph g{n, {}};
    for (int u = 0; u + 1 < n; ++u) g.edges.push_back({u, u + 1, 1.0});
    return g;
  }
};

/// Edge list, one "u v [w]" per line, 0-indexed, '#' starts a comment, weight
/// defaults to 1. Reversed or repeated pairs are merged by summing weights
/// and a warning is appended. n = largest index + 1.
inline WeightedGraph parse_graph(std::istream& in, std::vector<std::string>* warnings = nullptr) {
  std::map<std::pair<int, int>, double> acc;
  std::vector<std::pair<int, int>> order;
  std::string line;
  int lineno = 0;
  int max_index = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok[4];
    int count = 0;
    while (count < 4 && (ls >> tok[count])) ++count;
    if (count == 0) continue;
    auto fail = [&](const std::string& why) {
      throw GraphParseError("line " + std::to_string(lineno) + ": " + why);
    };
    if (count < 2 || count > 3) fail("expected 'u v [w]'");
    long long u = 0, v = 0;
    double w = 1.0;
    try {
      std::size_t pos = 0;
      u = std::stoll(tok[0], &pos);
      if (pos != tok[0].size()) fail("malformed vertex index '" + tok[0] + "'");
      v = std::stoll(tok[1], &pos);
      if (pos != tok[1].size()) fail("malformed vertex index '" + tok[1] + "'");
      if (count == 3) {
        w = std::stod(tok[2], &pos);
        if (pos != tok[2].size()) fail("malformed weight '" + tok[2] + "'");
      }
    } catch (const GraphParseError&) {
      throw;
    } catch (const std::exception&) {
      fail("malformed line '" + line + "'");
    }
    if (u < 0 || v < 0) fail("negative vertex index");
    if (u > 1000000 || v > 1000000) fail("vertex index too large");
    if (u == v) fail("self-loop on vertex " + std::to_string(u));
    if (!std::isfinite(w)) fail("non-finite weight");
    const std::pair<int, int> key{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
    auto [it, inserted] = acc.try_emplace(key, 0.0);
    if (inserted) {
      order.push_back(key);
    } else if (warnings != nullptr) {
      warnings->push_back("line " + std::to_string(lineno) + ": duplicate edge " +
                          std::to_string(key.first) + "-" + std::to_string(key.second) +
                          " merged by summing weights");
    }
    it->second += w;
    max_index = std::max<int>(max_index, static_cast<int>(std::max(u, v)));
  }
  WeightedGraph g{max_index + 1, {}};
  for (const auto& key : order) g.edges.push_back({key.first, key.second, acc[key]});
  return g;
}

inline WeightedGraph load_graph(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw GraphParseError("cannot open graph file '" + path + "'");
  return parse_graph(in, warnings);
}

/// Signs in {−1, +1}; s and −s describe the same cut.
struct Partition {
  std::vector<int> signs;

  void validate() const {
    for (int s : signs)
      if (s != 1 && s != -1) throw InvalidArgument("Partition: entries must be +1 or -1");
  }
};

inline double cut_value(const WeightedGraph& g, const Partition& p) {
  if (static_cast<int>(p.signs.size()) != g.n)
    throw InvalidArgument("cut_value: sign vector length does not match the graph");
  double cut = 0.0;
  for (const auto& e : g.edges)
    if (p.signs[e.u] != p.signs[e.v]) cut += e.w;
  return cut;
}

inline Matrix weight_matrix(const WeightedGraph& g) {
  Matrix w = Matrix::Zero(g.n, g.n);
  for (const auto& e : g.edges) {
    w(e.u, e.v) += e.w;
    w(e.v, e.u) += e.w;
  }
  return w;
}

/// C = −W, so maximizing C·X over L_n maximizes the relaxed cut.
inline SymMatrix relaxation_cost(const WeightedGraph& g) { return SymMatrix(-weight_matrix(g)); }

/// ¼(Σ_{i≠j} W_ij − W·X) = ½ Σ_edges w_uv (1 − X_uv).
inline double cut_relax(const WeightedGraph& g, const ElliptopeMatrix& x) {
  if (x.size() != g.n) throw InvalidArgument("cut_relax: size mismatch");
  const Matrix w = weight_matrix(g);
  return 0.25 * (w.sum() - frobenius_inner(w, x.mat()));
}

struct RelaxationResult {
  OracleResult oracle;
  double relaxed_cut = 0.0;
};

inline RelaxationResult solve_relaxation(const WeightedGraph& g, const OracleConfig& cfg = {}) {
  g.validate();
  if (g.n < 1) throw InvalidArgument("solve_relaxation: graph has no vertices");
  RelaxationResult r;
  r.oracle = elliptope_oracle(relaxation_cost(g), cfg);
  r.relaxed_cut = cut_relax(g, r.oracle.x);
  return r;
}

// ------------------------------------------------------------ rounding

inline Partition hyperplane_partition(const Matrix& v, const Vector& direction) {
  Partition p;
  p.signs.resize(static_cast<std::size_t>(v.rows()));
  const Vector proj = v * direction;
  for (Eigen::Index i = 0; i < v.rows(); ++i) p.signs[i] = proj(i) >= 0.0 ? 1 : -1;
  return p;
}

/// Draws `samples` random directions r (seeded), s_i = sign(v_i·r) with zero
/// mapped to +1, and keeps the sample maximizing score(s); ties go to the
/// earliest sample.
template <class Score>
std::pair<Partition, double> best_hyperplane(const Matrix& v, int samples, std::uint64_t seed, Score&& score) {
  if (samples < 1) throw InvalidArgument("hyperplane rounding: samples must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::pair<Partition, double> best;
  bool have = false;
  for (int k = 0; k < samples; ++k) {
    Vector r(v.cols());
    for (Eigen::Index c = 0; c < v.cols(); ++c) r(c) = normal(rng);
    Partition p = hyperplane_partition(v, r.normalized());
    const double s = score(p);
    if (!have || s > best.second) {
      best = {std::move(p), s};
      have = true;
    }
  }
  return best;
}

inline std::pair<Partition, double> gw_hyperplane_round(const GramFactor& v, const WeightedGraph& g,
                                                        int samples = 64, std::uint64_t seed = 0) {
  if (v.n() != g.n) throw InvalidArgument("gw_hyperplane_round: size mismatch");
  return best_hyperplane(v.rows(), samples, seed, [&](const Partition& p) { return cut_value(g, p); });
}

struct RoundingConfig {
  OracleConfig oracle;
  int max_iter = 1000;
  double tol = 1e-10;         // step norm at which the iteration counts as stopped
  double vertex_tol = 1e-9;
  double fixed_tol = 1e-8;
  double escape_alpha = 0.25;
  int escape_retries = 5;
  int fallback_samples = 64;
};

enum class TerminalStatus { vertex, non_vertex_fixed_point, max_iter };
enum class Provenance { iteration, hyperplane_fallback };

inline const char* to_string(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::vertex: return "vertex";
    case TerminalStatus::non_vertex_fixed_point: return "non_vertex_fixed_point";
    case TerminalStatus::max_iter: return "max_iter";
  }
  return "max_iter";
}

inline const char* to_string(Provenance p) {
  return p == Provenance::iteration ? "iteration" : "hyperplane_fallback";
}

struct RoundingOutcome {
  Partition partition;
  ElliptopeMatrix terminal;
  TerminalStatus status = TerminalStatus::vertex;
  Provenance provenance = Provenance::iteration;
  int iterations = 0;  // oracle steps
  int escapes = 0;
  std::vector<double> norms_sq;  // X·X after every oracle or escape step
  std::vector<std::string> warnings;
};

/// Iterates X ← T(X). Stops at a vertex (partition = signs of row 0). At a
/// non-vertex fixed point, or when a step falls below tol away from a
/// vertex, takes an escape-curve step of length escape_alpha and resumes;
/// after escape_retries escapes, or at max_iter, falls back to hyperplane
/// rounding of the current iterate maximizing sᵀXs.
inline RoundingOutcome round_by_iteration(const ElliptopeMatrix& x0, const RoundingConfig& cfg = {}) {
  const ElliptopeOracle oracle{cfg.oracle, true, {}};
  RoundingOutcome out;
  ElliptopeMatrix x = x0;
  out.norms_sq.push_back(inner_product(x, x));
  bool stopped = false;

  auto fallback = [&](TerminalStatus status, const std::string& why) {
    out.status = status;
    out.provenance = Provenance::hyperplane_fallback;
    out.warnings.push_back(why + "; falling back to hyperplane rounding");
    const Matrix& xm = x.mat();
    out.partition = best_hyperplane(gram_factor(x).rows(), cfg.fallback_samples, cfg.oracle.seed,
                                    [&](const Partition& p) {
                                      Vector s(static_cast<Eigen::Index>(p.signs.size()));
                                      for (std::size_t i = 0; i < p.signs.size(); ++i) s(i) = p.signs[i];
                                      return s.dot(xm * s);
                                    })
                        .first;
    out.terminal = x;
  };

  while (true) {
    if (is_vertex(x, cfg.vertex_tol)) {
      out.partition.signs = vertex_signs(x);
      out.terminal = vertex_from_signs(out.partition.signs);
      out.status = TerminalStatus::vertex;
      return out;
    }
    if (stopped || fixed_point_certificate(x, cfg.fixed_tol).fixed) {
      if (out.escapes >= cfg.escape_retries) {
        fallback(TerminalStatus::non_vertex_fixed_point, "escape retries exhausted at a non-vertex fixed point");
        return out;
      }
      x = escape_curve(x, cfg.escape_alpha);
      ++out.escapes;
      out.norms_sq.push_back(inner_product(x, x));
      stopped = false;
      continue;
    }
    if (out.iterations >= cfg.max_iter) {
      fallback(TerminalStatus::max_iter, "iteration limit reached before a vertex");
      return out;
    }
    ElliptopeMatrix y = ElliptopeMatrix::trusted(oracle(x.sym()));
    ++out.iterations;
    stopped = distance(y, x) <= cfg.tol;
    x = std::move(y);
    out.norms_sq.push_back(inner_product(x, x));
  }
}

// --------------------------------------------------------- brute force

/// Exact optimum over all 2^{n−1} cuts with s_0 = +1. Among equal cuts the
/// lexicographically smallest sign vector (−1 before +1) wins, so the
/// result does not depend on how the range is split across threads.
inline std::pair<Partition, double> brute_force_maxcut(const WeightedGraph& g, int threads = 1) {
  g.validate();
  if (g.n > 22) throw InvalidArgument("brute_force_maxcut: n > 22 exceeds the exhaustive-search cap");
  if (g.n < 1) return {Partition{}, 0.0};
  const int n = g.n;
  const std::uint64_t total = std::uint64_t{1} << (n - 1);
  auto signs_of = [n](std::uint64_t mask) {
    std::vector<int> s(static_cast<std::size_t>(n), 1);
    for (int i = 1; i < n; ++i) s[i] = (mask >> (n - 1 - i)) & 1u ? 1 : -1;
    return s;
  };
  const std::size_t chunks = static_cast<std::size_t>(std::max(1, threads)) * 4;
  auto best_in = detail::parallel_map(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = total * c / chunks;
    const std::uint64_t hi = total * (c + 1) / chunks;
    std::pair<std::uint64_t, double> best{lo, -std::numeric_limits<double>::infinity()};
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
      double cut = 0.0;
      for (const auto& e : g.edges) {
        const bool su = e.u == 0 ? true : ((mask >> (n - 1 - e.u)) & 1u);
        const bool sv = e.v == 0 ? true : ((mask >> (n - 1 - e.v)) & 1u);
        if (su != sv) cut += e.w;
      }
      if (cut > best.second) best = {mask, cut};
    }
    return best;
  });
  std::pair<std::uint64_t, double> best{0, -std::numeric_limits<double>::infinity()};
  for (const auto& b : best_in)
    if (b.second > best.second) best = b;
  return {Partition{signs_of(best.first)}, best.second};
}

// ------------------------------------------------------------ pipeline

struct PipelineOptions {
  RoundingConfig rounding;
  bool gw_baseline = false;
  int gw_samples = 64;
  bool brute_force = false;
  int threads = 1;
};

struct RoundingReport {
  int n = 0;
  std::size_t edges = 0;
  double relaxation_objective = 0.0;  // relaxed cut value at X*
  double oracle_objective = 0.0;      // C·X*
  double certificate_residual = 0.0;
  double restart_spread = 0.0;
  int rounding_starts = 0;  // relaxation candidates tied with the best objective
  int rounding_start = 0;   // candidate whose rounding gave the reported cut
  int iterations = 0;
  int escapes = 0;
  TerminalStatus terminal_status = TerminalStatus::vertex;
  Provenance provenance = Provenance::iteration;
  Partition partition;
  double cut_value = 0.0;
  std::optional<double> baseline_cut;
  std::optional<double> brute_force_cut;
  std::vector<double> norms_sq;
  std::vector<std::string> warnings;
};

inline RoundingReport maxcut_pipeline(const WeightedGraph& g, const PipelineOptions& opt = {}) {
  if (opt.brute_force && g.n > 22)
    throw InvalidArgument("maxcut: brute force is limited to n <= 22");
  RoundingReport rep;
  rep.n = g.n;
  rep.edges = g.edges.size();
  const auto relax = solve_relaxation(g, opt.rounding.oracle);
  rep.relaxation_objective = relax.relaxed_cut;
  rep.oracle_objective = relax.oracle.objective;
  rep.certificate_residual = relax.oracle.certificate_residual;
  rep.restart_spread = relax.oracle.restart_spread();

  // For degenerate relaxations (K_n with n even, for instance) the optimum
  // is a face, and the oracle's restarts land on different points of it.
  // Each tied candidate is rounded; the best cut wins, ties to the earliest.
  const auto& orc = relax.oracle;
  const double tie = 1e-9 * std::max(1.0, std::abs(orc.objective));
  std::optional<RoundingOutcome> best;
  double best_cut = 0.0;
  for (std::size_t k = 0; k < orc.candidate_factors.size(); ++k) {
    if (orc.candidate_objectives[k] < orc.objective - tie) continue;
    ++rep.rounding_starts;
    auto o = round_by_iteration(gram_to_matrix(orc.candidate_factors[k]), opt.rounding);
    const double cut = cut_value(g, o.partition);
    if (!best || cut > best_cut) {
      best = std::move(o);
      best_cut = cut;
      rep.rounding_start = static_cast<int>(k);
    }
  }
  auto outcome = std::move(*best);
  rep.iterations = outcome.iterations;
  rep.escapes = outcome.escapes;
  rep.terminal_status = outcome.status;
  rep.provenance = outcome.provenance;
  rep.partition = std::move(outcome.partition);
  rep.cut_value = cut_value(g, rep.partition);
  rep.norms_sq = std::move(outcome.norms_sq);
  rep.warnings = std::move(outcome.warnings);

  if (opt.gw_baseline)
    rep.baseline_cut = gw_hyperplane_round(relax.oracle.factor, g, opt.gw_samples, opt.rounding.oracle.seed).second;
  if (opt.brute_force) rep.brute_force_cut = brute_force_maxcut(g, opt.threads).second;
  return rep;
}

}  // namespace ilo
