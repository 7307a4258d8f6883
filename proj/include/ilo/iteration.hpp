#pragma once

// Fixed-point iteration x_{i+1} = T(x_i) over any linear-maximization
// oracle, with trajectory recording and the monotonicity checks that
// follow from x_{i+1}·x_i ≥ x_i·x_i.

#include "ilo/linalg.hpp"

#include <concepts>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

namespace ilo {

/// Something that behaves like T: maps a state to a maximizer of the linear
/// functional it defines over the domain.
template <class O, class State>
concept LinearOracle = requires(const O& o, const State& s) {
  { o(s) } -> std::convertible_to<State>;
  { inner_product(s, s) } -> std::convertible_to<double>;
  { distance(s, s) } -> std::convertible_to<double>;
};

template <class O, class State>
concept HasMembership = requires(const O& o, const State& s, double tol) {
  { o.contains(s, tol) } -> std::convertible_to<bool>;
};

enum class IterationStatus { converged, max_iter, stalled };

inline std::string_view to_string(IterationStatus s) {
  switch (s) {
    case IterationStatus::converged: return "converged";
    case IterationStatus::max_iter: return "max_iter";
    case IterationStatus::stalled: return "stalled";
  }
  return "max_iter";
}

struct IterationConfig {
  double tol = 1e-10;  // on the step norm ‖x_{i+1} − x_i‖
  int max_iter = 10000;
  bool record_trace = true;
  bool validate_start = true;
  double feasibility_tol = 1e-10;
  int stall_window = 100;
  double stall_gain = 1e-14;

  void validate() const {
    if (!(tol > 0.0)) throw InvalidArgument("IterationConfig: tol must be positive");
    if (max_iter < 1) throw InvalidArgument("IterationConfig: max_iter must be at least 1");
  }
};

class InfeasibleStart : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Iterates x_0..x_K with a_i = x_i·x_i and s_i = ‖x_{i+1} − x_i‖.
/// `points` holds every iterate when tracing is on, otherwise only the
/// first and last. `final_residual` is ‖T(x_K) − x_K‖.
template <class State>
struct Trajectory {
  std::vector<State> points;
  std::vector<double> norms_sq;
  std::vector<double> step_norms;
  IterationStatus status = IterationStatus::max_iter;
  double final_residual = 0.0;

  const State& final_point() const { return points.back(); }
  std::size_t iterations() const { return step_norms.size(); }
};

template <class State, LinearOracle<State> Oracle>
Trajectory<State> iterate(const Oracle& oracle, const State& x0, const IterationConfig& cfg = {}) {
  cfg.validate();
  if constexpr (HasMembership<Oracle, State>) {
    if (cfg.validate_start && !oracle.contains(x0, cfg.feasibility_tol))
      throw InfeasibleStart("iterate: starting point is not in the domain");
  }

  Trajectory<State> traj;
  traj.points.push_back(x0);
  traj.norms_sq.push_back(inner_product(x0, x0));

  State x = x0;
  int plateau = 0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    State y = oracle(x);
    const double step = distance(y, x);
    const double a_next = inner_product(y, y);
    const double gain = a_next - traj.norms_sq.back();
    traj.step_norms.push_back(step);
    traj.norms_sq.push_back(a_next);
    if (cfg.record_trace) traj.points.push_back(y);
    x = std::move(y);

    if (step <= cfg.tol) {
      traj.status = IterationStatus::converged;
      break;
    }
    plateau = (gain < cfg.stall_gain) ? plateau + 1 : 0;
    if (plateau >= cfg.stall_window) {
      traj.status = IterationStatus::stalled;
      break;
    }
  }
  if (!cfg.record_trace && traj.step_norms.size() > 0) traj.points.push_back(x);
  traj.final_residual = distance(oracle(x), x);
  return traj;
}

struct MonotoneReport {
  bool passed = true;
  std::optional<std::size_t> first_violation;
  double worst_norm_drop = 0.0;      // max(a_i − a_{i+1}, 0)
  double worst_step_excess = 0.0;    // max(s_i² − (a_{i+1} − a_i), 0)
};

/// Checks a_i ≤ a_{i+1} + norm_slack and s_i² ≤ a_{i+1} − a_i + step_slack
/// at every step; records the first failing index.
template <class State>
MonotoneReport check_monotone(const Trajectory<State>& traj, double norm_slack = 1e-12,
                              double step_slack = 1e-9) {
  MonotoneReport rep;
  for (std::size_t i = 0; i < traj.step_norms.size(); ++i) {
    const double gain = traj.norms_sq[i + 1] - traj.norms_sq[i];
    const double s2 = traj.step_norms[i] * traj.step_norms[i];
    rep.worst_norm_drop = std::max(rep.worst_norm_drop, -gain);
    rep.worst_step_excess = std::max(rep.worst_step_excess, s2 - gain);
    if ((gain < -norm_slack || s2 > gain + step_slack) && !rep.first_violation) {
      rep.passed = false;
      rep.first_violation = i;
    }
  }
  return rep;
}

/// f(x_i) = ½‖x_i‖², the objective the iteration ascends.
template <class State>
std::vector<double> objective_interpretation(const Trajectory<State>& traj) {
  std::vector<double> f;
  f.reserve(traj.norms_sq.size());
  for (double a : traj.norms_sq) f.push_back(0.5 * a);
  return f;
}

/// Writes `iter,x0..x{d-1},norm_sq,step_norm,residual` with 17 significant
/// digits. step_norm on row i is ‖x_i − x_{i−1}‖ (0 on row 0); residual is
/// ‖T(x_i) − x_i‖. Requires a traced vector trajectory.
inline void write_trajectory_csv(std::ostream& os, const Trajectory<Vector>& traj) {
  if (traj.points.size() != traj.norms_sq.size())
    throw InvalidArgument("write_trajectory_csv: trajectory was recorded without trace");
  const Eigen::Index d = traj.points.front().size();
  os << "iter";
  for (Eigen::Index k = 0; k < d; ++k) os << ",x" << k;
  os << ",norm_sq,step_norm,residual\n";
  const std::size_t last = traj.points.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    os << i;
    for (Eigen::Index k = 0; k < d; ++k) os << ',' << fmt17(traj.points[i](k));
    const double step = i == 0 ? 0.0 : traj.step_norms[i - 1];
    const double res = i < last ? traj.step_norms[i] : traj.final_residual;
    os << ',' << fmt17(traj.norms_sq[i]) << ',' << fmt17(step) << ',' << fmt17(res) << '\n';
  }
}

}  // namespace ilo
