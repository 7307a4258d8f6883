#pragma once

// Reports. Every result is first built as an ordered JSON tree, then
// rendered either as JSON or as indented "key: value" text. Text output
// prints every real with 17 significant digits.

#include "ilo/classification.hpp"
#include "ilo/elliptope.hpp"
#include "ilo/iteration.hpp"
#include "ilo/maxcut.hpp"

#include <json.hpp>

#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace ilo {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_json(Vector(m.row(i).transpose())));
  return rows;
}

inline Json to_json(const std::vector<double>& v) { return Json(v); }

inline std::string scalar_text(const Json& j) {
  if (j.is_number_float()) return fmt17(j.get<double>());
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  return j.dump();
}

inline bool all_scalars(const Json& a) {
  for (const auto& e : a)
    if (e.is_structured()) return false;
  return true;
}

inline void render(std::ostream& os, const Json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (const auto& [key, val] : j.items()) {
    os << pad << key << ':';
    if (val.is_object()) {
      os << '\n';
      render(os, val, indent + 2);
    } else if (val.is_array() && all_scalars(val)) {
      for (const auto& e : val) os << ' ' << scalar_text(e);
      os << '\n';
    } else if (val.is_array()) {
      os << '\n';
      for (const auto& e : val) {
        if (e.is_array() && all_scalars(e)) {
          os << pad << "  ";
          bool first = true;
          for (const auto& x : e) os << (std::exchange(first, false) ? "" : " ") << scalar_text(x);
          os << '\n';
        } else if (e.is_object()) {
          os << pad << "  -\n";
          render(os, e, indent + 4);
        } else {
          os << pad << "  " << scalar_text(e) << '\n';
        }
      }
    } else {
      os << ' ' << scalar_text(val) << '\n';
    }
  }
}

}  // namespace detail

enum class OutputFormat { text, json };

inline void write_report(std::ostream& os, const Json& report, OutputFormat fmt) {
  if (fmt == OutputFormat::json) {
    os << report.dump(2) << '\n';
  } else {
    detail::render(os, report, 0);
  }
}

inline std::string render_report(const Json& report, OutputFormat fmt) {
  std::ostringstream os;
  write_report(os, report, fmt);
  return os.str();
}

inline Json monotone_json(const MonotoneReport& m) {
  Json j;
  j["passed"] = m.passed;
  j["first_violation"] = m.first_violation ? Json(*m.first_violation) : Json(nullptr);
  j["worst_norm_drop"] = m.worst_norm_drop;
  j["worst_step_excess"] = m.worst_step_excess;
  return j;
}

inline Json trajectory_json(const Trajectory<Vector>& t, std::string_view domain) {
  Json j;
  j["domain"] = std::string(domain);
  j["status"] = std::string(to_string(t.status));
  j["iterations"] = t.iterations();
  j["final_point"] = detail::to_json(t.final_point());
  j["final_norm_sq"] = t.norms_sq.back();
  j["final_residual"] = t.final_residual;
  j["monotone"] = monotone_json(check_monotone(t));
  return j;
}

/// d vector, residual, verdict, rank and the irreducible blocks. γ is given
/// for blocks of a fixed point whose certificate is constant on the block.
inline Json verify_json(const ElliptopeMatrix& x, double tol = 1e-8) {
  const auto cert = fixed_point_certificate(x, tol);
  Json j;
  j["n"] = x.size();
  j["d"] = detail::to_json(cert.d);
  j["residual"] = cert.residual;
  j["verdict"] = cert.fixed ? "fixed" : "not fixed";
  j["rank"] = numeric_rank(x.mat());
  j["vertex"] = is_vertex(x);
  Json blocks = Json::array();
  for (const auto& b : irreducible_components(x)) {
    Json jb;
    jb["indices"] = b;
    const auto sub = restrict_to(x, b);
    jb["rank"] = numeric_rank(sub.mat());
    if (cert.fixed) {
      try {
        jb["gamma"] = gamma_of_irreducible(sub, tol).gamma;
      } catch (const ElliptopeError&) {
        jb["gamma"] = nullptr;
      }
    }
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

inline Json oracle_json(const OracleResult& r) {
  Json j;
  j["objective"] = r.objective;
  j["certificate_residual"] = r.certificate_residual;
  j["restart_spread"] = r.restart_spread();
  j["best_candidate"] = r.best_candidate;
  j["sweeps"] = r.sweeps;
  j["converged"] = r.converged;
  return j;
}

inline Json census_json(int n, const std::vector<CensusEntry>& entries) {
  Json j;
  j["n"] = n;
  j["complete"] = n == 3;
  if (n != 3) j["banner"] = "partial (infinite set exists)";
  int counts[3] = {0, 0, 0};
  for (const auto& e : entries) ++counts[static_cast<int>(e.group)];
  j["count"] = entries.size();
  j["vertices"] = counts[0];
  j["reducible"] = counts[1];
  j["irreducible"] = counts[2];
  Json list = Json::array();
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const auto cert = fixed_point_certificate(e.x);
    Json je;
    je["index"] = k;
    je["group"] = to_string(e.group);
    je["rank"] = e.rank;
    je["residual"] = cert.residual;
    je["matrix"] = detail::to_json(e.x.mat());
    list.push_back(std::move(je));
  }
  j["matrices"] = std::move(list);
  return j;
}

inline Json classification_json(const ClassificationResult& r) {
  Json j;
  j["label"] = std::string(to_string(r.label));
  if (r.samples > 0) {
    j["samples"] = r.samples;
    j["returned"] = r.returned;
    j["escaped"] = r.escaped;
    j["left_ball"] = r.left_ball;
    j["eps"] = r.eps;
  }
  if (r.witness) {
    Json w;
    w["i"] = r.witness->pair.i;
    w["j"] = r.witness->pair.j;
    w["sign"] = r.witness->pair.sign;
    w["base_norm_sq"] = r.witness->base_norm_sq;
    w["alphas"] = r.witness->alphas;
    w["norms_sq"] = r.witness->norms_sq;
    j["escape_witness"] = std::move(w);
  }
  return j;
}

inline Json rounding_json(const RoundingReport& r) {
  Json j;
  j["n"] = r.n;
  j["edges"] = r.edges;
  j["relaxation_objective"] = r.relaxation_objective;
  j["oracle_objective"] = r.oracle_objective;
  j["certificate_residual"] = r.certificate_residual;
  j["restart_spread"] = r.restart_spread;
  j["rounding_starts"] = r.rounding_starts;
  j["rounding_start"] = r.rounding_start;
  j["iterations"] = r.iterations;
  j["escapes"] = r.escapes;
  j["terminal_status"] = to_string(r.terminal_status);
  j["provenance"] = to_string(r.provenance);
  j["partition"] = r.partition.signs;
  j["cut_value"] = r.cut_value;
  j["baseline_cut"] = r.baseline_cut ? Json(*r.baseline_cut) : Json(nullptr);
  j["brute_force_cut"] = r.brute_force_cut ? Json(*r.brute_force_cut) : Json(nullptr);
  j["norms_sq"] = r.norms_sq;
  j["warnings"] = r.warnings;
  return j;
}

inline const char* rounding_csv_header() {
  return "name,n,edges,relaxation_objective,iterations,escapes,terminal_status,provenance,"
         "cut_value,baseline_cut,brute_force_cut";
}

inline std::string rounding_csv_row(const std::string& name, const RoundingReport& r) {
  std::ostringstream os;
  os << name << ',' << r.n << ',' << r.edges << ',' << fmt17(r.relaxation_objective) << ','
     << r.iterations << ',' << r.escapes << ',' << to_string(r.terminal_status) << ','
     << to_string(r.provenance) << ',' << fmt17(r.cut_value) << ','
     << (r.baseline_cut ? fmt17(*r.baseline_cut) : "") << ','
     << (r.brute_force_cut ? fmt17(*r.brute_force_cut) : "");
  return os.str();
}

}  // namespace ilo
