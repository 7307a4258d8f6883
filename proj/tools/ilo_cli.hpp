#pragma once

// `ilo` command line: iterate, verify, census, classify, maxcut.
//
// Exit codes: 0 success, 1 usage or parse error, 2 input rejected
// (infeasible start, matrix not in L_n, not a fixed point, brute-force
// cap), 3 verify ran but the matrix is not a fixed point.

#include "ilo/ilo.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace ilo::cli {

struct Rejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint64_t seed = 0;
  int threads = 1;
  std::string format = "text";
  int restarts = OracleConfig{}.restarts;
  int rank = 0;

  // iterate / classify
  std::string domain;
  int n = 0;
  std::string start;
  std::string point;
  std::string matrix;
  double tol = 1e-10;
  int max_iter = 10000;
  std::string trace;

  // verify
  double fixed_tol = 1e-8;

  // classify
  double eps = 1e-2;
  int samples = 32;

  // maxcut
  std::string graph;
  std::string baseline;
  bool brute_force = false;
  int gw_samples = 64;
  double escape_alpha = RoundingConfig{}.escape_alpha;
  int escape_retries = RoundingConfig{}.escape_retries;
  std::string csv;

  OutputFormat output() const { return format == "json" ? OutputFormat::json : OutputFormat::text; }

  OracleConfig oracle() const {
    OracleConfig c;
    c.seed = seed;
    c.threads = threads;
    c.restarts = restarts;
    c.rank = rank;
    return c;
  }
};

inline bool is_elliptope(const std::string& domain) { return domain == "elliptope"; }

inline ElliptopeMatrix load_member(const std::string& path) {
  const SymMatrix m = read_matrix_file(path);
  try {
    return ElliptopeMatrix::validated(m);
  } catch (const ElliptopeError& e) {
    throw Rejected(path + ": not in the elliptope: " + e.what());
  }
}

inline void open_out(std::ofstream& f, const std::string& path) {
  f.open(path);
  if (!f) throw ParseError("cannot open output file '" + path + "'");
}

inline int cmd_iterate(const Options& o, std::ostream& out) {
  IterationConfig cfg;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  Json rep;
  if (is_elliptope(o.domain)) {
    if (o.start.empty()) throw ParseError("iterate: --start must name a matrix file for the elliptope");
    const auto x0 = load_member(o.start);
    if (o.n > 0 && x0.size() != o.n)
      throw ParseError("iterate: --n " + std::to_string(o.n) + " does not match the start matrix size " +
                       std::to_string(x0.size()));
    const ElliptopeOracle oracle{o.oracle(), true, {}};
    const auto traj = iterate(oracle, x0.sym(), cfg);
    const auto terminal = ElliptopeMatrix::trusted(traj.final_point());
    rep["domain"] = "elliptope";
    rep["status"] = std::string(to_string(traj.status));
    rep["iterations"] = traj.iterations();
    rep["final_norm_sq"] = traj.norms_sq.back();
    rep["final_residual"] = traj.final_residual;
    rep["monotone"] = monotone_json(check_monotone(traj));
    rep["terminal"] = detail::to_json(terminal.mat());
    rep["certificate"] = verify_json(terminal, o.fixed_tol);
    if (!o.trace.empty()) {
      std::ofstream f;
      open_out(f, o.trace);
      f << "iter,norm_sq,step_norm,residual\n";
      const std::size_t last = traj.norms_sq.size() - 1;
      for (std::size_t i = 0; i <= last; ++i)
        f << i << ',' << fmt17(traj.norms_sq[i]) << ',' << fmt17(i == 0 ? 0.0 : traj.step_norms[i - 1])
          << ',' << fmt17(i < last ? traj.step_norms[i] : traj.final_residual) << '\n';
    }
  } else {
    if (o.domain.empty()) throw ParseError("iterate: --domain is required");
    if (o.start.empty()) throw ParseError("iterate: --start is required");
    const DomainOracle oracle = load_domain_config(o.domain);
    const Point x0 = parse_point(o.start);
    if (x0.size() != oracle.dim())
      throw ParseError("iterate: start has dimension " + std::to_string(x0.size()) + ", domain has " +
                       std::to_string(oracle.dim()));
    Trajectory<Vector> traj;
    try {
      traj = iterate(oracle, x0, cfg);
    } catch (const InfeasibleStart& e) {
      throw Rejected(e.what());
    }
    rep = trajectory_json(traj, oracle.kind());
    if (!o.trace.empty()) {
      std::ofstream f;
      open_out(f, o.trace);
      write_trajectory_csv(f, traj);
    }
  }
  write_report(out, rep, o.output());
  return 0;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  if (o.matrix.empty()) throw ParseError("verify: --matrix is required");
  const auto x = load_member(o.matrix);
  const Json rep = verify_json(x, o.fixed_tol);
  write_report(out, rep, o.output());
  return rep["verdict"] == "fixed" ? 0 : 3;
}

inline int cmd_census(const Options& o, std::ostream& out) {
  if (o.n < 2) throw ParseError("census: --n must be at least 2");
  write_report(out, census_json(o.n, sign_census(o.n)), o.output());
  return 0;
}

inline int cmd_classify(const Options& o, std::ostream& out) {
  ClassificationConfig cfg;
  cfg.eps = o.eps;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  cfg.fixed_tol = o.fixed_tol;
  cfg.threads = o.threads;
  Json rep;
  try {
    if (is_elliptope(o.domain) || (o.domain.empty() && !o.matrix.empty())) {
      if (o.matrix.empty()) throw ParseError("classify: --matrix is required for the elliptope");
      const auto x = load_member(o.matrix);
      const ElliptopeOracle oracle{o.oracle(), true, {}};
      const auto structural = classify_elliptope_fixed_point(x, o.fixed_tol);
      rep["domain"] = "elliptope";
      rep["vertex"] = is_vertex(x);
      rep["structural"] = classification_json(structural);
      rep["empirical"] = classification_json(classify_empirical(oracle, x, cfg));
    } else {
      if (o.domain.empty()) throw ParseError("classify: --domain is required");
      if (o.point.empty()) throw ParseError("classify: --point is required");
      const DomainOracle oracle = load_domain_config(o.domain);
      const Point x = parse_point(o.point);
      if (x.size() != oracle.dim()) throw ParseError("classify: point dimension does not match the domain");
      if (!oracle.contains(x)) throw Rejected("classify: point is not in the domain");
      rep["domain"] = std::string(oracle.kind());
      rep["point"] = detail::to_json(x);
      rep["empirical"] = classification_json(classify_empirical(oracle, x, cfg));
    }
  } catch (const NotFixedPoint& e) {
    throw Rejected(e.what());
  }
  write_report(out, rep, o.output());
  return 0;
}

inline int cmd_maxcut(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.graph.empty()) throw ParseError("maxcut: --graph is required");
  std::vector<std::string> warnings;
  const WeightedGraph g = load_graph(o.graph, &warnings);
  if (o.brute_force && g.n > 22)
    throw Rejected("maxcut: brute force is limited to n <= 22 (graph has n = " + std::to_string(g.n) + ")");
  if (!o.baseline.empty() && o.baseline != "gw") throw ParseError("maxcut: unknown baseline '" + o.baseline + "'");
  PipelineOptions p;
  p.rounding.oracle = o.oracle();
  p.rounding.escape_alpha = o.escape_alpha;
  p.rounding.escape_retries = o.escape_retries;
  p.gw_baseline = o.baseline == "gw";
  p.gw_samples = o.gw_samples;
  p.brute_force = o.brute_force;
  p.threads = o.threads;
  auto rep = maxcut_pipeline(g, p);
  rep.warnings.insert(rep.warnings.begin(), warnings.begin(), warnings.end());
  for (const auto& w : rep.warnings) err << "warning: " << w << '\n';
  write_report(out, rounding_json(rep), o.output());
  if (!o.csv.empty()) {
    std::ofstream f;
    open_out(f, o.csv);
    f << rounding_csv_header() << '\n' << rounding_csv_row(o.graph, rep) << '\n';
  }
  return 0;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Iterated linear optimization over convex domains and the elliptope"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML file with option defaults (flags override it)");
  Options o;
  app.add_option("--seed", o.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  app.add_option("--restarts", o.restarts, "Oracle restarts")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--rank", o.rank, "Oracle rank budget (0 = default)")->check(CLI::NonNegativeNumber);

  auto* it = app.add_subcommand("iterate", "Iterate T from a start point");
  it->add_option("--domain", o.domain, "Domain descriptor file, or 'elliptope'");
  it->add_option("--n", o.n, "Matrix size for the elliptope");
  it->add_option("--start", o.start, "Start point \"x1,x2,...\", or a matrix file for the elliptope");
  it->add_option("--tol", o.tol, "Step-norm tolerance")->capture_default_str();
  it->add_option("--max-iter", o.max_iter, "Iteration cap")->capture_default_str();
  it->add_option("--trace", o.trace, "Write the trajectory as CSV");

  auto* ve = app.add_subcommand("verify", "Check X^2 = DX for a matrix in L_n");
  ve->add_option("--matrix", o.matrix, "Matrix file")->required();
  ve->add_option("--tol", o.fixed_tol, "Certificate tolerance (scaled by n)")->capture_default_str();

  auto* ce = app.add_subcommand("census", "Vertices and sign-kernel fixed points of L_n");
  ce->add_option("--n", o.n, "Matrix size")->required();

  auto* cl = app.add_subcommand("classify", "Classify a fixed point");
  cl->add_option("--domain", o.domain, "Domain descriptor file, or 'elliptope'");
  cl->add_option("--point", o.point, "Fixed point \"x1,x2,...\"");
  cl->add_option("--matrix", o.matrix, "Fixed point matrix file (elliptope)");
  cl->add_option("--eps", o.eps, "Perturbation radius")->capture_default_str();
  cl->add_option("--samples", o.samples, "Perturbation samples")->check(CLI::PositiveNumber)->capture_default_str();
  cl->add_option("--tol", o.tol, "Iteration step tolerance")->capture_default_str();
  cl->add_option("--max-iter", o.max_iter, "Iteration cap per sample")->capture_default_str();

  auto* mc = app.add_subcommand("maxcut", "SDP relaxation and rounding by iteration");
  mc->add_option("--graph", o.graph, "Edge-list file")->required();
  mc->add_option("--baseline", o.baseline, "Also run a baseline ('gw')");
  mc->add_flag("--brute-force", o.brute_force, "Also compute the exact optimum (n <= 22)");
  mc->add_option("--gw-samples", o.gw_samples, "Hyperplanes for the baseline")->capture_default_str();
  mc->add_option("--escape-alpha", o.escape_alpha, "Escape step length")->capture_default_str();
  mc->add_option("--escape-retries", o.escape_retries, "Escapes before falling back")->capture_default_str();
  mc->add_option("--csv", o.csv, "Write a CSV summary (header and one row)");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (it->parsed()) return cmd_iterate(o, out);
    if (ve->parsed()) return cmd_verify(o, out);
    if (ce->parsed()) return cmd_census(o, out);
    if (cl->parsed()) return cmd_classify(o, out);
    return cmd_maxcut(o, out, err);
  } catch (const Rejected& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ilo::cli
