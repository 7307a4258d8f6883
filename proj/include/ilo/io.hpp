#pragma once

// Text formats: symmetric matrices ("n" then n rows), comma-separated
// points, and key=value domain descriptors.

#include "ilo/domains.hpp"
#include "ilo/linalg.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ilo {

class ParseError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// First token n, then n·n numbers in row order. Rejected unless symmetric
/// within `sym_tol`.
inline SymMatrix read_matrix(std::istream& in, double sym_tol = 1e-12) {
  long long n = 0;
  if (!(in >> n)) throw ParseError("matrix: expected the dimension n on the first line");
  if (n < 1 || n > 100000) throw ParseError("matrix: invalid dimension " + std::to_string(n));
  Matrix m(n, n);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < n; ++j) {
      std::string tok;
      if (!(in >> tok))
        throw ParseError("matrix: expected " + std::to_string(n * n) + " entries, found " +
                         std::to_string(i * n + j));
      try {
        std::size_t pos = 0;
        m(i, j) = std::stod(tok, &pos);
        if (pos != tok.size()) throw ParseError("");
      } catch (const std::exception&) {
        throw ParseError("matrix: malformed entry '" + tok + "' at row " + std::to_string(i) +
                         ", column " + std::to_string(j));
      }
    }
  std::string extra;
  if (in >> extra) throw ParseError("matrix: unexpected trailing token '" + extra + "'");
  try {
    return SymMatrix::checked(m, sym_tol);
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("matrix: ") + e.what());
  }
}

inline SymMatrix read_matrix_file(const std::string& path, double sym_tol = 1e-12) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return read_matrix(in, sym_tol);
}

inline void write_matrix(std::ostream& os, const Matrix& m) {
  os << m.rows() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << fmt17(m(i, j));
    os << '\n';
  }
}

/// "x1,x2,...": comma and/or whitespace separated reals.
inline Point parse_point(const std::string& text) {
  std::string s = text;
  for (char& ch : s)
    if (ch == ',' || ch == ';') ch = ' ';
  std::istringstream in(s);
  std::vector<double> vals;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      vals.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("point: malformed coordinate '" + tok + "' in '" + text + "'");
    }
  }
  if (vals.empty()) throw ParseError("point: no coordinates in '" + text + "'");
  return Eigen::Map<const Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

/// Domain descriptor, one key=value per line, '#' comments:
///   kind=ball        center=1,0   radius=2
///   kind=ellipsoid   shape_row=4,0   shape_row=0,1      (rows of A, in order)
///   kind=polytope    vertex=1,1   vertex=1,-1   ...     (in order)
///   kind=cone        apex=0,0,2   base_center=0,0,0   base_radius=1
/// "disk" and "ellipse" are accepted as aliases.
inline DomainOracle parse_domain_config(std::istream& in) {
  std::string kind, line;
  Point center, apex, base_center;
  double radius = 0.0, base_radius = 0.0;
  bool have_radius = false, have_base_radius = false;
  std::vector<Point> rows, vertices;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "domain config line " + std::to_string(lineno);
    if (eq == std::string::npos) throw ParseError(where + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    auto real = [&](const std::string& v) {
      try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw ParseError("");
        return d;
      } catch (const std::exception&) {
        throw ParseError(where + ": malformed number '" + v + "'");
      }
    };
    try {
      if (key == "kind") kind = val;
      else if (key == "center") center = parse_point(val);
      else if (key == "radius") radius = real(val), have_radius = true;
      else if (key == "shape_row") rows.push_back(parse_point(val));
      else if (key == "vertex") vertices.push_back(parse_point(val));
      else if (key == "apex") apex = parse_point(val);
      else if (key == "base_center") base_center = parse_point(val);
      else if (key == "base_radius") base_radius = real(val), have_base_radius = true;
      else throw ParseError(where + ": unknown key '" + key + "'");
    } catch (const ParseError& e) {
      const std::string msg = e.what();
      if (msg.rfind("domain config", 0) == 0) throw;
      throw ParseError(where + ": " + msg);
    }
  }
  try {
    if (kind == "ball" || kind == "disk") {
      if (center.size() == 0 || !have_radius) throw ParseError("ball needs center and radius");
      return DomainOracle(BallDomain(center, radius));
    }
    if (kind == "ellipsoid" || kind == "ellipse") {
      if (rows.empty()) throw ParseError("ellipsoid needs shape_row lines");
      Matrix a(static_cast<Eigen::Index>(rows.size()), rows.front().size());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != static_cast<Eigen::Index>(rows.size()))
          throw ParseError("ellipsoid shape matrix must be square");
        a.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      }
      return DomainOracle(EllipsoidDomain(SymMatrix::checked(a, 1e-12)));
    }
    if (kind == "polytope") return DomainOracle(PolytopeDomain(vertices));
    if (kind == "cone") {
      if (apex.size() == 0 || base_center.size() == 0 || !have_base_radius)
        throw ParseError("cone needs apex, base_center and base_radius");
      return DomainOracle(ConeDomain(apex, base_center, base_radius));
    }
  } catch (const ParseError& e) {
    throw ParseError(std::string("domain config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("domain config: ") + e.what());
  }
  throw ParseError("domain config: unknown or missing kind '" + kind + "'");
}

inline DomainOracle load_domain_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open domain file '" + path + "'");
  return parse_domain_config(in);
}

}  // namespace ilo
