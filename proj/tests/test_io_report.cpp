#include "ilo/io.hpp"
#include "ilo/report.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ilo;

TEST(MatrixIo, RoundTrip) {
  const auto x = l4_family(0.6).mat();
  std::ostringstream os;
  write_matrix(os, x);
  std::istringstream in(os.str());
  EXPECT_EQ(read_matrix(in).mat(), x);
}

TEST(MatrixIo, Errors) {
  std::istringstream a("2\n1 0.5\n0.4 1\n");
  EXPECT_THROW(read_matrix(a), ParseError);
  std::istringstream b("2\n1 0\n0\n");
  EXPECT_THROW(read_matrix(b), ParseError);
  std::istringstream c("2\n1 0\n0 1 7\n");
  EXPECT_THROW(read_matrix(c), ParseError);
  std::istringstream d("x\n");
  EXPECT_THROW(read_matrix(d), ParseError);
  std::istringstream e("2\n1 q\nq 1\n");
  EXPECT_THROW(read_matrix(e), ParseError);
  try {
    read_matrix_file("/nonexistent/m.txt");
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_NE(std::string(err.what()).find("/nonexistent/m.txt"), std::string::npos);
  }
}

TEST(PointIo, Parse) {
  EXPECT_EQ(parse_point("0,1.9"), (Vector(2) << 0, 1.9).finished());
  EXPECT_EQ(parse_point(" 1 2 3 ").size(), 3);
  EXPECT_THROW(parse_point(""), ParseError);
  EXPECT_THROW(parse_point("1,a"), ParseError);
}

TEST(DomainIo, Kinds) {
  std::istringstream disk("kind=disk\ncenter=1,0\nradius=2\n");
  EXPECT_EQ(parse_domain_config(disk).kind(), "ball");
  std::istringstream ell("# ellipse\nkind=ellipse\nshape_row=4,0\nshape_row=0,1\n");
  EXPECT_EQ(parse_domain_config(ell).kind(), "ellipsoid");
  std::istringstream poly("kind=polytope\nvertex=1,1\nvertex=-1,1\nvertex=0,-1\n");
  EXPECT_EQ(parse_domain_config(poly).dim(), 2);
  std::istringstream cone("kind=cone\napex=0,0,2\nbase_center=0,0,0\nbase_radius=1\n");
  EXPECT_EQ(parse_domain_config(cone).kind(), "cone");
}

TEST(DomainIo, Errors) {
  std::istringstream a("kind=ball\ncenter=0,0\n");
  EXPECT_THROW(parse_domain_config(a), ParseError);
  std::istringstream b("kind=torus\n");
  EXPECT_THROW(parse_domain_config(b), ParseError);
  std::istringstream c("kind=ball\ncolour=red\n");
  EXPECT_THROW(parse_domain_config(c), ParseError);
  std::istringstream d("kind=ball\ncenter=0,0\nradius=-1\n");
  EXPECT_THROW(parse_domain_config(d), ParseError);
  std::istringstream e("kind=ellipse\nshape_row=1,2\nshape_row=2,1\n");
  EXPECT_THROW(parse_domain_config(e), ParseError);
  std::istringstream f("kind ball\n");
  try {
    parse_domain_config(f);
    FAIL();
  } catch (const ParseError& err) {
    EXPECT_NE(std::string(err.what()).find("line 1"), std::string::npos);
  }
}

TEST(Report, TextUses17Digits) {
  Json j;
  j["x"] = 0.1;
  j["v"] = std::vector<double>{1.0 / 3, 2};
  j["label"] = "fixed";
  const auto s = render_report(j, OutputFormat::text);
  EXPECT_NE(s.find("x: 0.10000000000000001"), std::string::npos) << s;
  EXPECT_NE(s.find("v: 0.33333333333333331 2"), std::string::npos) << s;
  EXPECT_NE(s.find("label: fixed"), std::string::npos);
}

TEST(Report, VerifyFields) {
  const auto j = verify_json(l4_family(0.6));
  EXPECT_EQ(j["verdict"], "fixed");
  EXPECT_EQ(j["rank"], 2);
  ASSERT_EQ(j["blocks"].size(), 1u);
  EXPECT_NEAR(j["blocks"][0]["gamma"].get<double>(), 2.0, 1e-12);
  for (const auto& d : j["d"]) EXPECT_NEAR(d.get<double>(), 2.0, 1e-12);
}

TEST(Report, CensusBanner) {
  EXPECT_FALSE(census_json(3, sign_census(3)).contains("banner"));
  const auto j = census_json(4, sign_census(4));
  EXPECT_EQ(j["banner"], "partial (infinite set exists)");
  EXPECT_EQ(j["vertices"], 8);
}

TEST(Report, RoundingCsv) {
  PipelineOptions opt;
  opt.brute_force = true;
  const auto r = maxcut_pipeline(WeightedGraph::complete(3), opt);
  const std::string row = rounding_csv_row("k3", r);
  EXPECT_EQ(row.rfind("k3,3,3,", 0), 0u) << row;
  EXPECT_EQ(row.substr(row.size() - 3), ",,2");
  const auto j = rounding_json(r);
  EXPECT_EQ(j["terminal_status"], "vertex");
  EXPECT_EQ(j["cut_value"], 2.0);
}
