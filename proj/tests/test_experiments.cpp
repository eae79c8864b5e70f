#include "fveasm/experiments.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <tuple>

using namespace fveasm;

TEST_CASE("mesh sizes") {
  CHECK(parse_mesh_size("1/64") == 64);
  CHECK(parse_mesh_size("0.125") == 8);
  CHECK(parse_mesh_size("16") == 16);
  CHECK_THROWS_AS(parse_mesh_size("0.3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mesh_size("2/8"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mesh_size("1/x"), std::invalid_argument);
  CHECK_THROWS_AS(parse_mesh_size("-0.5"), std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.N = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.N = 8;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);  // H/h = 1
  c = {};
  c.tol = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.field = "checkerboard";
  c.n = 12;
  c.N = 3;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.field = "bumpy";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("string conversions") {
  CHECK(eig_mode_from_string("off") == EigMode::off);
  CHECK(to_string(EigMode::lanczos) == "lanczos");
  CHECK_THROWS_AS(eig_mode_from_string("qr"), std::invalid_argument);
  CHECK(table_from_string("table3") == TableName::table3);
  CHECK(to_string(TableName::table4) == "table4");
  CHECK_THROWS_AS(table_from_string("table5"), std::invalid_argument);
}

TEST_CASE("golden coverage: every reference cell exactly once") {
  const auto& all = goldens();
  CHECK(all.size() == 21 + 21 + 21 + 14);
  std::set<std::tuple<int, int, int, double, int>> keys;
  for (const auto& g : all) {
    keys.insert({static_cast<int>(g.table), g.n, g.N, g.alpha_hat, static_cast<int>(g.variant)});
    CHECK(g.n % g.N == 0);
    CHECK(g.n / g.N >= 2);
  }
  CHECK(keys.size() == all.size());
}

TEST_CASE("table scopes") {
  CHECK(table_configs(TableName::table1, false).size() == 15);
  CHECK(table_configs(TableName::table1, true).size() == 21);
  CHECK(table_configs(TableName::table3, false).front().variant == Variant::nonsymmetric);
  CHECK(table_configs(TableName::table2, false).front().field == "smooth10");
  const auto t4 = table_configs(TableName::table4, false);
  CHECK(t4.size() == 14);
  CHECK(t4.back().alpha_hat == doctest::Approx(1e6));
  for (const auto& c : t4) CHECK(c.n == 64);
}

TEST_CASE("golden lookup") {
  ExperimentConfig c;
  c.n = 64;
  c.N = 16;
  auto g = find_golden(TableName::table1, c);
  REQUIRE(g);
  CHECK(g->iterations == 14);
  CHECK(g->lambda == doctest::Approx(0.353));
  CHECK_FALSE(find_golden(TableName::table2, c));

  c.field = "checkerboard";
  c.N = 8;
  c.alpha_hat = 1e3;
  c.variant = Variant::nonsymmetric;
  g = find_golden(TableName::table4, c);
  REQUIRE(g);
  CHECK(g->iterations == 27);
}

TEST_CASE("tolerance band") {
  CHECK(within_golden_tolerance(9, 0.58, 7, 0.58));
  CHECK_FALSE(within_golden_tolerance(10, 0.58, 7, 0.58));
  CHECK(within_golden_tolerance(7, 0.608, 7, 0.58));
  CHECK_FALSE(within_golden_tolerance(7, 0.61, 7, 0.58));
}

TEST_CASE("single runs reproduce reference cells") {
  ExperimentConfig c;
  c.n = 8;
  c.N = 4;
  const TableRow row = run_single(c);
  REQUIRE(row.ok());
  CHECK(row.iterations == 7);
  CHECK(row.lambda_min == doctest::Approx(0.580).epsilon(0.01));
  CHECK(row.expected_iterations == 7);
  CHECK(row.within_tolerance);
  REQUIRE(row.direct_error);
  CHECK(*row.direct_error <= 1e-5);
  CHECK(*row.rhs_consistency <= 1e-9);
  CHECK(row.envelope.passed);

  c.n = 64;
  c.N = 8;
  c.field = "smooth10";
  c.variant = Variant::nonsymmetric;
  c.eig = EigMode::off;
  const TableRow non = run_single(c);
  CHECK(non.iterations == 23);
  CHECK(non.lambda_min == doctest::Approx(0.162).epsilon(0.01));
  CHECK_FALSE(non.beta1);
  CHECK_FALSE(non.direct_error);

  c.field = "checkerboard";
  c.alpha_hat = 1e6;
  c.variant = Variant::symmetric;
  const TableRow jump = run_single(c);
  CHECK(jump.iterations == 27);
  CHECK(jump.lambda_min == doctest::Approx(0.160).epsilon(0.01));
}

TEST_CASE("bad configs become error rows") {
  ExperimentConfig c;
  c.n = 10;
  c.N = 4;
  const TableRow row = run_single(c);
  CHECK_FALSE(row.ok());
  CHECK(row.error.find("multiple") != std::string::npos);
  CHECK_FALSE(row.within_tolerance);
  const std::string csv = format_csv({row});
  CHECK(csv.find("1/10,1/4") != std::string::npos);
}

TEST_CASE("reports are deterministic") {
  ExperimentConfig c;
  c.n = 16;
  c.N = 4;
  c.field = "smooth10";
  const std::string a = format_csv({run_single(c)}, "x");
  const std::string b = format_csv({run_single(c)}, "x");
  CHECK(a == b);
  CHECK(a.rfind("table,h,H,field", 0) == 0);
  CHECK(a.find("x,1/16,1/4,smooth10,1,sym,12,true,") != std::string::npos);
}

TEST_CASE("markdown layout") {
  TableResult result{TableName::table1, false, {}};
  ExperimentConfig c;
  c.n = 8;
  c.N = 4;
  c.eig = EigMode::off;
  result.rows.push_back(run_single(c));
  const std::string md = format_markdown(result);
  CHECK(md.find("| h \\ H | 1/4 |") != std::string::npos);
  CHECK(md.find("| 1/8 | 7 (5.80e-1) |") != std::string::npos);
  CHECK(md.find("1 of 1 cells pass") != std::string::npos);
  CHECK(result.passed());
}

TEST_CASE("thread count from the environment") {
  CHECK(default_thread_count() >= 1);
}
