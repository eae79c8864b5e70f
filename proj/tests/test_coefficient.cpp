#include "fveasm/coefficient.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace fveasm;

TEST_CASE("smooth fields") {
  const auto a1 = smooth_field(1);
  CHECK(a1({0.5, 0.5})(0, 0) == doctest::Approx(3.0));
  CHECK(a1({0.5, 0.5})(0, 1) == 0.0);
  CHECK(a1({0.0, 0.3})(1, 1) == doctest::Approx(2.0));

  const auto a10 = smooth_field(10);
  CHECK(a10({0.05, 0.15})(0, 0) == doctest::Approx(1.0));
  CHECK(sampled_min_eigenvalue(a10) >= 1.0 - 1e-12);
  CHECK_THROWS_AS(smooth_field(0), std::invalid_argument);
}

TEST_CASE("checkerboard shading starts in the lower-left subdomain") {
  const auto c = checkerboard_field(10, 1e3, 8);
  const double base = 2.0 + std::sin(10 * std::numbers::pi * 0.06) * std::sin(10 * std::numbers::pi * 0.06);
  CHECK(c({0.06, 0.06})(0, 0) == doctest::Approx(1e3 * base));
  CHECK(c.cell_multiplier(0, 0) == 1e3);
  CHECK(c.cell_multiplier(1, 0) == 1.0);
  CHECK(c.cell_multiplier(0, 1) == 1.0);
  CHECK(c.cell_multiplier(1, 1) == 1e3);
  CHECK(c.cell_multiplier(7, 7) == 1e3);
}

TEST_CASE("cells are half-open except on the top and right edges") {
  const auto c = checkerboard_field(10, 5.0, 4);
  CHECK(c.cell_of({0.25, 0.0}) == std::pair{1, 0});
  CHECK(c.cell_of({0.2499, 0.0}) == std::pair{0, 0});
  CHECK(c.cell_of({1.0, 1.0}) == std::pair{3, 3});
  // a locator moves evaluation to the cell that contains it
  const Point on_edge{0.25, 0.1};
  CHECK(c.evaluate(on_edge, {0.2, 0.1})(0, 0) == doctest::Approx(5.0 * c.evaluate(on_edge, {0.3, 0.1})(0, 0)));
}

TEST_CASE("checkerboard arguments are validated") {
  CHECK_THROWS_AS(checkerboard_field(10, 0.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(checkerboard_field(10, -2.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(checkerboard_field(10, 10.0, 3), std::invalid_argument);
}

TEST_CASE("constant and cellwise constant fields") {
  const auto c = constant_field(3.0);
  CHECK(c({0.7, 0.2})(1, 1) == 3.0);
  Tensor2 nonsym;
  nonsym << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(constant_field(nonsym), std::invalid_argument);

  const auto w = cellwise_constant_field(2, {1.0, 2.0, 3.0, 4.0});
  CHECK(w({0.1, 0.1})(0, 0) == 1.0);
  CHECK(w({0.9, 0.1})(0, 0) == 2.0);
  CHECK(w({0.1, 0.9})(0, 0) == 3.0);
  CHECK(w({0.9, 0.9})(0, 0) == 4.0);
  CHECK_THROWS_AS(cellwise_constant_field(2, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("fields by name") {
  CHECK(field_by_name("smooth1", 1.0, 4).name() == "smooth1");
  CHECK(field_by_name("smooth10", 1.0, 4).name() == "smooth10");
  const auto cb = field_by_name("checkerboard", 100.0, 8);
  CHECK(cb.cells_per_side() == 8);
  CHECK(cb.cell_multiplier(0, 0) == 100.0);
  CHECK_THROWS_AS(field_by_name("wavy", 1.0, 4), std::invalid_argument);
}

TEST_CASE("ellipticity") {
  CHECK_NOTHROW(require_elliptic(smooth_field(1)));
  CHECK_THROWS_AS(require_elliptic(constant_field(-1.0)), std::domain_error);
  const double lo = sampled_min_eigenvalue(checkerboard_field(10, 1e6, 8));
  CHECK(lo >= 1.0);
  CHECK(lo < 1.05);
}
