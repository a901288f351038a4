#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "greenbound/potential.hpp"

using namespace greenbound;

TEST_CASE("inverted gaussian") {
  const auto v = inverted_gaussian();
  CHECK(v(0.0) == 1.0);
  CHECK(v(20.0) < 1e-86);
  for (double x : {0.1, 0.7, 2.5, 9.0}) CHECK(v(x) == v(-x));
  CHECK(v.symmetric_about_zero);
  CHECK(v.vanishes_at_infinity);
  CHECK_FALSE(v.singular);
}

TEST_CASE("poschl-teller") {
  const auto v = poschl_teller();
  CHECK(v(0.0) == 1.0);
  CHECK(v(1.0) == doctest::Approx(0.41997434161402614).epsilon(1e-14));
  const auto g = make_grid(20.0, 4001);
  CHECK_NOTHROW(validate_on_grid(v, g));
}

TEST_CASE("square well") {
  const auto v = square_well(1.0);
  CHECK(v(0.5) == 1.0);
  CHECK(v(1.5) == 0.0);
  CHECK(v(1.0) == 1.0);
  CHECK(v(-1.0) == 1.0);
  CHECK_THROWS_AS(square_well(0.0), ConfigError);
  CHECK_THROWS_AS(square_well(-1.0), ConfigError);

  const auto g = make_grid(20.0, 4001);
  // A jump costs Simpson one order per edge: O(h), not O(h^4).
  CHECK(std::abs(integrate(g, square_well(2.0).sample(g)) - 4.0) <= g.spacing());
}

TEST_CASE("tabulated: interpolation, zero extension, symmetry flag") {
  const auto tent = tabulated<double>({{-1, 0}, {0, 1}, {1, 0}, {2, 0}});
  CHECK(tent(0.5) == 0.5);
  CHECK(tent(-0.25) == 0.75);
  CHECK(tent(5.0) == 0.0);
  CHECK(tent(-5.0) == 0.0);
  CHECK(tent.symmetric_about_zero);

  const auto lopsided = tabulated<double>({{-1, 0}, {0, 1}, {0.5, 2}, {1, 0}});
  CHECK_FALSE(lopsided.symmetric_about_zero);
}

TEST_CASE("tabulated: rejects bad tables") {
  CHECK_THROWS_AS(tabulated<double>({{0, 1}, {1, 1}, {2, 1}}), ConfigError);
  CHECK_THROWS_AS(tabulated<double>({{0, 1}, {1, 1}, {1, 1}, {2, 1}}), ConfigError);
  CHECK_THROWS_AS(tabulated<double>({{0, 1}, {1, -1}, {2, 1}, {3, 0}}), ConfigError);
}

TEST_CASE("bundled shapes are non-negative and symmetric on the grid") {
  const auto g = make_grid(20.0, 801);
  for (const auto& v : {inverted_gaussian(), poschl_teller(), square_well(1.0)}) {
    CHECK((v.sample(g).array() >= 0.0).all());
    CHECK_NOTHROW(validate_on_grid(v, g));
  }
}

TEST_CASE("validate_on_grid: catches lying metadata") {
  const auto g = make_grid(5.0, 101);
  Potential shifted{[](double x) { return std::exp(-(x - 1) * (x - 1)); }, "shifted", true, false, true};
  CHECK_THROWS_AS(validate_on_grid(shifted, g), ConfigError);

  Potential wide = inverted_gaussian();
  CHECK_THROWS_AS(validate_on_grid(wide, make_grid(3.0, 101)), ConfigError);

  Potential negative{[](double x) { return x * x - 1; }, "negative", true, false, false};
  CHECK_THROWS_AS(validate_on_grid(negative, g), ConfigError);
}

TEST_CASE("load_tabulated_file") {
  const std::string path = "greenbound_test_table.tab";
  {
    std::ofstream f(path);
    f << "# tent\n-1 0\n0 1   # peak\n\n1 0\n2 0\n";
  }
  const auto v = load_tabulated_file(path);
  CHECK(v(0.5) == 0.5);
  CHECK(v.name == path);
  std::remove(path.c_str());

  try {
    load_tabulated_file("definitely-missing.tab");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("definitely-missing.tab") != std::string::npos);
  }

  {
    std::ofstream f(path);
    f << "0 1\n1 x\n";
  }
  CHECK_THROWS_AS(load_tabulated_file(path), ConfigError);
  std::remove(path.c_str());
}
