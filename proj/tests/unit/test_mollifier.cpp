#include <cmath>

#include "doctest.h"
#include "mml/mollifier.hpp"
#include "mml/quadrature.hpp"
#include "oracles/oracles.hpp"

using mml::Complex;

namespace {

const mml::MobiusTable& mobius() {
  static const auto table = mml::mobius_sieve(5000);
  return table;
}

// |M_y|^2 at s = 1/2 + it by direct evaluation at a fixed y.
double abs_sq_at(double y, double t) {
  const auto spec = mml::MollifierSpec::make(y, mobius());
  return std::norm(mml::mollifier_value(spec, t));
}

}  // namespace

TEST_SUITE("mollifier") {
  TEST_CASE("x = 1 is the zero function") {
    const auto spec = mml::MollifierSpec::make(1.0, mobius());
    CHECK(spec.is_zero());
    CHECK(mml::mollifier_value(spec, 0.0) == Complex(0.0));
    CHECK(mml::mollifier_value(spec, 123.0) == Complex(0.0));
    const auto grid = mml::mollifier_grid(spec, {0.0, 0.5, 10});
    for (const auto& v : grid) CHECK(v == Complex(0.0));
  }

  TEST_CASE("x = 2, t = 0") {
    const auto spec = mml::MollifierSpec::make(2.0, mobius());
    CHECK(spec.terms() == 1);
    CHECK(std::abs(mml::mollifier_value(spec, 0.0) - Complex(1.0)) < 1e-15);
  }

  TEST_CASE("x = 100, t = 10 against the 50-digit direct sum") {
    const auto spec = mml::MollifierSpec::make(100.0, mobius());
    CHECK(std::abs(mml::mollifier_value(spec, 10.0) - oracle::mollifier_mp(100.0, 10.0)) < 1e-10);
    CHECK(std::abs(mml::mollifier_value(spec, 777.7) - oracle::mollifier_mp(100.0, 777.7)) < 1e-10);
    const auto big = mml::MollifierSpec::make(4321.5, mobius());
    CHECK(std::abs(mml::mollifier_value(big, 2500.0) - oracle::mollifier_mp(4321.5, 2500.0)) < 1e-10);
  }

  TEST_CASE("conjugate symmetry") {
    const auto spec = mml::MollifierSpec::make(321.0, mobius());
    for (double t : {0.7, 13.0, 401.25}) {
      CHECK(std::abs(mml::mollifier_value(spec, -t) - std::conj(mml::mollifier_value(spec, t))) < 1e-14);
    }
  }

  TEST_CASE("continuity in x across integers") {
    for (double n : {6.0, 30.0, 210.0}) {
      const auto below = mml::MollifierSpec::make(n - 1e-9, mobius());
      const auto above = mml::MollifierSpec::make(n + 1e-9, mobius());
      const auto at = mml::MollifierSpec::make(n, mobius());
      CHECK(std::abs(mml::mollifier_value(below, 5.0) - mml::mollifier_value(above, 5.0)) < 1e-8);
      CHECK(std::abs(mml::mollifier_value(at, 5.0) - mml::mollifier_value(above, 5.0)) < 1e-8);
    }
  }

  TEST_CASE("single-point grid") {
    const auto spec = mml::MollifierSpec::make(50.0, mobius());
    const auto grid = mml::mollifier_grid(spec, {3.25, 0.1, 1});
    REQUIRE(grid.size() == 1);
    CHECK(std::abs(grid[0] - mml::mollifier_value(spec, 3.25)) < 1e-15);
  }

  TEST_CASE("grid matches pointwise evaluation") {
    const auto spec = mml::MollifierSpec::make(1000.0, mobius());
    const mml::TGrid grid{0.0, 100.0 / 999.0, 1000};
    const auto values = mml::mollifier_grid(spec, grid);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.count; ++k) {
      worst = std::max(worst, std::abs(values[k] - mml::mollifier_value(spec, grid.at(k))));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("long grid stays anchored and ignores the worker count") {
    const auto spec = mml::MollifierSpec::make(4999.0, mobius());
    const mml::TGrid grid{1000.0, 0.013, 5000};
    const auto serial = mml::mollifier_grid(spec, grid, 1);
    const auto threaded = mml::mollifier_grid(spec, grid, 4);
    REQUIRE(serial.size() == threaded.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.count; ++k) {
      CHECK(serial[k] == threaded[k]);
      if (k % 97 == 0) worst = std::max(worst, std::abs(serial[k] - mml::mollifier_value(spec, grid.at(k))));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("grid validation") {
    const auto spec = mml::MollifierSpec::make(10.0, mobius());
    CHECK_THROWS_AS(mml::mollifier_grid(spec, {0.0, 1.0, 0}), mml::SizingError);
    CHECK_THROWS_AS(mml::mollifier_grid(spec, {0.0, NAN, 3}), mml::DomainError);
  }

  TEST_CASE("length profile integrals against dense quadrature in y") {
    const double x = 37.5;
    const double t = 4.0;
    const mml::LengthProfile profile(x, mobius());
    // Piecewise Gauss-Legendre between integers; M_y is smooth on each piece.
    double sq = 0.0;
    double sq_log2 = 0.0;
    double abs_log = 0.0;
    for (double a = 1.0; a < x; a += 1.0) {
      const double b = std::min(a + 1.0, x);
      sq += mml::integrate_gl([&](double y) { return abs_sq_at(y, t); }, a, b, 40);
      sq_log2 += mml::integrate_gl([&](double y) { return abs_sq_at(y, t) * std::pow(std::log(y), 2); }, a, b, 40);
      abs_log += mml::integrate_gl([&](double y) { return std::sqrt(abs_sq_at(y, t)) * std::log(y); }, a, b, 40);
    }
    CHECK(profile.integral_abs_sq(t) == doctest::Approx(sq).epsilon(1e-9));
    CHECK(profile.integral_abs_sq_log2(t) == doctest::Approx(sq_log2).epsilon(1e-9));
    CHECK(profile.integral_abs_log(t) == doctest::Approx(abs_log).epsilon(1e-6));
  }

  TEST_CASE("ladder reproduces M_y log y") {
    const mml::LengthProfile profile(60.0, mobius());
    const double t = 11.0;
    for (const auto& rung : profile.ladder(t)) {
      const double y = 0.5 * (rung.a + rung.b);
      const auto spec = mml::MollifierSpec::make(y, mobius());
      const Complex direct = mml::mollifier_value(spec, t) * std::log(y);
      CHECK(std::abs(rung.A * std::log(y) - rung.B - direct) < 1e-12);
    }
  }
}
