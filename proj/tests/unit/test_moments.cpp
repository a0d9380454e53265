#include <cmath>

#include "doctest.h"
#include "mml/moments.hpp"
#include "mml/zeta.hpp"

namespace {

const mml::MobiusTable& mobius() {
  static const auto table = mml::mobius_sieve(1000);
  return table;
}

// Composite trapezoid with step h on [a, b].
double trapezoid(const std::function<double(double)>& f, double a, double b, std::size_t steps) {
  const double h = (b - a) / static_cast<double>(steps);
  double acc = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k < steps; ++k) acc += f(a + h * static_cast<double>(k));
  return acc * h;
}

}  // namespace

TEST_SUITE("moments") {
  TEST_CASE("integrand examples") {
    const auto one = mml::MollifierSpec::make(1.0, mobius());
    CHECK(mml::moment_integrand(one, 0.0) == 0.0);
    CHECK(mml::moment_integrand(one, 77.0) == 0.0);
    const auto ten = mml::MollifierSpec::make(10.0, mobius());
    CHECK(mml::moment_integrand(ten, 14.1347251417) < 1e-10);
    const auto two = mml::MollifierSpec::make(2.0, mobius());
    CHECK(mml::moment_integrand(two, 0.0) == doctest::Approx(2.1326352916).epsilon(1e-9));
    CHECK_THROWS_AS(mml::moment_integrand(two, -1.0), mml::DomainError);
  }

  TEST_CASE("x = 1 gives exactly zero") {
    const auto one = mml::MollifierSpec::make(1.0, mobius());
    const auto r = mml::mollified_moment(one, 0.0, 500.0);
    CHECK(r.value == 0.0);
    CHECK(r.converged);
  }

  TEST_CASE("x = 50 on [0, 100] against a dense trapezoid") {
    const auto spec = mml::MollifierSpec::make(50.0, mobius());
    const auto r = mml::mollified_moment(spec, 0.0, 100.0);
    CHECK(r.converged);
    CHECK(r.value > 0.0);
    // The adaptive rule starts near 8 nodes per period; the oracle uses ten times that.
    const double freq = mml::moment_frequency(std::log(50.0), 100.0);
    const auto steps = static_cast<std::size_t>(std::ceil(100.0 * freq / (2.0 * mml::kPi) * 80.0));
    const double ref = trapezoid([&](double t) { return mml::moment_integrand(spec, t); }, 0.0, 100.0, steps);
    CHECK(std::abs(r.value - ref) / ref < 1e-4);
  }

  TEST_CASE("halving the panel width stays within the error estimate") {
    for (double x : {10.0, 300.0}) {
      const auto spec = mml::MollifierSpec::make(x, mobius());
      mml::QuadratureConfig fine;
      fine.nodes_per_period = 16;
      const auto a = mml::mollified_moment(spec, 0.0, 300.0);
      const auto b = mml::mollified_moment(spec, 0.0, 300.0, fine);
      CHECK(std::abs(a.value - b.value) < 3.0 * std::max(a.err_estimate, b.err_estimate));
    }
  }

  TEST_CASE("worker count does not change the result") {
    const auto spec = mml::MollifierSpec::make(100.0, mobius());
    mml::QuadratureConfig one;
    one.workers = 1;
    mml::QuadratureConfig many;
    many.workers = 5;
    CHECK(mml::mollified_moment(spec, 10.0, 400.0, one).value == mml::mollified_moment(spec, 10.0, 400.0, many).value);
  }

  TEST_CASE("window checks") {
    const auto spec = mml::MollifierSpec::make(10.0, mobius());
    CHECK_THROWS_AS(mml::mollified_moment(spec, 100.0, 100.0), mml::DomainError);
    CHECK_THROWS_AS(mml::mollified_moment(spec, -1.0, 100.0), mml::DomainError);
    CHECK_THROWS_AS(mml::second_moment_zeta(100.0, 100.0), mml::DomainError);
  }

  TEST_CASE("length average against a y Riemann sum") {
    const double x = 10.0;
    const auto avg = mml::moment_length_average(x, mobius(), 0.0, 50.0);
    CHECK(avg.converged);
    const int nodes = 200;
    const double h = (x - 1.0) / nodes;
    double sum = 0.0;
    for (int k = 0; k < nodes; ++k) {
      const double y = 1.0 + h * (k + 0.5);
      sum += mml::mollified_moment(mml::MollifierSpec::make(y, mobius()), 0.0, 50.0).value;
    }
    sum *= h;
    CHECK(std::abs(avg.value - sum) / sum < 1e-3);
  }

  TEST_CASE("length average at x = 2: positive and below the crude bound") {
    const auto avg = mml::moment_length_average(2.0, mobius(), 0.0, 50.0);
    CHECK(avg.value > 0.0);
    double max_I = 0.0;
    for (double y = 1.0; y <= 2.0; y += 0.05) {
      max_I = std::max(max_I, mml::mollified_moment(mml::MollifierSpec::make(y, mobius()), 0.0, 50.0).value);
    }
    CHECK(avg.value <= (2.0 - 1.0) * max_I * (1.0 + 1e-9));
    CHECK_THROWS_AS(mml::moment_length_average(1.5, mobius(), 0.0, 50.0), mml::DomainError);
  }

  TEST_CASE("length average grows with x") {
    const auto a = mml::moment_length_average(10.0, mobius(), 0.0, 100.0);
    const auto b = mml::moment_length_average(20.0, mobius(), 0.0, 100.0);
    CHECK(b.value > a.value);
  }

  TEST_CASE("dyadic additivity") {
    const auto spec = mml::MollifierSpec::make(100.0, mobius());
    const auto whole = mml::mollified_moment(spec, 0.0, 200.0);
    const auto low = mml::mollified_moment(spec, 0.0, 100.0);
    const auto high = mml::mollified_moment(spec, 100.0, 200.0);
    CHECK(std::abs(whole.value - low.value - high.value) <
          3.0 * (whole.err_estimate + low.err_estimate + high.err_estimate) + 1e-9 * whole.value);
  }

  TEST_CASE("second moment of zeta") {
    const auto r = mml::second_moment_zeta(0.0, 2000.0);
    CHECK(r.converged);
    const double main = mml::second_moment_main_term(2000.0);
    CHECK(std::abs(r.value - main) / main < 0.05);
    for (double T : {500.0, 1000.0, 2000.0}) {
      CHECK(mml::second_moment_zeta(0.0, T).value >= 0.5 * T * std::log(T + 2.0));
    }
  }

  TEST_CASE("second moment on a short window against a dense trapezoid") {
    const auto r = mml::second_moment_zeta(0.0, 40.0);
    const double ref = trapezoid(
        [](double t) {
          const double z = mml::hardy_z(t);
          return z * z;
        },
        0.0, 40.0, 40000);
    CHECK(std::abs(r.value - ref) / ref < 1e-6);
  }
}
