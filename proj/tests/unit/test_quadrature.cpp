#include <atomic>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "mml/moments.hpp"
#include "mml/parallel.hpp"
#include "mml/quadrature.hpp"
#include "mml/summation.hpp"

TEST_SUITE("quadrature") {
  TEST_CASE("Gauss-Legendre is exact for polynomials of degree 2n - 1") {
    for (std::size_t n : {1, 2, 5, 12, 16, 32}) {
      const auto& rule = mml::gauss_legendre(n);
      REQUIRE(rule.size() == n);
      double wsum = 0.0;
      for (double w : rule.weights) wsum += w;
      CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
      const int deg = static_cast<int>(2 * n - 1);
      const double exact = (deg % 2 == 0) ? 2.0 / (deg + 1) : 0.0;
      const double even = 2.0 / deg;  // x^{deg-1}
      CHECK(std::abs(mml::integrate_gl([&](double x) { return std::pow(x, deg); }, -1.0, 1.0, n) - exact) < 1e-13);
      CHECK(std::abs(mml::integrate_gl([&](double x) { return std::pow(x, deg - 1); }, -1.0, 1.0, n) - even) < 1e-13);
    }
  }

  TEST_CASE("rules are cached") { CHECK(&mml::gauss_legendre(9) == &mml::gauss_legendre(9)); }

  TEST_CASE("compensated sum") {
    mml::CompensatedSum s;
    s.add(1.0);
    s.add(1e100);
    s.add(1.0);
    s.add(-1e100);
    CHECK(s.value() == 2.0);
  }

  TEST_CASE("pairwise sum is order-fixed") {
    std::vector<double> v;
    for (int i = 0; i < 1001; ++i) v.push_back(1.0 / (1.0 + i));
    const double a = mml::pairwise_sum<double>(v);
    const double b = mml::pairwise_sum<double>(v);
    CHECK(a == b);
    double naive = 0.0;
    for (double x : v) naive += x;
    CHECK(a == doctest::Approx(naive).epsilon(1e-14));
  }

  TEST_CASE("parallel_for visits every index once and forwards exceptions") {
    std::vector<std::atomic<int>> hits(1000);
    mml::parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
    for (const auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(mml::parallel_for(10, 3, [](std::size_t i) {
                      if (i == 7) throw mml::Error("boom");
                    }),
                    mml::Error);
  }

  TEST_CASE("oscillatory integral with a closed form") {
    const double w = 37.0;
    auto f = [w](double t) { return std::cos(w * t) * std::cos(w * t) * std::exp(-0.01 * t); };
    const auto r = mml::integrate_oscillatory(f, 0.0, 50.0, [w](double) { return 2.0 * w; }, {});
    // int_0^50 e^{-ct} (1 + cos 2wt)/2 dt
    const double c = 0.01;
    const double a = 2.0 * w;
    const double exact = 0.5 * (1.0 - std::exp(-c * 50.0)) / c +
                         0.5 * (c - std::exp(-c * 50.0) * (c * std::cos(a * 50.0) - a * std::sin(a * 50.0))) /
                             (c * c + a * a);
    CHECK(r.converged);
    CHECK(std::abs(r.value - exact) < 1e-9);
    CHECK(r.err_estimate < 1e-6 * std::abs(r.value));
  }

  TEST_CASE("non-convergence is reported") {
    mml::QuadratureConfig cfg;
    cfg.max_panels = 4;
    cfg.rel_tol = 1e-12;
    const auto r = mml::integrate_oscillatory([](double t) { return std::sin(t * t); }, 0.0, 60.0,
                                              [](double) { return 1.0; }, cfg);
    CHECK_FALSE(r.converged);
    CHECK(r.err_estimate > 0.0);
  }

  TEST_CASE("config validation") {
    mml::QuadratureConfig cfg;
    cfg.nodes_per_period = 2;
    CHECK_THROWS_AS(cfg.validate(), mml::ConfigError);
    cfg = {};
    cfg.rel_tol = 0.0;
    CHECK_THROWS_AS(cfg.validate(), mml::ConfigError);
  }
}
