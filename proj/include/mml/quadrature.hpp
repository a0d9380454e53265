#pragma once

#include <cstddef>
#include <vector>

namespace mml {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// Rules are built once per order and shared; the returned reference stays valid
// for the lifetime of the program.
const GaussLegendreRule& gauss_legendre(std::size_t order);

// Integral of f over [a, b] with a single Gauss-Legendre panel.
template <class F>
auto integrate_gl(F&& f, double a, double b, std::size_t order) {
  const auto& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  decltype(f(mid)) acc{};
  for (std::size_t i = 0; i < rule.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace mml
