#include "mml/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mml/parallel.hpp"
#include "mml/quadrature.hpp"
#include "mml/summation.hpp"

namespace mml {

void QuadratureConfig::validate() const {
  if (nodes_per_period < 4) throw ConfigError("QuadratureConfig: nodes_per_period must be at least 4");
  if (panel_nodes < 1) throw ConfigError("QuadratureConfig: panel_nodes must be positive");
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw ConfigError("QuadratureConfig: rel_tol must lie in (0, 1)");
  if (max_panels < 1) throw ConfigError("QuadratureConfig: max_panels must be positive");
}

namespace {

void check_window(double T1, double T2, const char* what) {
  checked(T1, what);
  checked(T2, what);
  if (!(T1 >= 0.0 && T1 < T2)) throw DomainError(std::string(what) + ": requires 0 <= T1 < T2");
}

struct LevelSum {
  double value;
  double abs_value;
};

}  // namespace

MomentResult integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                                   const std::function<double(double)>& freq, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(a < b)) throw DomainError("integrate_oscillatory: empty interval");

  const double periods = static_cast<double>(cfg.panel_nodes) / cfg.nodes_per_period;
  std::vector<double> edges{a};
  while (edges.back() < b) {
    // The frequency grows with t, so the panel is sized by its right end.
    const double left = edges.back();
    double w = periods * kTwoPi / std::max(freq(left), 1e-3);
    for (int it = 0; it < 20; ++it) {
      const double shrunk = periods * kTwoPi / std::max(freq(std::min(b, left + w)), 1e-3);
      if (shrunk >= w) break;
      w = shrunk;
    }
    edges.push_back(std::min(b, left + w));
    if (edges.size() > cfg.max_panels + 1) break;
  }
  bool capped = false;
  if (edges.back() < b) {
    capped = true;
    edges.resize(cfg.max_panels + 1);
    for (std::size_t i = 0; i <= cfg.max_panels; ++i) {
      edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(cfg.max_panels);
    }
  }
  // Drop a sliver panel at the end by merging it into its neighbour.
  if (edges.size() > 2) {
    const double last = edges[edges.size() - 1] - edges[edges.size() - 2];
    const double prev = edges[edges.size() - 2] - edges[edges.size() - 3];
    if (last < 0.25 * prev) edges.erase(edges.end() - 2);
  }
  const std::size_t base = edges.size() - 1;
  const auto& rule = gauss_legendre(static_cast<std::size_t>(cfg.panel_nodes));

  std::vector<double> values(base);
  std::vector<double> abs_values(base);
  auto level_sum = [&](int level) {
    const std::size_t split = std::size_t{1} << level;
    parallel_for(base, cfg.workers, [&](std::size_t i) {
      const double width = (edges[i + 1] - edges[i]) / static_cast<double>(split);
      CompensatedSum acc;
      double abs_acc = 0.0;
      for (std::size_t j = 0; j < split; ++j) {
        const double lo = edges[i] + width * static_cast<double>(j);
        const double mid = lo + 0.5 * width;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const double term = rule.weights[q] * f(mid + 0.5 * width * rule.nodes[q]);
          acc.add(term);
          abs_acc += std::abs(term);
        }
      }
      values[i] = 0.5 * width * acc.value();
      abs_values[i] = 0.5 * width * abs_acc;
    });
    return LevelSum{pairwise_sum(std::span<const double>(values)), pairwise_sum(std::span<const double>(abs_values))};
  };

  MomentResult out;
  LevelSum prev = level_sum(0);
  out.evaluations = base * rule.size();
  out.panels_used = base;
  out.value = prev.value;
  out.converged = false;
  for (int level = 1; level < 30; ++level) {
    const std::size_t panels = base << level;
    if (panels > cfg.max_panels) break;
    const LevelSum cur = level_sum(level);
    out.evaluations += panels * rule.size();
    out.panels_used = panels;
    out.value = cur.value;
    out.err_estimate = std::abs(cur.value - prev.value);
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * cur.abs_value;
    if (out.err_estimate <= cfg.rel_tol * std::abs(cur.value) + floor) {
      out.converged = true;
      break;
    }
    prev = cur;
  }
  if (!out.converged && out.panels_used == base) out.err_estimate = std::abs(out.value);
  if (capped) out.converged = false;
  return out;
}

double moment_frequency(double log_x, double t) {
  return std::max(log_x, 0.0) + 0.5 * std::log(std::max(t, 10.0) / kTwoPi);
}

double moment_integrand(const MollifierSpec& spec, double t, const ZetaEvalConfig& zcfg) {
  checked(t, "moment_integrand");
  if (t < 0.0) throw DomainError("moment_integrand: requires t >= 0");
  if (spec.is_zero()) return 0.0;
  const double z = hardy_z(t, zcfg);
  return std::norm(mollifier_value(spec, t)) * z * z;
}

MomentResult mollified_moment(const MollifierSpec& spec, double T1, double T2, const QuadratureConfig& cfg) {
  check_window(T1, T2, "mollified_moment");
  cfg.validate();
  if (spec.is_zero()) return MomentResult{};
  const double log_x = spec.log_x;
  return integrate_oscillatory([&](double t) { return moment_integrand(spec, t); }, T1, T2,
                               [log_x](double t) { return moment_frequency(log_x, t); }, cfg);
}

MomentResult moment_length_average(double x, const MobiusTable& mobius, double T1, double T2,
                                   const QuadratureConfig& cfg) {
  checked(x, "moment_length_average");
  if (!(x >= 2.0)) throw DomainError("moment_length_average: requires x >= 2");
  check_window(T1, T2, "moment_length_average");
  const LengthProfile profile(x, mobius);
  const double log_x = std::log(x);
  return integrate_oscillatory(
      [&](double t) {
        const double z = hardy_z(t);
        return profile.integral_abs_sq(t) * z * z;
      },
      T1, T2, [log_x](double t) { return moment_frequency(log_x, t); }, cfg);
}

MomentResult second_moment_zeta(double T1, double T2, const QuadratureConfig& cfg) {
  check_window(T1, T2, "second_moment_zeta");
  return integrate_oscillatory(
      [](double t) {
        const double z = hardy_z(t);
        return z * z;
      },
      T1, T2, [](double t) { return moment_frequency(0.0, t); }, cfg);
}

double second_moment_main_term(double T) { return T * (std::log(T / kTwoPi) + 2.0 * kEulerGamma - 1.0); }

}  // namespace mml
