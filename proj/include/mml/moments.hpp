#pragma once

#include <cstddef>
#include <functional>

#include "mml/arith.hpp"
#include "mml/mollifier.hpp"
#include "mml/zeta.hpp"

namespace mml {

struct QuadratureConfig {
  int nodes_per_period = 8;
  int panel_nodes = 16;  // Gauss-Legendre order per panel
  double rel_tol = 1e-6;
  std::size_t max_panels = std::size_t{1} << 20;
  unsigned workers = 0;  // 0: hardware concurrency
  void validate() const;
};

struct MomentResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t panels_used = 0;
  std::size_t evaluations = 0;
  bool converged = true;
};

// Integral of f over [a, b]. The base partition has panels spanning
// panel_nodes / nodes_per_period periods 2 pi / freq(t) measured at the right end;
// level L splits each base panel into 2^L equal panels. Levels are added until two
// consecutive levels agree to rel_tol (or to the rounding floor of the sum). The
// finer level is returned and the difference is the error estimate. Panels are
// evaluated in parallel and reduced pairwise in panel order.
MomentResult integrate_oscillatory(const std::function<double(double)>& f, double a, double b,
                                   const std::function<double(double)>& freq, const QuadratureConfig& cfg);

// Angular frequency model of |M_x|^2 |zeta|^2 at height t.
double moment_frequency(double log_x, double t);

// |M_x(1/2+it)|^2 Z(t)^2
double moment_integrand(const MollifierSpec& spec, double t, const ZetaEvalConfig& zcfg = {});

// I_x(T1, T2) = int_{T1}^{T2} |M_x(1/2+it) zeta(1/2+it)|^2 dt
MomentResult mollified_moment(const MollifierSpec& spec, double T1, double T2, const QuadratureConfig& cfg = {});

// int_1^x I_y(T1, T2) dy. The y-integral is done exactly at each t (see
// LengthProfile), which leaves a single oscillatory t-integral.
MomentResult moment_length_average(double x, const MobiusTable& mobius, double T1, double T2,
                                   const QuadratureConfig& cfg = {});

// int_{T1}^{T2} |zeta(1/2+it)|^2 dt
MomentResult second_moment_zeta(double T1, double T2, const QuadratureConfig& cfg = {});

// T (log(T/2 pi) + 2 gamma - 1), the classical main term of the mean value above.
double second_moment_main_term(double T);

}  // namespace mml
