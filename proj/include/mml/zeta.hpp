#pragma once

#include <cstddef>
#include <vector>

#include "mml/common.hpp"

namespace mml {

enum class ZetaMethod { euler_maclaurin, riemann_siegel, automatic };

// How the Riemann-Siegel path computes the part of Z(t) beyond the main sum.
//   series:   the asymptotic correction terms C_0..C_K (K = rs_corrections)
//   integral: the exact Riemann-Siegel integral through the saddle point,
//             evaluated by the trapezoid rule along a 45-degree line
//   automatic: integral below kRsSeriesSwitch, series above it
enum class RsRemainder { series, integral, automatic };

struct ZetaEvalConfig {
  ZetaMethod method = ZetaMethod::automatic;
  // Euler-Maclaurin: N = max(em_terms, ceil(em_height_factor * |Im s|)) direct terms
  // followed by at most em_bernoulli_order / 2 Bernoulli corrections.
  int em_terms = 50;
  int em_bernoulli_order = 40;
  double em_height_factor = 2.0;
  int rs_corrections = 4;
  RsRemainder rs_remainder = RsRemainder::automatic;
  // Absolute accuracy target used for the degraded-precision flag.
  double target_error = 1e-10;

  // Throws ConfigError when a field is out of range.
  void validate() const;
};

inline constexpr double kRiemannSiegelSwitch = 30.0;
// The four-term correction series reaches 1e-10 only from about here on.
inline constexpr double kRsSeriesSwitch = 1000.0;

struct ZetaResult {
  Complex value;
  double err_estimate = 0.0;
  bool degraded = false;  // err_estimate above the configured target
};

// zeta(s) by Euler-Maclaurin summation. Supported region: Re s > -1, s != 1.
ZetaResult zeta_em(Complex s, const ZetaEvalConfig& cfg = {});

// Principal branch of log Gamma(z) for Re z > 0 (Stirling series after upward shift).
Complex log_gamma(Complex z);

// Riemann-Siegel theta from its asymptotic series. Requires t >= 10.
double riemann_siegel_theta(double t);

// theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi, valid for every real t.
double riemann_siegel_theta_exact(double t);

// Hardy Z(t) = e^{i theta(t)} zeta(1/2 + it), real for real t >= 0.
double hardy_z(double t, const ZetaEvalConfig& cfg = {});

// The two halves of the Riemann-Siegel path, exposed for cross-checks.
double riemann_siegel_main_sum(double t);
double riemann_siegel_series_remainder(double t, int corrections);
double riemann_siegel_integral_remainder(double t);

// C_k(p) for k <= 4, the Riemann-Siegel correction coefficients.
double riemann_siegel_coefficient(int k, double p);

// A critical-line zero inside [lo, hi], where Z changes sign. The returned ordinate
// satisfies |Z| < 1e-9 and sits in a verified sign-change bracket narrower than 1e-10.
double find_zero_on_line(double lo, double hi, const ZetaEvalConfig& cfg = {});

// First `count` positive ordinates of critical-line zeros, by scanning Z for sign
// changes with the given step and refining each bracket.
std::vector<double> critical_line_zeros(std::size_t count, double scan_step = 0.05,
                                        const ZetaEvalConfig& cfg = {});

// A designated zero rho0 = beta0 + i gamma0.
class ZeroHypothesis {
 public:
  // A zero located on the critical line; |zeta(1/2 + i gamma0)| must be below tol.
  static ZeroHypothesis on_critical_line(double gamma0, double tol = 1e-8);
  // The first critical-line zero, located once per process.
  static const ZeroHypothesis& first_zero();
  // A hypothetical zero with beta0 in [1/2, 1). Not checked against zeta; only
  // closed-form scaling demonstrations accept it.
  static ZeroHypothesis hypothetical(double beta0, double gamma0);

  double beta0() const { return beta0_; }
  double gamma0() const { return gamma0_; }
  Complex rho() const { return {beta0_, gamma0_}; }
  bool verified() const { return verified_; }

 private:
  ZeroHypothesis(double beta0, double gamma0, bool verified)
      : beta0_(beta0), gamma0_(gamma0), verified_(verified) {}
  double beta0_;
  double gamma0_;
  bool verified_;
};

}  // namespace mml
