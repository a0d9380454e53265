#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "mml/arith.hpp"
#include "mml/common.hpp"
#include "mml/moments.hpp"
#include "mml/zeta.hpp"

namespace mml {

// A vertical line Re w = sigma, sampled at w = sigma + i(v_c + k spacing) for
// |k spacing| <= height_Y, where v_c = -t centres the line on the peak of the
// integrand. height_Y = 0 selects the height automatically from the tail bound.
struct ContourConfig {
  double sigma = 3.0;
  double height_Y = 0.0;
  double spacing = 0.05;
  double tail_tol = 1e-10;
  void validate() const;
};

struct KernelContext {
  double t = 0.0;
  ZeroHypothesis rho0 = ZeroHypothesis::first_zero();
};

struct ContourValue {
  Complex value;
  double err_estimate = 0.0;  // tail bound + |T(h) - T(2h)|
  double tail_bound = 0.0;
  double height = 0.0;
  std::size_t nodes = 0;
};

// zeta as used inside the kernels: Euler-Maclaurin with a lighter height factor.
Complex kernel_zeta(Complex s);

// H_t(w) = 1 / ((w-1)^2 zeta(w - 1/2 + it))
Complex H(Complex w, const KernelContext& ctx);

// G_t(w) = (w-1)^2 (w-3/2+it) zeta(w-1/2+it) / ((w+1)^2 (w-1/2+it-rho0) (w+it+1)^4), Re w >= 0.
// Within 1e-6 of the removable points w = rho0 + 1/2 - it and w = 3/2 - it the value
// is the average over four points at distance 1e-5 (error fourth order in the
// radius), and a warning is logged.
Complex G(Complex w, const KernelContext& ctx);

// The J integrand G H x^w after cancellation:
//   (w-3/2+it) x^w / ((w+1)^2 (w-1/2+it-rho0) (w+it+1)^4)
Complex J_integrand(Complex w, double x, const KernelContext& ctx);

// g_t(u) = (1/2 pi i) int G_t(w) u^{-w} dw: on Re w = 3 for u > 1, on Re w = 0 for
// u <= 1. G is sampled once per line and reused for every u.
class GKernel {
 public:
  // u_min is the smallest u that will be requested; the Re w = 0 line must reach
  // beyond the stationary point of G(iv) u^{-iv} at v ~ 2 pi / u.
  GKernel(const KernelContext& ctx, const ContourConfig& contour, double u_min, unsigned workers = 0);

  ContourValue operator()(double u) const;

  // (h / 2 pi) sum |G| over the Re w = 0 nodes: a bound for |g(u)| on (0, 1].
  double bound() const { return bound_; }
  // sup |G| over the Re w = 0 nodes.
  double sup_abs_G() const { return sup_abs_g_; }
  double left_height() const { return left_.height; }
  double right_height() const { return right_.height; }

 private:
  struct Line {
    double sigma = 0.0;
    double v_centre = 0.0;
    double spacing = 0.0;
    double height = 0.0;
    double tail_prefactor = 0.0;  // tail of (1/2pi) int |G| beyond the height, before u^{-sigma}
    int decay = 0;
    std::vector<Complex> values;  // G(sigma + i v_k), k = -K..K
  };
  Line build_line(double sigma, double u_min, unsigned workers) const;
  Complex line_sum(const Line& line, double u, std::size_t stride) const;

  KernelContext ctx_;
  ContourConfig contour_;
  double u_min_;
  Line right_;
  Line left_;
  double bound_ = 0.0;
  double sup_abs_g_ = 0.0;
};

ContourValue g_kernel(double u, const KernelContext& ctx, const ContourConfig& contour = {});

// J_t(x) = (1/2 pi i) int_{(sigma)} J_integrand(w) dw on the configured line (sigma > 1).
ContourValue J_via_mellin(double x, const KernelContext& ctx, const ContourConfig& contour = {});

// J_t(x) = int_1^{y_max} M_y(1/2+it) log y g_t(y/x) dy with y_max = x by default.
// The y-range is split at squarefree integers and at x/n, where g has kinks.
ContourValue J_via_convolution(double x, const KernelContext& ctx, const MobiusTable& mobius,
                               const ContourConfig& contour = {}, const QuadratureConfig& cfg = {},
                               double y_max = 0.0);

// x^{rho0+1/2-it} (rho0-1) / ((3/2+rho0-it)^2 (rho0+3/2)^4)
Complex residue_term(double x, const KernelContext& ctx);

// (1/2 pi i) int_{(0)} J_integrand(w) dw
ContourValue shifted_line_integral(double x, const KernelContext& ctx, const ContourConfig& contour = {});

// (h / 2 pi) sum |J_integrand(i v_k)|: bounds the shifted integral for every x.
double shifted_line_envelope(const KernelContext& ctx, const ContourConfig& contour = {});

// shifted_line_integral + residue_term
ContourValue J_via_residue(double x, const KernelContext& ctx, const ContourConfig& contour = {});

struct LowerBoundTerms {
  double lhs_pointwise = 0.0;  // x^{2 beta0} / (1+|t|)^4 + 1/x
  double rhs_pointwise = 0.0;  // int_1^x |M_y(1/2+it)|^2 log^2 y dy
};

LowerBoundTerms lower_bound_terms(double x, double t, const KernelContext& ctx, const MobiusTable& mobius);

// int_1^X M_y(1/2+it) log y y^{-w} dy, exact on every piece between squarefree integers.
Complex mellin_numeric(Complex w, double t, double X, const MobiusTable& mobius);

}  // namespace mml
