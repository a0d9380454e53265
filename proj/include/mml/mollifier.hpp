#pragma once

#include <cstddef>
#include <vector>

#include "mml/arith.hpp"
#include "mml/common.hpp"

namespace mml {

// M_x(s) = (1/log x) sum_{n <= x} mu(n) n^{-s} log(x/n), the zero function for x <= 1.
// Public values are M_x itself; multiply by log_x for the sum without normalization.
struct MollifierSpec {
  double x = 1.0;
  CoefficientTable coeffs;
  double log_x = 0.0;
  // Hot-loop copies: amp[k] = mu(n) log(x/n) / (sqrt(n) log x), logn[k] = log n.
  std::vector<double> amp;
  std::vector<double> logn;

  static MollifierSpec make(double x, const MobiusTable& mobius);
  bool is_zero() const { return amp.empty(); }
  std::size_t terms() const { return amp.size(); }
};

struct TGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::size_t count = 1;
  void validate() const;
  double at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

// M_x(1/2 + it), compensated summation.
Complex mollifier_value(const MollifierSpec& spec, double t);

// M_x(1/2 + i(t0 + k dt)) for every grid point. Per-n phase recurrences, re-anchored
// every kReanchorInterval steps; n is walked in blocks of kBlockTerms. Parallel
// chunks are anchor-aligned, so the result does not depend on `workers`.
inline constexpr std::size_t kReanchorInterval = 512;
inline constexpr std::size_t kBlockTerms = 4096;
std::vector<Complex> mollifier_grid(const MollifierSpec& spec, const TGrid& grid, unsigned workers = 1);

// Integrals over the mollifier length y in [1, x] at fixed t. Between consecutive
// squarefree integers, M_y log y = A log y - B with
//   A = sum_{n <= y} mu(n) n^{-s},   B = sum_{n <= y} mu(n) n^{-s} log n,
// so every piece integrates in closed form up to the t-independent integrals
// of 1/log y and 1/log^2 y, which are tabulated once.
class LengthProfile {
 public:
  struct Piece {
    double a = 0.0;  // piece is [a, b)
    double b = 0.0;
    int mu = 0;      // mu of the integer entering at a
    double log_a = 0.0;
    double inv_log = 0.0;     // int dy / log y   (unused on [1, 2), where B = 0)
    double inv_log_sq = 0.0;  // int dy / log^2 y
    double log1 = 0.0;        // int log y dy
    double log2 = 0.0;        // int log^2 y dy
  };

  struct Rung {
    double a;
    double b;
    Complex A;
    Complex B;
  };

  LengthProfile(double x, const MobiusTable& mobius);

  double x() const { return x_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  // (A, B) on every piece at s = 1/2 + it.
  std::vector<Rung> ladder(double t) const;

  // int_1^x |M_y(1/2+it)|^2 dy
  double integral_abs_sq(double t) const;
  // int_1^x |M_y(1/2+it)|^2 log^2 y dy
  double integral_abs_sq_log2(double t) const;
  // int_1^x |M_y(1/2+it)| log y dy (Gauss-Legendre per piece)
  double integral_abs_log(double t) const;

 private:
  double x_;
  std::vector<Piece> pieces_;
};

}  // namespace mml
