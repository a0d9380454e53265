#include "mml/zeta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mml/summation.hpp"

namespace mml {

namespace {

// B_{2k} for k = 1..20.
constexpr std::array<double, 20> kBernoulli{
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
    -7709321041217.0 / 510.0,
    2577687858367.0 / 6.0,
    -26315271553053477373.0 / 1919190.0,
    2929993913841559.0 / 6.0,
    -261082718496449122051.0 / 13530.0,
};

// B_{2k} / (2k)!
const std::array<double, 20>& bernoulli_over_factorial() {
  static const std::array<double, 20> table = [] {
    std::array<double, 20> out{};
    double fact = 1.0;
    for (std::size_t k = 1; k <= out.size(); ++k) {
      fact *= static_cast<double>(2 * k - 1) * static_cast<double>(2 * k);
      out[k - 1] = kBernoulli[k - 1] / fact;
    }
    return out;
  }();
  return table;
}

// Taylor data for the Riemann-Siegel corrections. Psi(p) is entire, so its
// coefficients about p = 1/2 come from a discrete Cauchy integral on |z - 1/2| = 1,
// where cos(2 pi z) stays bounded away from zero.
struct RsPolynomials {
  std::array<std::vector<double>, 5> coeff;  // C_k(1/2 + h) = sum_j coeff[k][j] h^j
};

Complex rs_psi(Complex z) {
  return std::cos(kTwoPi * (z * z - z - 1.0 / 16.0)) / std::cos(kTwoPi * z);
}

RsPolynomials build_rs_polynomials() {
  constexpr std::size_t kSamples = 128;
  constexpr std::size_t kTaylor = 64;
  std::vector<Complex> samples(kSamples);
  for (std::size_t j = 0; j < kSamples; ++j) {
    const double phi = kTwoPi * (static_cast<double>(j) + 0.5) / kSamples;
    samples[j] = rs_psi(Complex(0.5, 0.0) + cis(phi));
  }
  std::vector<double> taylor(kTaylor);
  for (std::size_t k = 0; k < kTaylor; ++k) {
    ComplexCompensatedSum acc;
    for (std::size_t j = 0; j < kSamples; ++j) {
      const double phi = kTwoPi * (static_cast<double>(j) + 0.5) / kSamples;
      acc.add(samples[j] * cis(-static_cast<double>(k) * phi));
    }
    taylor[k] = acc.value().real() / kSamples;
  }
  // Psi^{(m)}(1/2 + h) = sum_j taylor[j + m] (j + m)! / j! h^j
  auto derivative = [&](std::size_t m) {
    std::vector<double> poly(kTaylor - m);
    for (std::size_t j = 0; j + m < kTaylor; ++j) {
      double falling = 1.0;
      for (std::size_t i = 1; i <= m; ++i) falling *= static_cast<double>(j + i);
      poly[j] = taylor[j + m] * falling;
    }
    return poly;
  };
  struct Term {
    std::size_t order;
    double coefficient;
  };
  const double pi2 = kPi * kPi;
  const double pi4 = pi2 * pi2;
  const double pi6 = pi4 * pi2;
  const double pi8 = pi4 * pi4;
  const std::array<std::vector<Term>, 5> terms{{
      {{0, 1.0}},
      {{3, -1.0 / (96.0 * pi2)}},
      {{2, 1.0 / (64.0 * pi2)}, {6, 1.0 / (18432.0 * pi4)}},
      {{1, -1.0 / (64.0 * pi2)}, {5, -1.0 / (3840.0 * pi4)}, {9, -1.0 / (5308416.0 * pi6)}},
      {{0, 1.0 / (128.0 * pi2)},
       {4, 19.0 / (24576.0 * pi4)},
       {8, 11.0 / (5898240.0 * pi6)},
       {12, 1.0 / (2038431744.0 * pi8)}},
  }};
  RsPolynomials out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    std::vector<double> poly(kTaylor, 0.0);
    for (const auto& term : terms[k]) {
      const auto d = derivative(term.order);
      for (std::size_t j = 0; j < d.size(); ++j) poly[j] += term.coefficient * d[j];
    }
    // Trailing coefficients are pure rounding noise once h^j < 2^-j.
    while (poly.size() > 1 && std::abs(poly.back()) * std::ldexp(1.0, -static_cast<int>(poly.size())) < 1e-22) {
      poly.pop_back();
    }
    out.coeff[k] = std::move(poly);
  }
  return out;
}

const RsPolynomials& rs_polynomials() {
  static const RsPolynomials polys = build_rs_polynomials();
  return polys;
}

// log(e^{i pi x} - e^{-i pi x}) up to a multiple of 2 pi i, without overflow.
Complex log_two_i_sin_pi(Complex x) {
  const Complex i_pi(0.0, kPi);
  if (x.imag() >= 0.0) return i_pi - i_pi * x + std::log(1.0 - std::exp(2.0 * i_pi * x));
  return i_pi * x + std::log(1.0 - std::exp(-2.0 * i_pi * x));
}

}  // namespace

void ZetaEvalConfig::validate() const {
  if (em_terms < 1) throw ConfigError("ZetaEvalConfig: em_terms must be positive");
  if (em_bernoulli_order < 2 || em_bernoulli_order % 2 != 0 || em_bernoulli_order > 40) {
    throw ConfigError("ZetaEvalConfig: em_bernoulli_order must be even and in [2, 40]");
  }
  if (!(em_height_factor > 0.0)) throw ConfigError("ZetaEvalConfig: em_height_factor must be positive");
  if (rs_corrections < 0 || rs_corrections > 4) throw ConfigError("ZetaEvalConfig: rs_corrections must be in 0..4");
  if (!(target_error > 0.0)) throw ConfigError("ZetaEvalConfig: target_error must be positive");
}

ZetaResult zeta_em(Complex s, const ZetaEvalConfig& cfg) {
  cfg.validate();
  checked(s, "zeta_em");
  if (s == Complex(1.0, 0.0)) throw PoleError("zeta_em: pole at s = 1");
  if (s.real() <= -1.0) throw DomainError("zeta_em: supported region is Re s > -1");

  const double sigma = s.real();
  const double t = s.imag();
  const auto n_terms = static_cast<long>(
      std::max<double>(cfg.em_terms, std::ceil(cfg.em_height_factor * std::abs(t))));

  ComplexCompensatedSum acc;
  double rms_weight = 0.0;
  for (long n = 1; n < n_terms; ++n) {
    const double logn = std::log(static_cast<double>(n));
    const double mag = std::exp(-sigma * logn);
    acc.add(mag * cis(-t * logn));
    rms_weight += mag * mag;
  }
  const double big_n = static_cast<double>(n_terms);
  const double log_n = std::log(big_n);
  const Complex n_pow = std::exp(-s * log_n);  // N^{-s}
  acc.add(n_pow * big_n / (s - 1.0));
  acc.add(0.5 * n_pow);

  const auto& bern = bernoulli_over_factorial();
  const int max_k = cfg.em_bernoulli_order / 2;
  Complex rising = s;                   // s (s+1) ... (s+2k-2)
  Complex power = n_pow / big_n;        // N^{-s-2k+1}
  double last = 0.0;
  for (int k = 1; k <= max_k; ++k) {
    const Complex term = bern[k - 1] * rising * power;
    acc.add(term);
    last = std::abs(term);
    if (last <= 1e-17 * std::max(std::abs(acc.value()), 1e-300)) break;
    const double kk = static_cast<double>(k);
    rising *= (s + (2.0 * kk - 1.0)) * (s + 2.0 * kk);
    power /= big_n * big_n;
  }

  ZetaResult out;
  out.value = acc.value();
  // Truncation (last correction) plus phase rounding in the direct sum.
  const double phase_rounding = 2.2e-16 * (1.0 + std::abs(t) * log_n) * std::sqrt(rms_weight);
  out.err_estimate = last + phase_rounding;
  out.degraded = out.err_estimate > cfg.target_error * std::max(1.0, std::abs(out.value));
  return out;
}

Complex log_gamma(Complex z) {
  checked(z, "log_gamma");
  if (z.real() <= 0.0) throw DomainError("log_gamma: requires Re z > 0");
  Complex shift(0.0, 0.0);
  while (std::abs(z) < 16.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series(0.0, 0.0);
  Complex power = inv;
  for (std::size_t k = 1; k <= 10; ++k) {
    const double kk = static_cast<double>(k);
    series += kBernoulli[k - 1] / (2.0 * kk * (2.0 * kk - 1.0)) * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series - shift;
}

double riemann_siegel_theta(double t) {
  checked(t, "riemann_siegel_theta");
  if (t < 10.0) throw DomainError("riemann_siegel_theta: asymptotic series requires t >= 10");
  const double inv = 1.0 / t;
  const double inv2 = inv * inv;
  const double tail =
      inv * (1.0 / 48.0 +
             inv2 * (7.0 / 5760.0 + inv2 * (31.0 / 80640.0 + inv2 * (127.0 / 430080.0 + inv2 * 511.0 / 1216512.0))));
  return 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - kPi / 8.0 + tail;
}

double riemann_siegel_theta_exact(double t) {
  checked(t, "riemann_siegel_theta_exact");
  return log_gamma(Complex(0.25, 0.5 * t)).imag() - 0.5 * t * std::log(kPi);
}

double riemann_siegel_main_sum(double t) {
  const double a = std::sqrt(t / kTwoPi);
  const auto n_max = static_cast<long>(std::floor(a));
  const double theta = riemann_siegel_theta(t);
  CompensatedSum acc;
  for (long n = 1; n <= n_max; ++n) {
    const double logn = std::log(static_cast<double>(n));
    acc.add(2.0 * std::cos(theta - t * logn) / std::sqrt(static_cast<double>(n)));
  }
  return acc.value();
}

double riemann_siegel_coefficient(int k, double p) {
  if (k < 0 || k > 4) throw DomainError("riemann_siegel_coefficient: k must be in 0..4");
  const auto& poly = rs_polynomials().coeff[static_cast<std::size_t>(k)];
  const double h = p - 0.5;
  double acc = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * h + *it;
  return acc;
}

double riemann_siegel_series_remainder(double t, int corrections) {
  if (corrections < 0 || corrections > 4) throw DomainError("riemann_siegel_series_remainder: corrections in 0..4");
  const double a = std::sqrt(t / kTwoPi);
  const double n_floor = std::floor(a);
  const double p = a - n_floor;
  const double omega = std::sqrt(kTwoPi / t);
  double acc = 0.0;
  double power = 1.0;
  for (int k = 0; k <= corrections; ++k) {
    acc += riemann_siegel_coefficient(k, p) * power;
    power *= omega;
  }
  const double sign = (static_cast<long>(n_floor) % 2 == 1) ? 1.0 : -1.0;  // (-1)^{N-1}
  return sign * std::sqrt(omega) * acc;
}

double riemann_siegel_integral_remainder(double t) {
  // Z(t) = 2 Re(e^{i theta} R(s)) with R(s) the Riemann-Siegel integral over a line
  // of slope 1. Moving that line past x = 1..N yields the main sum; what is left is
  // the integral along x = N + 1/2 + u e^{i pi/4}, which decays like a Gaussian in u.
  const double a = std::sqrt(t / kTwoPi);
  const double centre = std::floor(a) + 0.5;
  const Complex s(0.5, t);
  const Complex dir = cis(kPi / 4.0);
  const Complex i_theta(0.0, riemann_siegel_theta(t));
  const Complex i_pi(0.0, kPi);
  constexpr double kStep = 0.05;
  constexpr int kHalfNodes = 120;  // |u| <= 6
  ComplexCompensatedSum acc;
  for (int k = -kHalfNodes; k <= kHalfNodes; ++k) {
    const Complex x = centre + (kStep * k) * dir;
    acc.add(std::exp(-s * std::log(x) + i_pi * x * x - log_two_i_sin_pi(x) + i_theta));
  }
  const Complex remainder = -dir * kStep * acc.value();
  return 2.0 * remainder.real();
}

double hardy_z(double t, const ZetaEvalConfig& cfg) {
  cfg.validate();
  checked(t, "hardy_z");
  if (t < 0.0) throw DomainError("hardy_z: requires t >= 0");
  ZetaMethod method = cfg.method;
  if (method == ZetaMethod::automatic) {
    method = t < kRiemannSiegelSwitch ? ZetaMethod::euler_maclaurin : ZetaMethod::riemann_siegel;
  }
  if (method == ZetaMethod::euler_maclaurin) {
    const ZetaResult z = zeta_em(Complex(0.5, t), cfg);
    return (cis(riemann_siegel_theta_exact(t)) * z.value).real();
  }
  if (t < 10.0) throw DomainError("hardy_z: the Riemann-Siegel path requires t >= 10");
  const bool integral = cfg.rs_remainder == RsRemainder::integral ||
                        (cfg.rs_remainder == RsRemainder::automatic && t < kRsSeriesSwitch);
  const double remainder =
      integral ? riemann_siegel_integral_remainder(t) : riemann_siegel_series_remainder(t, cfg.rs_corrections);
  return riemann_siegel_main_sum(t) + remainder;
}

double find_zero_on_line(double lo, double hi, const ZetaEvalConfig& cfg) {
  if (!(lo < hi) || lo < 0.0) throw BracketError("find_zero_on_line: need 0 <= lo < hi");
  double f_lo = hardy_z(lo, cfg);
  double f_hi = hardy_z(hi, cfg);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw BracketError("find_zero_on_line: Z has no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = hardy_z(mid, cfg);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
      f_hi = f_mid;
    }
  }

  // Illinois-modified regula falsi keeps the bracket while converging superlinearly.
  double best = std::abs(f_lo) < std::abs(f_hi) ? lo : hi;
  double f_best = std::min(std::abs(f_lo), std::abs(f_hi));
  int side = 0;
  double w_lo = f_lo;
  double w_hi = f_hi;
  for (int iter = 0; iter < 200 && hi - lo >= 1e-10 && f_best >= 1e-13; ++iter) {
    double x = hi - w_hi * (hi - lo) / (w_hi - w_lo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = hardy_z(x, cfg);
    if (std::abs(fx) < f_best) {
      best = x;
      f_best = std::abs(fx);
    }
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (f_hi < 0.0)) {
      hi = x;
      f_hi = w_hi = fx;
      if (side == 1) w_lo *= 0.5;
      side = 1;
    } else {
      lo = x;
      f_lo = w_lo = fx;
      if (side == -1) w_hi *= 0.5;
      side = -1;
    }
  }
  if (hi - lo >= 1e-10) {
    // Collapse the bracket around the best point.
    bool closed = false;
    for (double delta = 2e-11; delta <= 4.5e-11 && !closed; delta *= 1.5) {
      const double f_minus = hardy_z(best - delta, cfg);
      const double f_plus = hardy_z(best + delta, cfg);
      if ((f_minus < 0.0) != (f_plus < 0.0)) closed = true;
    }
    if (!closed) throw BracketError("find_zero_on_line: could not certify a bracket narrower than 1e-10");
  }
  if (f_best >= 1e-9) throw BracketError("find_zero_on_line: residual |Z| did not drop below 1e-9");
  return best;
}

std::vector<double> critical_line_zeros(std::size_t count, double scan_step, const ZetaEvalConfig& cfg) {
  if (!(scan_step > 0.0)) throw DomainError("critical_line_zeros: scan step must be positive");
  std::vector<double> zeros;
  double t_prev = 0.0;
  double z_prev = hardy_z(t_prev, cfg);
  while (zeros.size() < count) {
    const double t = t_prev + scan_step;
    if (t > 1e4) throw DomainError("critical_line_zeros: scan passed t = 1e4");
    const double z = hardy_z(t, cfg);
    if (z == 0.0) {
      zeros.push_back(t);
    } else if ((z < 0.0) != (z_prev < 0.0) && z_prev != 0.0) {
      zeros.push_back(find_zero_on_line(t_prev, t, cfg));
    }
    t_prev = t;
    z_prev = z;
  }
  return zeros;
}

ZeroHypothesis ZeroHypothesis::on_critical_line(double gamma0, double tol) {
  if (!(gamma0 > 0.0)) throw DomainError("ZeroHypothesis: gamma0 must be positive");
  const double residual = std::abs(hardy_z(gamma0));
  if (!(residual < tol)) {
    throw DomainError("ZeroHypothesis: |zeta(1/2 + i gamma0)| = " + std::to_string(residual) +
                      " is not below the residual tolerance");
  }
  return ZeroHypothesis(0.5, gamma0, true);
}

const ZeroHypothesis& ZeroHypothesis::first_zero() {
  static const ZeroHypothesis zero = on_critical_line(find_zero_on_line(14.0, 14.5));
  return zero;
}

ZeroHypothesis ZeroHypothesis::hypothetical(double beta0, double gamma0) {
  if (!(beta0 >= 0.5 && beta0 < 1.0)) throw DomainError("ZeroHypothesis: beta0 must lie in [1/2, 1)");
  if (!(gamma0 > 0.0)) throw DomainError("ZeroHypothesis: gamma0 must be positive");
  return ZeroHypothesis(beta0, gamma0, false);
}

}  // namespace mml
