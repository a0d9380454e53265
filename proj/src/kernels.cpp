#include "mml/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "mml/mollifier.hpp"
#include "mml/parallel.hpp"
#include "mml/quadrature.hpp"
#include "mml/summation.hpp"

namespace mml {

namespace {

constexpr double kRemovableRadius = 1e-6;
constexpr double kDetour = 1e-5;
constexpr double kMaxHeight = 1e6;

Complex shift_of(const KernelContext& ctx) { return {-0.5, ctx.t}; }  // s = w + shift

void check_x(double x, const char* what) {
  checked(x, what);
  if (!(x >= 2.0)) throw DomainError(std::string(what) + ": requires x >= 2");
}

Complex G_raw(Complex w, const KernelContext& ctx) {
  const Complex it(0.0, ctx.t);
  const Complex s = w + shift_of(ctx);
  const Complex num = (w - 1.0) * (w - 1.0) * (w - 1.5 + it) * kernel_zeta(s);
  const Complex a = w + 1.0;
  const Complex b = w + it + 1.0;
  const Complex b2 = b * b;
  return num / (a * a * (s - ctx.rho0.rho()) * b2 * b2);
}

// Uniform nodes sigma + i(v_c + k h), k = -K..K.
struct LineGrid {
  double sigma;
  double v_centre;
  double spacing;
  std::size_t half;  // K
  std::size_t size() const { return 2 * half + 1; }
  Complex node(std::size_t j) const {
    const double k = static_cast<double>(j) - static_cast<double>(half);
    return {sigma, v_centre + k * spacing};
  }
};

std::size_t half_count(double height, double spacing) {
  // Even K keeps the stride-2 subgrid symmetric about the centre.
  auto k = static_cast<std::size_t>(std::ceil(height / spacing));
  return k + (k % 2);
}

// 8 sup |f| (1 + |w + it|)^p over samples with |v - v_c| in [Y/2, Y].
double sampled_prefactor(const std::function<Complex(Complex)>& f, double sigma, double v_centre, double t,
                         double height, int decay) {
  double sup = 0.0;
  for (int j = 0; j <= 8; ++j) {
    const double r = height * (0.5 + 0.5 * j / 8.0);
    for (const double sign : {-1.0, 1.0}) {
      const Complex w(sigma, v_centre + sign * r);
      const double scale = std::pow(1.0 + std::abs(w + Complex(0.0, t)), decay);
      sup = std::max(sup, std::abs(f(w)) * scale);
    }
  }
  return 8.0 * sup;
}

// (1/2pi) int_{|v - v_c| > Y} C |v|^{-p} dv
double polynomial_tail(double prefactor, double height, int decay) {
  return prefactor * std::pow(height, 1.0 - decay) / ((decay - 1.0) * kPi);
}

// Past the stationary point the phase of G(iv) u^{-iv} turns at rate >= log(Y u / 2 pi);
// one integration by parts bounds the oscillating tail.
double oscillatory_tail(double prefactor, double height, double u, int decay) {
  const double rate = std::log(height * u / kTwoPi);
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * prefactor * std::pow(height, -decay) / (kPi * rate);
}

struct HeightChoice {
  double height;
  double prefactor;
};

HeightChoice choose_height(const std::function<Complex(Complex)>& f, double sigma, double v_centre, double t,
                           int decay, double start, const ContourConfig& contour,
                           const std::function<double(double, double)>& tail) {
  if (contour.height_Y > 0.0) {
    const double c = sampled_prefactor(f, sigma, v_centre, t, contour.height_Y, decay);
    const double bound = tail(c, contour.height_Y);
    if (!(bound <= contour.tail_tol)) {
      throw ConfigError("contour: tail bound " + std::to_string(bound) + " at height " +
                        std::to_string(contour.height_Y) + " exceeds tail_tol");
    }
    return {contour.height_Y, c};
  }
  for (double height = start; height <= kMaxHeight; height *= 1.5) {
    const double c = sampled_prefactor(f, sigma, v_centre, t, height, decay);
    if (tail(c, height) <= contour.tail_tol) return {height, c};
  }
  throw ConfigError("contour: no truncation height below 1e6 meets tail_tol");
}

std::vector<Complex> sample(const std::function<Complex(Complex)>& f, const LineGrid& grid, unsigned workers) {
  std::vector<Complex> out(grid.size());
  parallel_for(grid.size(), workers, [&](std::size_t j) { out[j] = f(grid.node(j)); });
  return out;
}

// (h/2pi) sum and (2h/2pi) sum over even offsets from the centre.
std::pair<Complex, Complex> trapezoid(const std::vector<Complex>& values, const LineGrid& grid) {
  ComplexCompensatedSum fine;
  ComplexCompensatedSum coarse;
  for (std::size_t j = 0; j < values.size(); ++j) {
    fine.add(values[j]);
    if (j % 2 == 0) coarse.add(values[j]);
  }
  const double h = grid.spacing / kTwoPi;
  return {h * fine.value(), 2.0 * h * coarse.value()};
}

ContourValue line_integral(const std::function<Complex(Complex)>& f, double sigma, const KernelContext& ctx,
                           const ContourConfig& contour) {
  contour.validate();
  constexpr int kDecay = 6;
  const auto choice = choose_height(f, sigma, -ctx.t, ctx.t, kDecay, 32.0, contour,
                                    [](double c, double y) { return polynomial_tail(c, y, kDecay); });
  const LineGrid grid{sigma, -ctx.t, contour.spacing, half_count(choice.height, contour.spacing)};
  const auto values = sample(f, grid, 0);
  const auto [fine, coarse] = trapezoid(values, grid);
  ContourValue out;
  out.value = fine;
  out.tail_bound = polynomial_tail(choice.prefactor, choice.height, kDecay);
  out.err_estimate = out.tail_bound + std::abs(fine - coarse);
  out.height = choice.height;
  out.nodes = grid.size();
  return out;
}

}  // namespace

void ContourConfig::validate() const {
  if (!std::isfinite(sigma)) throw ConfigError("ContourConfig: sigma must be finite");
  if (!(spacing > 0.0 && spacing <= 0.25)) throw ConfigError("ContourConfig: spacing must lie in (0, 0.25]");
  if (!(height_Y >= 0.0) || !std::isfinite(height_Y)) throw ConfigError("ContourConfig: height_Y must be >= 0");
  if (!(tail_tol > 0.0)) throw ConfigError("ContourConfig: tail_tol must be positive");
}

Complex kernel_zeta(Complex s) {
  static const ZetaEvalConfig cfg = [] {
    ZetaEvalConfig c;
    c.method = ZetaMethod::euler_maclaurin;
    c.em_height_factor = 0.5;
    return c;
  }();
  return zeta_em(s, cfg).value;
}

Complex H(Complex w, const KernelContext& ctx) {
  checked(w, "H");
  if (w == Complex(1.0, 0.0)) throw PoleError("H: double pole at w = 1");
  const Complex s = w + shift_of(ctx);
  if (s == Complex(1.0, 0.0)) return {0.0, 0.0};
  const Complex z = kernel_zeta(s);
  if (std::abs(z) < 1e-14) throw PoleError("H: zeta(w - 1/2 + it) vanishes");
  return 1.0 / ((w - 1.0) * (w - 1.0) * z);
}

Complex G(Complex w, const KernelContext& ctx) {
  checked(w, "G");
  if (w.real() < 0.0) throw DomainError("G: requires Re w >= 0");
  const Complex s = w + shift_of(ctx);
  if (std::abs(s - ctx.rho0.rho()) < kRemovableRadius || std::abs(s - 1.0) < kRemovableRadius) {
    warn("G: removable point at w = (" + std::to_string(w.real()) + ", " + std::to_string(w.imag()) +
         "), using a 1e-5 detour");
    Complex acc(0.0, 0.0);
    for (const Complex d : {Complex(kDetour, 0.0), Complex(-kDetour, 0.0), Complex(0.0, kDetour),
                            Complex(0.0, -kDetour)}) {
      acc += G_raw(w + d, ctx);
    }
    return 0.25 * acc;
  }
  return G_raw(w, ctx);
}

Complex J_integrand(Complex w, double x, const KernelContext& ctx) {
  const Complex it(0.0, ctx.t);
  const Complex s = w + shift_of(ctx);
  const Complex a = w + 1.0;
  const Complex b = w + it + 1.0;
  const Complex b2 = b * b;
  const Complex denom = a * a * (s - ctx.rho0.rho()) * b2 * b2;
  if (std::abs(denom) == 0.0) throw PoleError("J_integrand: node on a pole");
  return (w - 1.5 + it) * std::exp(w * std::log(x)) / denom;
}

GKernel::GKernel(const KernelContext& ctx, const ContourConfig& contour, double u_min, unsigned workers)
    : ctx_(ctx), contour_(contour), u_min_(u_min) {
  contour_.validate();
  if (!(u_min > 0.0 && u_min <= 1.0)) throw DomainError("GKernel: u_min must lie in (0, 1]");
  if (!(contour_.sigma > 1.0)) throw ConfigError("GKernel: the right line needs sigma > 1");
  right_ = build_line(contour_.sigma, 1.0, workers);
  left_ = build_line(0.0, u_min, workers);
  double total = 0.0;
  for (const Complex& v : left_.values) {
    total += std::abs(v);
    sup_abs_g_ = std::max(sup_abs_g_, std::abs(v));
  }
  bound_ = left_.spacing / kTwoPi * total;
}

GKernel::Line GKernel::build_line(double sigma, double u_min, unsigned workers) const {
  Line line;
  line.sigma = sigma;
  line.v_centre = -ctx_.t;
  line.spacing = contour_.spacing;
  const auto f = [this](Complex w) { return G(w, ctx_); };
  HeightChoice choice{};
  if (sigma > 0.0) {
    line.decay = 4;
    choice = choose_height(f, sigma, line.v_centre, ctx_.t, line.decay, 64.0, contour_,
                           [&](double c, double y) { return polynomial_tail(c, y, line.decay); });
    line.tail_prefactor = polynomial_tail(choice.prefactor, choice.height, line.decay);
  } else {
    line.decay = 3;
    choice = choose_height(f, sigma, line.v_centre, ctx_.t, line.decay, 3.0 * kTwoPi / u_min, contour_,
                           [&](double c, double y) { return oscillatory_tail(c, y, u_min, line.decay); });
    line.tail_prefactor = choice.prefactor;
  }
  line.height = choice.height;
  const LineGrid grid{sigma, line.v_centre, line.spacing, half_count(line.height, line.spacing)};
  line.values = sample(f, grid, workers);
  return line;
}

Complex GKernel::line_sum(const Line& line, double u, std::size_t stride) const {
  // (stride h / 2pi) sum_k G_k u^{-sigma - i v_k} over k = 0 mod stride.
  const double log_u = std::log(u);
  const std::size_t half = (line.values.size() - 1) / 2;
  ComplexCompensatedSum acc;
  const Complex step = cis(-static_cast<double>(stride) * line.spacing * log_u);
  Complex phase;
  std::size_t since_anchor = kReanchorInterval;
  for (std::size_t j = 0; j < line.values.size(); j += stride) {
    if (since_anchor == kReanchorInterval) {
      const double v = line.v_centre + (static_cast<double>(j) - static_cast<double>(half)) * line.spacing;
      phase = cis(-v * log_u);
      since_anchor = 0;
    }
    acc.add(line.values[j] * phase);
    phase *= step;
    ++since_anchor;
  }
  return static_cast<double>(stride) * line.spacing / kTwoPi * std::exp(-line.sigma * log_u) * acc.value();
}

ContourValue GKernel::operator()(double u) const {
  checked(u, "g_kernel");
  if (!(u > 0.0)) throw DomainError("g_kernel: requires u > 0");
  if (u < u_min_) throw DomainError("g_kernel: u is below the u_min this kernel was built for");
  const Line& line = u > 1.0 ? right_ : left_;
  ContourValue out;
  const Complex fine = line_sum(line, u, 1);
  const Complex coarse = line_sum(line, u, 2);
  out.value = fine;
  if (u > 1.0) {
    out.tail_bound = line.tail_prefactor * std::pow(u, -line.sigma);
  } else {
    out.tail_bound = oscillatory_tail(line.tail_prefactor, line.height, u, line.decay);
    if (!std::isfinite(out.tail_bound)) {
      throw DomainError("g_kernel: u is below the u_min this kernel was built for");
    }
  }
  out.err_estimate = out.tail_bound + std::abs(fine - coarse);
  out.height = line.height;
  out.nodes = line.values.size();
  return out;
}

ContourValue g_kernel(double u, const KernelContext& ctx, const ContourConfig& contour) {
  checked(u, "g_kernel");
  if (!(u > 0.0)) throw DomainError("g_kernel: requires u > 0");
  return GKernel(ctx, contour, std::min(u, 1.0))(u);
}

ContourValue J_via_mellin(double x, const KernelContext& ctx, const ContourConfig& contour) {
  check_x(x, "J_via_mellin");
  const double pole_re = ctx.rho0.beta0() + 0.5;
  if (!(contour.sigma > pole_re)) throw ConfigError("J_via_mellin: the line must lie right of Re w = beta0 + 1/2");
  return line_integral([&](Complex w) { return J_integrand(w, x, ctx); }, contour.sigma, ctx, contour);
}

Complex residue_term(double x, const KernelContext& ctx) {
  check_x(x, "residue_term");
  const Complex rho = ctx.rho0.rho();
  const Complex it(0.0, ctx.t);
  const Complex a = 1.5 + rho - it;
  const Complex b = rho + 1.5;
  const Complex b2 = b * b;
  return std::exp((rho + 0.5 - it) * std::log(x)) * (rho - 1.0) / (a * a * b2 * b2);
}

ContourValue shifted_line_integral(double x, const KernelContext& ctx, const ContourConfig& contour) {
  check_x(x, "shifted_line_integral");
  ContourConfig line = contour;
  line.sigma = 0.0;
  return line_integral([&](Complex w) { return J_integrand(w, x, ctx); }, 0.0, ctx, line);
}

double shifted_line_envelope(const KernelContext& ctx, const ContourConfig& contour) {
  ContourConfig line = contour;
  line.sigma = 0.0;
  line.validate();
  const auto f = [&](Complex w) { return J_integrand(w, 2.0, ctx); };  // |x^{iv}| = 1 on Re w = 0
  const auto choice = choose_height(f, 0.0, -ctx.t, ctx.t, 6, 32.0, line,
                                    [](double c, double y) { return polynomial_tail(c, y, 6); });
  const LineGrid grid{0.0, -ctx.t, line.spacing, half_count(choice.height, line.spacing)};
  double total = 0.0;
  for (const Complex& v : sample(f, grid, 0)) total += std::abs(v);
  return line.spacing / kTwoPi * total + polynomial_tail(choice.prefactor, choice.height, 6);
}

ContourValue J_via_residue(double x, const KernelContext& ctx, const ContourConfig& contour) {
  ContourValue out = shifted_line_integral(x, ctx, contour);
  out.value += residue_term(x, ctx);
  return out;
}

ContourValue J_via_convolution(double x, const KernelContext& ctx, const MobiusTable& mobius,
                               const ContourConfig& contour, const QuadratureConfig& cfg, double y_max) {
  check_x(x, "J_via_convolution");
  cfg.validate();
  if (y_max == 0.0) y_max = x;
  if (!(y_max >= x)) throw DomainError("J_via_convolution: y_max must be >= x");

  const GKernel kernel(ctx, contour, 1.0 / x, cfg.workers);
  const LengthProfile profile(y_max, mobius);
  const auto rungs = profile.ladder(ctx.t);

  // Breakpoints: piece edges and y = x/n.
  std::vector<double> cuts;
  for (const auto& r : rungs) cuts.push_back(r.a);
  cuts.push_back(y_max);
  for (double n = 1.0; x / n > 1.0; n += 1.0) cuts.push_back(x / n);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double p, double q) { return q - p < 1e-12 * q; }),
             cuts.end());

  // g(y/x) oscillates in log y at rates up to |gamma0 - t| and |t|.
  const double rate = std::max(std::abs(ctx.rho0.gamma0() - ctx.t), std::abs(ctx.t)) + 1.0;
  const auto& fine_rule = gauss_legendre(static_cast<std::size_t>(cfg.panel_nodes));
  const auto& coarse_rule = gauss_legendre(static_cast<std::size_t>(std::max(cfg.panel_nodes / 2, 1)));

  struct Node {
    double y;
    double w_fine;
    double w_coarse;
    Complex m_log;  // M_y log y
  };
  std::vector<Node> nodes;
  std::size_t rung = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double a = cuts[c];
    const double b = cuts[c + 1];
    while (rung + 1 < rungs.size() && rungs[rung + 1].a <= a) ++rung;
    const auto& r = rungs[rung];
    const auto parts = static_cast<std::size_t>(std::max(1.0, std::ceil(rate * std::log(b / a) / 2.0)));
    const double width = (b - a) / static_cast<double>(parts);
    for (std::size_t p = 0; p < parts; ++p) {
      const double lo = a + width * static_cast<double>(p);
      const double mid = lo + 0.5 * width;
      auto add = [&](double y, double wf, double wc) {
        nodes.push_back({y, wf, wc, r.A * std::log(y) - r.B});
      };
      for (std::size_t q = 0; q < fine_rule.size(); ++q) {
        add(mid + 0.5 * width * fine_rule.nodes[q], 0.5 * width * fine_rule.weights[q], 0.0);
      }
      for (std::size_t q = 0; q < coarse_rule.size(); ++q) {
        add(mid + 0.5 * width * coarse_rule.nodes[q], 0.0, 0.5 * width * coarse_rule.weights[q]);
      }
    }
  }

  std::vector<Complex> fine_terms(nodes.size());
  std::vector<Complex> coarse_terms(nodes.size());
  std::vector<double> g_err(nodes.size());
  std::vector<double> g_tail(nodes.size());
  parallel_for(nodes.size(), cfg.workers, [&](std::size_t i) {
    const auto& nd = nodes[i];
    const ContourValue g = kernel(nd.y / x);
    fine_terms[i] = nd.w_fine * nd.m_log * g.value;
    coarse_terms[i] = nd.w_coarse * nd.m_log * g.value;
    g_err[i] = nd.w_fine * std::abs(nd.m_log) * g.err_estimate;
    g_tail[i] = nd.w_fine * std::abs(nd.m_log) * g.tail_bound;
  });
  const Complex fine = pairwise_sum(std::span<const Complex>(fine_terms));
  const Complex coarse = pairwise_sum(std::span<const Complex>(coarse_terms));

  ContourValue out;
  out.value = fine;
  out.err_estimate = std::abs(fine - coarse) + pairwise_sum(std::span<const double>(g_err));
  out.tail_bound = pairwise_sum(std::span<const double>(g_tail));
  out.height = kernel.left_height();
  out.nodes = nodes.size();
  return out;
}

LowerBoundTerms lower_bound_terms(double x, double t, const KernelContext& ctx, const MobiusTable& mobius) {
  check_x(x, "lower_bound_terms");
  checked(t, "lower_bound_terms");
  LowerBoundTerms out;
  out.lhs_pointwise = std::pow(x, 2.0 * ctx.rho0.beta0()) / std::pow(1.0 + std::abs(t), 4) + 1.0 / x;
  out.rhs_pointwise = LengthProfile(x, mobius).integral_abs_sq_log2(t);
  return out;
}

Complex mellin_numeric(Complex w, double t, double X, const MobiusTable& mobius) {
  checked(w, "mellin_numeric");
  if (!(X > 1.0)) throw DomainError("mellin_numeric: requires X > 1");
  if (std::abs(w - 1.0) < 1e-12) throw PoleError("mellin_numeric: w = 1");
  const LengthProfile profile(X, mobius);
  const Complex c = 1.0 - w;
  // Antiderivatives of y^{-w} and log y y^{-w}.
  auto power = [&](double y) { return std::exp(c * std::log(y)) / c; };
  auto log_power = [&](double y) { return std::exp(c * std::log(y)) * (std::log(y) / c - 1.0 / (c * c)); };
  ComplexCompensatedSum acc;
  for (const auto& r : profile.ladder(t)) {
    acc.add(r.A * (log_power(r.b) - log_power(r.a)) - r.B * (power(r.b) - power(r.a)));
  }
  return acc.value();
}

}  // namespace mml
