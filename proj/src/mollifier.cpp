#include "mml/mollifier.hpp"

#include <algorithm>
#include <cmath>

#include "mml/parallel.hpp"
#include "mml/quadrature.hpp"
#include "mml/summation.hpp"

namespace mml {

MollifierSpec MollifierSpec::make(double x, const MobiusTable& mobius) {
  MollifierSpec spec;
  spec.x = x;
  spec.coeffs = coefficient_table(x, mobius);
  if (x <= 1.0) return spec;
  spec.log_x = std::log(x);
  spec.amp.reserve(spec.coeffs.entries.size());
  spec.logn.reserve(spec.coeffs.entries.size());
  for (const auto& e : spec.coeffs.entries) {
    if (e.weight == 0.0) continue;  // n = x exactly
    const double n = static_cast<double>(e.n);
    spec.amp.push_back(e.mu * e.weight / (std::sqrt(n) * spec.log_x));
    spec.logn.push_back(std::log(n));
  }
  return spec;
}

void TGrid::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("TGrid: dt must be positive");
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw DomainError("TGrid: t0 must be non-negative");
  if (count == 0) throw SizingError("TGrid: count must be positive");
}

Complex mollifier_value(const MollifierSpec& spec, double t) {
  checked(t, "mollifier_value");
  ComplexCompensatedSum acc;
  for (std::size_t k = 0; k < spec.amp.size(); ++k) acc.add(spec.amp[k] * cis(-t * spec.logn[k]));
  return acc.value();
}

namespace {

// Accumulates the contribution of terms [n_begin, n_end) to grid points
// [k_begin, k_end), where k_begin is a multiple of the anchor interval.
void grid_block(const MollifierSpec& spec, const TGrid& grid, std::size_t n_begin, std::size_t n_end,
                std::size_t k_begin, std::size_t k_end, double* re, double* im) {
  for (std::size_t k0 = k_begin; k0 < k_end; k0 += kReanchorInterval) {
    const std::size_t k1 = std::min(k_end, k0 + kReanchorInterval);
    const double t_anchor = grid.at(k0);
    for (std::size_t n = n_begin; n < n_end; ++n) {
      const double amp = spec.amp[n];
      const double ln = spec.logn[n];
      double zr = amp * std::cos(t_anchor * ln);
      double zi = -amp * std::sin(t_anchor * ln);
      const double sr = std::cos(grid.dt * ln);
      const double si = -std::sin(grid.dt * ln);
      for (std::size_t k = k0; k < k1; ++k) {
        re[k] += zr;
        im[k] += zi;
        const double nr = zr * sr - zi * si;
        zi = zr * si + zi * sr;
        zr = nr;
      }
    }
  }
}

}  // namespace

std::vector<Complex> mollifier_grid(const MollifierSpec& spec, const TGrid& grid, unsigned workers) {
  grid.validate();
  std::vector<double> re(grid.count, 0.0);
  std::vector<double> im(grid.count, 0.0);
  const std::size_t chunks = (grid.count + kReanchorInterval - 1) / kReanchorInterval;
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t k_begin = c * kReanchorInterval;
    const std::size_t k_end = std::min(grid.count, k_begin + kReanchorInterval);
    for (std::size_t n0 = 0; n0 < spec.amp.size(); n0 += kBlockTerms) {
      grid_block(spec, grid, n0, std::min(spec.amp.size(), n0 + kBlockTerms), k_begin, k_end, re.data(),
                 im.data());
    }
  });
  std::vector<Complex> out(grid.count);
  for (std::size_t k = 0; k < grid.count; ++k) out[k] = {re[k], im[k]};
  return out;
}

LengthProfile::LengthProfile(double x, const MobiusTable& mobius) : x_(x) {
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("LengthProfile: x must be >= 1");
  const auto table = coefficient_table(x, mobius);
  constexpr std::size_t kOrder = 16;
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    Piece p;
    p.a = table.entries[i].n;
    p.b = i + 1 < table.entries.size() ? static_cast<double>(table.entries[i + 1].n) : x;
    p.mu = table.entries[i].mu;
    if (!(p.b > p.a)) continue;
    p.log_a = std::log(p.a);
    p.log1 = integrate_gl([](double y) { return std::log(y); }, p.a, p.b, kOrder);
    p.log2 = integrate_gl([](double y) { return std::log(y) * std::log(y); }, p.a, p.b, kOrder);
    if (p.a >= 2.0) {
      p.inv_log = integrate_gl([](double y) { return 1.0 / std::log(y); }, p.a, p.b, kOrder);
      p.inv_log_sq = integrate_gl([](double y) { return 1.0 / (std::log(y) * std::log(y)); }, p.a, p.b, kOrder);
    }
    pieces_.push_back(p);
  }
}

std::vector<LengthProfile::Rung> LengthProfile::ladder(double t) const {
  std::vector<Rung> out;
  out.reserve(pieces_.size());
  ComplexCompensatedSum a_sum;
  ComplexCompensatedSum b_sum;
  for (const auto& p : pieces_) {
    const Complex term = (p.mu / std::sqrt(p.a)) * cis(-t * p.log_a);
    a_sum.add(term);
    b_sum.add(term * p.log_a);
    out.push_back({p.a, p.b, a_sum.value(), b_sum.value()});
  }
  return out;
}

double LengthProfile::integral_abs_sq(double t) const {
  const auto rungs = ladder(t);
  CompensatedSum acc;
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    const auto& p = pieces_[i];
    const auto& r = rungs[i];
    const double aa = std::norm(r.A);
    if (p.a < 2.0) {
      acc.add(aa * (p.b - p.a));
      continue;
    }
    const double ab = (r.A * std::conj(r.B)).real();
    acc.add(aa * (p.b - p.a) - 2.0 * ab * p.inv_log + std::norm(r.B) * p.inv_log_sq);
  }
  return acc.value();
}

double LengthProfile::integral_abs_sq_log2(double t) const {
  const auto rungs = ladder(t);
  CompensatedSum acc;
  for (std::size_t i = 0; i < rungs.size(); ++i) {
    const auto& p = pieces_[i];
    const auto& r = rungs[i];
    const double ab = (r.A * std::conj(r.B)).real();
    acc.add(std::norm(r.A) * p.log2 - 2.0 * ab * p.log1 + std::norm(r.B) * (p.b - p.a));
  }
  return acc.value();
}

double LengthProfile::integral_abs_log(double t) const {
  const auto rungs = ladder(t);
  CompensatedSum acc;
  for (const auto& r : rungs) {
    acc.add(integrate_gl([&](double y) { return std::abs(r.A * std::log(y) - r.B); }, r.a, r.b, 12));
  }
  return acc.value();
}

}  // namespace mml
