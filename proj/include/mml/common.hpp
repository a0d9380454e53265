#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mml {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kEulerGamma = std::numbers::egamma;

inline constexpr const char* kVersion = "1.0.0";

// Error hierarchy. Everything the library throws derives from mml::Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the supported region of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation at (or numerically on top of) a pole or a zero in a denominator.
class PoleError : public Error {
 public:
  using Error::Error;
};

// Root bracket without a sign change.
class BracketError : public Error {
 public:
  using Error::Error;
};

// Contour or quadrature configuration that cannot meet its own tolerance.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Table sizes that are zero, too small for the request, or overflow the index type.
class SizingError : public Error {
 public:
  using Error::Error;
};

// Desk-scale guardrail refused a request.
class GuardrailError : public Error {
 public:
  using Error::Error;
};

inline Complex cis(double phase) { return {std::cos(phase), std::sin(phase)}; }

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// NaN and infinity never enter the library as arguments.
inline Complex checked(Complex z, const char* what) {
  if (!is_finite(z)) throw DomainError(std::string(what) + ": non-finite complex argument");
  return z;
}

inline double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + ": non-finite argument");
  return v;
}

// Warnings raised by numerical routines (node perturbations, degraded precision).
// The default sink writes to stderr; tests and the CLI may replace it.
using WarningSink = void (*)(const std::string&);
void set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace mml
