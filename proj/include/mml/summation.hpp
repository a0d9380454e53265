#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>

#include "mml/common.hpp"

namespace mml {

// Neumaier's variant of Kahan summation: exact for inputs of either magnitude order.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(Complex v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  Complex value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

// Pairwise reduction in index order. The tree shape depends only on the length,
// so the result is identical no matter how the inputs were produced.
template <class T>
T pairwise_sum(std::span<const T> values) {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    T acc{};
    for (const T& v : values) acc += v;
    return acc;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace mml
