#pragma once

#include <numbers>
#include <stdexcept>
#include <string>

namespace critsol {

/// Spatial dimension of the problem. Only d = 3 and d = 4 are supported.
class Dimension {
 public:
  static Dimension of(int d) {
    if (d != 3 && d != 4) {
      throw std::invalid_argument("dimension must be 3 or 4, got " + std::to_string(d));
    }
    return Dimension(d);
  }

  constexpr int value() const { return d_; }

  /// Sobolev critical exponent 2* = 2d/(d-2).
  constexpr double two_star() const { return 2.0 * d_ / (d_ - 2); }

  /// Power of the critical nonlinearity, (d+2)/(d-2) = 2* - 1.
  constexpr double critical_power() const { return (d_ + 2.0) / (d_ - 2); }

  /// Radial exponent of the H^1-critical scaling, 2/(d-2).
  constexpr double scaling_exponent() const { return 2.0 / (d_ - 2); }

  /// |S^{d-1}|.
  constexpr double sphere_area() const {
    return d_ == 3 ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi * std::numbers::pi;
  }

  friend constexpr bool operator==(Dimension, Dimension) = default;

 private:
  constexpr explicit Dimension(int d) : d_(d) {}
  int d_;
};

}  // namespace critsol
