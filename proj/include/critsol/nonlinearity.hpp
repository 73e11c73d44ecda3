#pragma once

#include <span>
#include <string>
#include <vector>

namespace critsol {

struct PowerTerm {
  double coefficient;
  double exponent;
};

/// Subcritical perturbation g(t) = sum_i c_i t^{p_i} with c_i > 0, p_i > 1.
///
/// Terms are stored sorted by exponent. p1 is the smallest exponent, p2 the
/// largest, and C2 = p2 * (coefficient of t^{p2}) is the limit of
/// g'(t)/t^{p2-1} as t -> infinity.
class NonlinearitySpec {
 public:
  /// Throws std::invalid_argument for an empty list, nonpositive
  /// coefficients, exponents <= 1 or repeated exponents.
  static NonlinearitySpec from_terms(std::vector<PowerTerm> terms);

  /// Convenience for g(t) = coefficient * t^exponent.
  static NonlinearitySpec power(double exponent, double coefficient = 1.0);

  std::span<const PowerTerm> terms() const { return terms_; }
  double p1() const { return terms_.front().exponent; }
  double p2() const { return terms_.back().exponent; }
  double C2() const { return terms_.back().exponent * terms_.back().coefficient; }

  /// g(t) for t >= 0 (odd extension for t < 0).
  double g(double t) const;
  /// g'(t) for t >= 0 (even extension for t < 0).
  double dg(double t) const;
  /// G(t) = int_0^t g.
  double G(double t) const;

  std::string describe() const;

 private:
  explicit NonlinearitySpec(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {}
  std::vector<PowerTerm> terms_;
};

}  // namespace critsol
