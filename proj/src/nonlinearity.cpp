#include "critsol/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace critsol {

NonlinearitySpec NonlinearitySpec::from_terms(std::vector<PowerTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("nonlinearity needs at least one term");
  for (const auto& t : terms) {
    if (!(t.coefficient > 0.0) || !std::isfinite(t.coefficient)) {
      throw std::invalid_argument("nonlinearity coefficients must be positive");
    }
    if (!(t.exponent > 1.0) || !std::isfinite(t.exponent)) {
      throw std::invalid_argument("nonlinearity exponents must exceed 1");
    }
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (terms[i].exponent == terms[i - 1].exponent) {
      throw std::invalid_argument("nonlinearity exponents must be distinct");
    }
  }
  return NonlinearitySpec(std::move(terms));
}

NonlinearitySpec NonlinearitySpec::power(double exponent, double coefficient) {
  return from_terms({{coefficient, exponent}});
}

double NonlinearitySpec::g(double t) const {
  const double a = std::abs(t);
  double sum = 0.0;
  for (const auto& term : terms_) sum += term.coefficient * std::pow(a, term.exponent);
  return t < 0.0 ? -sum : sum;
}

double NonlinearitySpec::dg(double t) const {
  const double a = std::abs(t);
  double sum = 0.0;
  for (const auto& term : terms_) {
    sum += term.coefficient * term.exponent * std::pow(a, term.exponent - 1.0);
  }
  return sum;
}

double NonlinearitySpec::G(double t) const {
  const double a = std::abs(t);
  double sum = 0.0;
  for (const auto& term : terms_) {
    sum += term.coefficient * std::pow(a, term.exponent + 1.0) / (term.exponent + 1.0);
  }
  return sum;
}

std::string NonlinearitySpec::describe() const {
  std::string out;
  char buf[64];
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6g*t^%.6g", i ? " + " : "", terms_[i].coefficient,
                  terms_[i].exponent);
    out += buf;
  }
  return out;
}

}  // namespace critsol
