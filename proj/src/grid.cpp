#include "critsol/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "critsol/errors.hpp"

namespace critsol {

RadialGrid::RadialGrid(double r_max, std::size_t n, double core)
    : r_max_(r_max), n_(n), core_(core), sigma_(0.0) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("r_max must be > 0");
  if (n < 4) throw std::invalid_argument("grid needs at least 4 intervals");
  if (core < 0.0) throw std::invalid_argument("stretch length must be >= 0");
  if (core > 0.0) sigma_ = std::asinh(r_max / core);

  auto nodes = std::make_shared<std::vector<double>>(n + 1);
  auto jac = std::make_shared<std::vector<double>>(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(n);
    (*nodes)[i] = r_of_xi(xi);
    (*jac)[i] = dr_dxi(xi);
  }
  (*nodes)[0] = 0.0;
  (*nodes)[n] = r_max;
  nodes_ = std::move(nodes);
  jac_ = std::move(jac);
}

RadialGrid RadialGrid::uniform(double r_max, std::size_t n) { return RadialGrid(r_max, n, 0.0); }

RadialGrid RadialGrid::stretched(double r_max, std::size_t n, double core) {
  if (!(core > 0.0)) throw std::invalid_argument("stretched grid needs core > 0");
  return RadialGrid(r_max, n, core);
}

double RadialGrid::r_of_xi(double xi) const {
  return is_uniform() ? r_max_ * xi : core_ * std::sinh(sigma_ * xi);
}

double RadialGrid::dr_dxi(double xi) const {
  return is_uniform() ? r_max_ : core_ * sigma_ * std::cosh(sigma_ * xi);
}

double RadialGrid::jacobian_slope(std::size_t i) const {
  return is_uniform() ? 0.0 : sigma_ * sigma_ * r(i);
}

double RadialGrid::xi_of_r(double r) const {
  return is_uniform() ? r / r_max_ : std::asinh(r / core_) / sigma_;
}

RadialGrid RadialGrid::scaled(double factor) const {
  if (!(factor > 0.0)) throw std::invalid_argument("grid scale factor must be > 0");
  return RadialGrid(r_max_ * factor, n_, core_ * factor);
}

RadialGrid RadialGrid::refined(std::size_t factor) const {
  if (factor == 0) throw std::invalid_argument("refinement factor must be >= 1");
  return RadialGrid(r_max_, n_ * factor, core_);
}

double TailModel::value(double r) const {
  return amplitude * std::pow(r, -power) * std::exp(-rate * r);
}

double TailModel::derivative(double r) const { return -(power / r + rate) * value(r); }

std::optional<double> TailModel::power_integral(double p, Dimension d, double R) const {
  const double A = std::abs(amplitude);
  if (A == 0.0) return 0.0;
  const double dd = d.value();
  if (rate == 0.0) {
    const double e = p * power - dd;
    if (e <= 0.0) return std::nullopt;
    return std::pow(A, p) * std::pow(R, -e) / e;
  }
  // int_R^inf e^{-p k r} r^{m} dr ~ f(R) / (p k - m / R)
  const double m = dd - 1.0 - p * power;
  const double denom = p * rate - m / R;
  const double fR = std::pow(std::abs(value(R)), p) * std::pow(R, dd - 1.0);
  return denom > 0.0 ? fR / denom : fR / (p * rate);
}

std::optional<double> TailModel::gradient_integral(Dimension d, double R) const {
  const double A = std::abs(amplitude);
  if (A == 0.0) return 0.0;
  const double dd = d.value();
  if (rate == 0.0) {
    const double e = 2.0 * power + 2.0 - dd;
    if (e <= 0.0) return std::nullopt;
    return A * A * power * power * std::pow(R, -e) / e;
  }
  const double du = derivative(R);
  const double m = dd - 1.0 - 2.0 * power;
  const double denom = 2.0 * rate - m / R;
  const double fR = du * du * std::pow(R, dd - 1.0);
  return denom > 0.0 ? fR / denom : fR / (2.0 * rate);
}

TailModel TailModel::scaled(double lambda, Dimension d) const {
  const double c = std::pow(lambda, -d.scaling_exponent());
  return TailModel{amplitude / lambda * std::pow(c, -power), power, rate * c};
}

RadialField::RadialField(RadialGrid grid, std::vector<double> values, Dimension dim,
                         std::optional<TailModel> tail)
    : grid_(std::move(grid)), values_(std::move(values)), dim_(dim), tail_(tail) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("field values must be finite");
  }
}

RadialField RadialField::sample(const RadialGrid& grid, Dimension dim,
                                const std::function<double(double)>& f,
                                std::optional<TailModel> tail) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.r(i));
  return RadialField(grid, std::move(v), dim, tail);
}

RadialField RadialField::zero(const RadialGrid& grid, Dimension dim) {
  return RadialField(grid, std::vector<double>(grid.size(), 0.0), dim, TailModel{});
}

double RadialField::eval(double r) const {
  r = std::abs(r);
  const std::size_t n = grid_.intervals();
  if (r > grid_.r_max()) {
    if (!tail_) throw GridError("evaluation at r beyond r_max without a tail model");
    return tail_->value(r);
  }
  const double xi = grid_.xi_of_r(r) * static_cast<double>(n);
  auto j = static_cast<long>(std::floor(xi));
  j = std::clamp<long>(j, 0, static_cast<long>(n) - 1);
  // 4-point stencil j-1..j+2; even reflection across the origin.
  long start = j - 1;
  if (start + 3 > static_cast<long>(n)) start = static_cast<long>(n) - 3;
  double sum = 0.0;
  for (long a = 0; a < 4; ++a) {
    const long ia = start + a;
    double w = 1.0;
    for (long b = 0; b < 4; ++b) {
      if (b == a) continue;
      w *= (xi - static_cast<double>(start + b)) / static_cast<double>(a - b);
    }
    sum += w * values_[static_cast<std::size_t>(std::abs(ia))];
  }
  return sum;
}

RadialField scale_field(const RadialField& v, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("scaling parameter must be > 0");
  const Dimension d = v.dimension();
  std::vector<double> values(v.values().begin(), v.values().end());
  for (double& x : values) x /= lambda;
  std::optional<TailModel> tail;
  if (v.tail()) tail = v.tail()->scaled(lambda, d);
  return RadialField(v.grid().scaled(std::pow(lambda, d.scaling_exponent())), std::move(values), d,
                     tail);
}

}  // namespace critsol
