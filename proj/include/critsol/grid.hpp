#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "critsol/dimension.hpp"

namespace critsol {

/// Radial grid r_i = r(xi_i), xi_i = i/n, i = 0..n.
///
/// The uniform grid uses r(xi) = r_max * xi. The stretched grid uses
/// r(xi) = core * sinh(sigma * xi) with sigma = asinh(r_max / core): spacing is
/// nearly uniform (core * sigma / n) for r << core and geometric for r >> core,
/// which lets one grid resolve a concentrated core and a long exponential tail.
/// Both maps are odd in xi, so radial (even) functions stay smooth in xi
/// across the origin.
class RadialGrid {
 public:
  static RadialGrid uniform(double r_max, std::size_t n);
  static RadialGrid stretched(double r_max, std::size_t n, double core);

  std::size_t intervals() const { return n_; }
  std::size_t size() const { return n_ + 1; }
  double r_max() const { return r_max_; }
  /// Stretch length; 0 for a uniform grid.
  double core() const { return core_; }
  bool is_uniform() const { return core_ == 0.0; }
  double dxi() const { return 1.0 / static_cast<double>(n_); }

  double r(std::size_t i) const { return (*nodes_)[i]; }
  /// dr/dxi at node i.
  double jacobian(std::size_t i) const { return (*jac_)[i]; }
  /// d^2 r / dxi^2 at node i.
  double jacobian_slope(std::size_t i) const;
  std::span<const double> nodes() const { return *nodes_; }
  std::span<const double> jacobians() const { return *jac_; }

  double r_of_xi(double xi) const;
  double dr_dxi(double xi) const;
  double xi_of_r(double r) const;

  /// r_1 - r_0.
  double spacing_at_origin() const { return r(1); }

  /// Same map with all lengths multiplied by `factor`.
  RadialGrid scaled(double factor) const;
  /// Same map with n multiplied by `factor` (spacing divided by factor).
  RadialGrid refined(std::size_t factor = 2) const;

  bool same_as(const RadialGrid& other) const {
    return n_ == other.n_ && r_max_ == other.r_max_ && core_ == other.core_;
  }

 private:
  RadialGrid(double r_max, std::size_t n, double core);

  double r_max_;
  std::size_t n_;
  double core_;
  double sigma_;
  std::shared_ptr<const std::vector<double>> nodes_;
  std::shared_ptr<const std::vector<double>> jac_;
};

/// Analytic continuation of a field beyond the last grid node:
/// u(r) ~ amplitude * r^{-power} * exp(-rate * r).
struct TailModel {
  double amplitude = 0.0;
  double power = 0.0;
  double rate = 0.0;

  double value(double r) const;
  double derivative(double r) const;

  /// int_R^inf |u|^p r^{d-1} dr, or nullopt when the integral diverges.
  /// Exact for rate == 0; leading order in 1/R otherwise.
  std::optional<double> power_integral(double p, Dimension d, double R) const;
  /// int_R^inf |u'|^2 r^{d-1} dr, same conventions.
  std::optional<double> gradient_integral(Dimension d, double R) const;

  /// Tail of lambda^{-1} u(c r) where c = lambda^{-2/(d-2)}.
  TailModel scaled(double lambda, Dimension d) const;
};

/// Samples of a radial function on a RadialGrid.
class RadialField {
 public:
  RadialField(RadialGrid grid, std::vector<double> values, Dimension dim,
              std::optional<TailModel> tail = std::nullopt);

  static RadialField sample(const RadialGrid& grid, Dimension dim,
                            const std::function<double(double)>& f,
                            std::optional<TailModel> tail = std::nullopt);
  static RadialField zero(const RadialGrid& grid, Dimension dim);

  const RadialGrid& grid() const { return grid_; }
  Dimension dimension() const { return dim_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::optional<TailModel>& tail() const { return tail_; }

  /// Value at arbitrary r >= 0: cubic interpolation in xi inside the grid,
  /// tail model beyond it. Throws GridError past r_max without a tail.
  double eval(double r) const;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  Dimension dim_;
  std::optional<TailModel> tail_;
};

/// T_lambda v(r) = lambda^{-1} v(lambda^{-2/(d-2)} r), represented exactly on
/// the grid stretched by lambda^{2/(d-2)}.
RadialField scale_field(const RadialField& v, double lambda);

}  // namespace critsol
