#include "critsol/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace critsol {

double simpson(std::span<const double> g, double dxi) {
  const std::size_t n = g.size() - 1;
  if (g.size() < 3) throw std::invalid_argument("simpson needs at least 2 intervals");
  std::size_t even_end = (n % 2 == 0) ? n : n - 3;
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= even_end; i += 2) {
    sum += g[i] + 4.0 * g[i + 1] + g[i + 2];
  }
  sum *= dxi / 3.0;
  if (even_end != n) {
    const std::size_t i = even_end;
    sum += 3.0 * dxi / 8.0 * (g[i] + 3.0 * g[i + 1] + 3.0 * g[i + 2] + g[i + 3]);
  }
  return sum;
}

double integrate_dr(std::span<const double> f, const RadialGrid& grid) {
  if (f.size() != grid.size()) throw std::invalid_argument("integrand length mismatch");
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = f[i] * grid.jacobian(i);
  return simpson(g, grid.dxi());
}

double integrate_radial(std::span<const double> f, const RadialGrid& grid, Dimension d) {
  if (f.size() != grid.size()) throw std::invalid_argument("integrand length mismatch");
  std::vector<double> g(f.size());
  const int p = d.value() - 1;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = f[i] * std::pow(grid.r(i), p) * grid.jacobian(i);
  }
  return d.sphere_area() * simpson(g, grid.dxi());
}

double algebraic_tail(double f_at_R, double R, double decay) {
  if (!(decay > 1.0)) throw std::invalid_argument("algebraic tail diverges for decay <= 1");
  return f_at_R * R / (decay - 1.0);
}

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> x, int max_order) {
  const std::size_t n = x.size();
  const auto m = static_cast<std::size_t>(max_order);
  // c[k][j]: weight of node j for derivative k
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

namespace {

// Derivatives in xi (index units) of u at node i using a 5-point stencil.
struct XiDerivs {
  double d1;
  double d2;
};

XiDerivs xi_derivatives(std::span<const double> u, std::size_t i) {
  const long n = static_cast<long>(u.size()) - 1;
  long start = static_cast<long>(i) - 2;
  if (start + 4 > n) start = n - 4;
  // start may be negative: even reflection across the origin.
  std::array<double, 5> xs{};
  std::array<double, 5> vs{};
  for (long a = 0; a < 5; ++a) {
    xs[a] = static_cast<double>(start + a);
    vs[a] = u[static_cast<std::size_t>(std::abs(start + a))];
  }
  const auto w = fd_weights(static_cast<double>(i), xs, 2);
  XiDerivs out{0.0, 0.0};
  for (std::size_t a = 0; a < 5; ++a) {
    out.d1 += w[1][a] * vs[a];
    out.d2 += w[2][a] * vs[a];
  }
  return out;
}

}  // namespace

std::vector<double> radial_derivative(std::span<const double> u, const RadialGrid& grid) {
  if (u.size() != grid.size()) throw std::invalid_argument("field length mismatch");
  std::vector<double> out(u.size());
  const double n = static_cast<double>(grid.intervals());
  out[0] = 0.0;
  for (std::size_t i = 1; i < u.size(); ++i) {
    const auto dv = xi_derivatives(u, i);
    out[i] = dv.d1 * n / grid.jacobian(i);
  }
  return out;
}

std::vector<double> radial_laplacian(std::span<const double> u, const RadialGrid& grid,
                                     Dimension d) {
  if (u.size() != grid.size()) throw std::invalid_argument("field length mismatch");
  std::vector<double> out(u.size());
  const double n = static_cast<double>(grid.intervals());
  const double dm1 = d.value() - 1.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto dv = xi_derivatives(u, i);
    const double j = grid.jacobian(i);
    const double uxi = dv.d1 * n;
    const double uxixi = dv.d2 * n * n;
    const double urr = (uxixi - uxi * grid.jacobian_slope(i) / j) / (j * j);
    if (i == 0) {
      out[i] = d.value() * urr;
    } else {
      out[i] = urr + dm1 / grid.r(i) * (uxi / j);
    }
  }
  return out;
}

}  // namespace critsol
