#pragma once

#include <span>
#include <vector>

#include "critsol/dimension.hpp"
#include "critsol/grid.hpp"

namespace critsol {

/// Composite Simpson over xi in [0, 1] for samples g_i = g(xi_i); an odd
/// interval count closes with a 3/8 panel.
double simpson(std::span<const double> g, double dxi);

/// int_0^{r_max} f(r) dr for nodal samples of f.
double integrate_dr(std::span<const double> f, const RadialGrid& grid);

/// int_{|x| <= r_max} f(|x|) dx = |S^{d-1}| int_0^{r_max} f(r) r^{d-1} dr.
double integrate_radial(std::span<const double> f, const RadialGrid& grid, Dimension d);

/// int_R^inf f(r) dr for f(r) ~ f(R) (R/r)^decay, decay > 1.
double algebraic_tail(double f_at_R, double R, double decay);

/// Finite-difference weights for derivatives 0..max_order at x0 over the
/// stencil x (Fornberg's recursion). Result is indexed [order][node].
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> x, int max_order);

/// du/dr at every node: fourth-order differences in xi, chain rule to r,
/// even reflection at the origin (so du/dr(0) = 0), one-sided at r_max.
std::vector<double> radial_derivative(std::span<const double> u, const RadialGrid& grid);

/// u'' + (d-1)/r u' at every node, same stencils; the origin uses d * u''(0).
std::vector<double> radial_laplacian(std::span<const double> u, const RadialGrid& grid,
                                     Dimension d);

}  // namespace critsol
