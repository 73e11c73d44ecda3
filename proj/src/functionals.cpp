#include "critsol/functionals.hpp"

#include <cmath>
#include <limits>

#include "critsol/ground_state.hpp"
#include "critsol/quadrature.hpp"

namespace critsol {

Norms norms(const RadialField& u, std::span<const double> powers) {
  const auto& grid = u.grid();
  const Dimension d = u.dimension();
  const double R = grid.r_max();
  const double sphere = d.sphere_area();
  Norms out;

  std::vector<double> f(u.size());
  auto power_integral = [&](double p) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(std::abs(u[i]), p);
    double value = integrate_radial(f, grid, d);
    if (u.tail()) {
      const auto extra = u.tail()->power_integral(p, d, R);
      if (extra) {
        value += sphere * *extra;
      } else {
        out.truncated = true;
      }
    }
    return value;
  };

  out.L2_sq = power_integral(2.0);
  for (double p : powers) out.Lr[p] = power_integral(p);

  const auto du = radial_derivative(u.values(), grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = du[i] * du[i];
  out.grad_L2_sq = integrate_radial(f, grid, d);
  if (u.tail()) {
    const auto extra = u.tail()->gradient_integral(d, R);
    if (extra) {
      out.grad_L2_sq += sphere * *extra;
    } else {
      out.truncated = true;
    }
  }
  return out;
}

IdentityReport evaluate_identities(const RadialField& u, const NonlinearitySpec& spec,
                                   double omega) {
  const Dimension d = u.dimension();
  const auto& grid = u.grid();
  const double two_star = d.two_star();
  const double powers[] = {two_star};
  const Norms n = norms(u, powers);
  const double crit = n.Lr.at(two_star);

  // int G(u) and int g(u) u; the tail beyond r_max is below the grid's
  // quadrature error for exponentially decaying fields.
  std::vector<double> G(u.size()), gu(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    G[i] = spec.G(u[i]);
    gu[i] = spec.g(u[i]) * u[i];
  }
  double intG = integrate_radial(G, grid, d);
  double intgu = integrate_radial(gu, grid, d);
  if (u.tail()) {
    for (const auto& t : spec.terms()) {
      const auto extra = u.tail()->power_integral(t.exponent + 1.0, d, grid.r_max());
      if (!extra) continue;
      intG += d.sphere_area() * t.coefficient / (t.exponent + 1.0) * *extra;
      intgu += d.sphere_area() * t.coefficient * *extra;
    }
  }

  IdentityReport rep;
  rep.truncated = n.truncated;
  const double grad = n.grad_L2_sq;
  const double mass = omega * n.L2_sq;
  rep.action_value = 0.5 * grad + 0.5 * mass - crit / two_star - intG;
  rep.nehari_value = grad + mass - crit - intgu;
  rep.pohozaev_value = grad / two_star + 0.5 * mass - crit / two_star - intG;
  rep.gradient_term = grad / d.value();

  const double tiny = std::numeric_limits<double>::min();
  rep.nehari_residual =
      std::abs(rep.nehari_value) / std::max(grad + mass + crit + std::abs(intgu), tiny);
  rep.pohozaev_residual = std::abs(rep.pohozaev_value) /
                          std::max(grad / two_star + 0.5 * mass + crit / two_star + std::abs(intG),
                                   tiny);
  const double rhs = d.value() * (intG - intgu / two_star);
  rep.mass_identity_residual = std::abs(mass - rhs) / std::max(mass, tiny);
  return rep;
}

IdentityReport evaluate_identities(const GroundState& gs) {
  return evaluate_identities(gs.field, gs.spec, gs.omega);
}

}  // namespace critsol
