#include "critsol/ground_state.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "critsol/errors.hpp"
#include "critsol/functionals.hpp"

namespace critsol {

const char* to_string(ShotKind kind) {
  switch (kind) {
    case ShotKind::crossing: return "crossing";
    case ShotKind::rebound: return "rebound";
    case ShotKind::decay: return "decay";
  }
  return "?";
}

namespace {

struct Rhs {
  const NonlinearitySpec& spec;
  double omega;
  double q;    // 2* - 1
  double dm1;  // d - 1

  double force(double u) const {
    const double crit = std::copysign(std::pow(std::abs(u), q), u);
    return omega * u - crit - spec.g(u);
  }
  double dforce(double u) const {
    return omega - q * std::pow(std::abs(u), q - 1.0) - spec.dg(u);
  }
};

double core_length(double a, Dimension d) { return std::pow(a, -d.scaling_exponent()); }

RadialGrid search_grid(double a, Dimension d, double omega, const GroundStateOptions& opt) {
  return RadialGrid::stretched(opt.decay_lengths / std::sqrt(omega), opt.n_search,
                               core_length(a, d));
}

ShotKind classify(const NonlinearitySpec& spec, Dimension d, double omega, double a,
                  const RadialGrid& grid) {
  const auto kind = integrate_shot(spec, d, omega, a, grid).classification.kind;
  // A decayed trajectory sits on the separatrix; either side serves the bracket.
  return kind == ShotKind::decay ? ShotKind::rebound : kind;
}

}  // namespace

ShotResult integrate_shot(const NonlinearitySpec& spec, Dimension d, double omega, double a,
                          const RadialGrid& grid) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("initial height must be >= 0");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  const Rhs rhs{spec, omega, d.critical_power(), d.value() - 1.0};
  const std::size_t n = grid.intervals();
  std::vector<double> u(grid.size(), 0.0), v(grid.size(), 0.0);

  ShotResult out{RadialField::zero(grid, d), {}, {}, n};
  auto finish = [&](std::size_t last, ShotKind kind, std::optional<double> radius) {
    for (std::size_t i = last + 1; i < u.size(); ++i) {
      u[i] = u[last];
      v[i] = v[last];
    }
    out.last_node = last;
    out.classification = {kind, radius};
    out.trajectory = RadialField(grid, u, d);
    out.slope = v;
    return out;
  };

  // u = a + c r^2 + e r^4 near the origin.
  const double c = rhs.force(a) / (2.0 * d.value());
  const double e = rhs.dforce(a) * c / (4.0 * (d.value() + 2.0));
  u[0] = a;
  {
    const double r = grid.r(1);
    u[1] = a + c * r * r + e * r * r * r * r;
    v[1] = 2.0 * c * r + 4.0 * e * r * r * r;
  }
  if (a == 0.0) return finish(n, ShotKind::decay, std::nullopt);
  if (u[1] < 0.0) return finish(1, ShotKind::crossing, grid.r(1));
  if (v[1] > 0.0) return finish(1, ShotKind::rebound, grid.r(1));

  const double h = grid.dxi();
  auto f = [&](double xi, double uu, double vv, double& du, double& dv) {
    const double r = grid.r_of_xi(xi);
    const double j = grid.dr_dxi(xi);
    du = j * vv;
    dv = j * (rhs.force(uu) - rhs.dm1 / r * vv);
  };

  for (std::size_t i = 1; i < n; ++i) {
    const double xi = static_cast<double>(i) * h;
    double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
    f(xi, u[i], v[i], k1u, k1v);
    f(xi + 0.5 * h, u[i] + 0.5 * h * k1u, v[i] + 0.5 * h * k1v, k2u, k2v);
    f(xi + 0.5 * h, u[i] + 0.5 * h * k2u, v[i] + 0.5 * h * k2v, k3u, k3v);
    f(xi + h, u[i] + h * k3u, v[i] + h * k3v, k4u, k4v);
    const double un = u[i] + h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
    const double vn = v[i] + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    if (!std::isfinite(un) || !std::isfinite(vn)) {
      return finish(i, ShotKind::crossing, grid.r(i));
    }
    u[i + 1] = un;
    v[i + 1] = vn;
    if (un < 0.0) {
      const double t = u[i] / (u[i] - un);
      return finish(i + 1, ShotKind::crossing, grid.r(i) + t * (grid.r(i + 1) - grid.r(i)));
    }
    if (vn > 0.0) {
      const double t = -v[i] / (vn - v[i]);
      return finish(i + 1, ShotKind::rebound, grid.r(i) + t * (grid.r(i + 1) - grid.r(i)));
    }
  }

  if (u[n] <= 1e-8 * a && std::abs(v[n]) <= 1e-8 * a * std::sqrt(omega)) {
    return finish(n, ShotKind::decay, std::nullopt);
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "shot from a = %.6e reached r_max = %.3e unclassified (u = %.3e); extend the grid",
                a, grid.r_max(), u[n]);
  throw IntegrationError(buf);
}

double equilibrium_height(const NonlinearitySpec& spec, Dimension d, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  const double q = d.critical_power();
  auto h = [&](double a) { return std::pow(a, q - 1.0) + spec.g(a) / a - omega; };
  double lo = 1.0, hi = 1.0;
  while (h(lo) > 0.0) lo *= 0.5;
  while (h(hi) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) > 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

GroundState find_ground_state(const NonlinearitySpec& spec, Dimension d, double omega,
                              const GroundStateOptions& opt) {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be > 0");
  const double a_eq = equilibrium_height(spec, d, omega);

  // Bracket: below the equilibrium every shot rebounds; double until one crosses.
  double lo = 0.5 * a_eq;
  double hi = 2.0 * a_eq;
  int doublings = 0;
  while (classify(spec, d, omega, hi, search_grid(hi, d, omega, opt)) != ShotKind::crossing) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > opt.max_doublings) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "no crossing below a = %.3e for omega = %.6g (%d doublings)", hi, omega,
                    opt.max_doublings);
      throw NoBracketError(buf);
    }
  }

  const RadialGrid grid =
      opt.grid ? *opt.grid
               : RadialGrid::stretched(opt.decay_lengths / std::sqrt(omega), opt.n,
                                       core_length(std::sqrt(lo * hi), d));

  // Re-establish the bracket on the final grid.
  for (int k = 0; classify(spec, d, omega, lo, grid) != ShotKind::rebound; ++k) {
    if (k > opt.max_doublings) throw NoBracketError("lost the rebound witness on the final grid");
    hi = lo;
    lo *= 0.5;
  }
  for (int k = 0; classify(spec, d, omega, hi, grid) != ShotKind::crossing; ++k) {
    if (k > opt.max_doublings) throw NoBracketError("lost the crossing witness on the final grid");
    lo = hi;
    hi *= 2.0;
  }

  int steps = 0;
  while (hi - lo > opt.tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (classify(spec, d, omega, mid, grid) == ShotKind::crossing ? hi : lo) = mid;
    ++steps;
  }

  const auto below = integrate_shot(spec, d, omega, lo, grid);
  const auto above = integrate_shot(spec, d, omega, hi, grid);
  const std::size_t reach = std::min(below.last_node, above.last_node);
  std::vector<double> u(grid.size()), du(grid.size());
  std::size_t matched = 0;
  for (std::size_t i = 0; i <= reach; ++i) {
    const double ul = below.trajectory[i], uh = above.trajectory[i];
    const double mean = 0.5 * (ul + uh);
    if (!(mean > 0.0) || std::abs(uh - ul) > 1e-9 * mean) break;
    u[i] = mean;
    du[i] = 0.5 * (below.slope[i] + above.slope[i]);
    matched = i;
  }
  if (matched < 2) throw IntegrationError("shooting trajectories separate at the origin");

  // Decaying solution of the linear problem, c r^{-nu} K_nu(k r), beyond the match.
  const double k = std::sqrt(omega);
  const double nu = 0.5 * d.value() - 1.0;
  const double rm = grid.r(matched);
  const double amp = u[matched] / (std::pow(rm, -nu) * std::cyl_bessel_k(nu, k * rm));
  for (std::size_t i = matched + 1; i < grid.size(); ++i) {
    const double r = grid.r(i);
    u[i] = amp * std::pow(r, -nu) * std::cyl_bessel_k(nu, k * r);
    du[i] = -amp * k * std::pow(r, -nu) * std::cyl_bessel_k(nu + 1.0, k * r);
  }
  const double R = grid.r_max();
  const double tail_power = 0.5 * (d.value() - 1);
  const TailModel tail{u.back() * std::pow(R, tail_power) * std::exp(k * R), tail_power, k};

  GroundState gs{omega, d, spec, RadialField(grid, std::move(u), d, tail), std::move(du), 0.0, {}};
  gs.M_omega = gs.field[0];
  gs.diagnostics.bisection_steps = steps;
  gs.diagnostics.matched_node = matched;
  bool monotone = true;
  for (std::size_t i = 1; i < gs.field.size(); ++i) {
    if (!(gs.field[i] < gs.field[i - 1])) monotone = false;
  }
  gs.diagnostics.monotone = monotone;

  const auto rep = evaluate_identities(gs.field, spec, omega);
  gs.diagnostics.nehari_residual = rep.nehari_residual;
  gs.diagnostics.pohozaev_residual = rep.pohozaev_residual;
  gs.diagnostics.mass_identity_residual = rep.mass_identity_residual;
  if (opt.check_residuals) {
    const double worst = std::max({rep.nehari_residual, rep.pohozaev_residual,
                                   rep.mass_identity_residual});
    if (worst > opt.residual_tol) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "ground state residuals too large at omega = %.6g (Nehari %.3e, Pohozaev "
                    "%.3e, mass %.3e); refine the grid",
                    omega, rep.nehari_residual, rep.pohozaev_residual,
                    rep.mass_identity_residual);
      throw ResidualError(buf);
    }
    if (!monotone) throw ResidualError("ground state is not strictly decreasing on the grid");
  }
  return gs;
}

RadialField rescaled_profile(const GroundState& gs) { return scale_field(gs.field, gs.M_omega); }

double rescaled_frequency(const GroundState& gs) {
  return std::pow(gs.M_omega, -2.0 * gs.dim.scaling_exponent()) * gs.omega;
}

DecayCheck decay_check(const RadialField& u) {
  const double p = u.dimension().value() - 2.0;
  const auto& grid = u.grid();
  double sup = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sup = std::max(sup, std::abs(u[i]) * std::pow(1.0 + grid.r(i), p));
  }
  double extended = sup;
  if (u.tail()) {
    const double R = grid.r_max();
    for (int k = 1; k <= 1000; ++k) {
      const double r = R * std::pow(10.0, k / 1000.0);
      extended = std::max(extended, std::abs(u.tail()->value(r)) * std::pow(1.0 + r, p));
    }
  }
  const bool finite = std::isfinite(sup) && std::isfinite(extended);
  return {extended, finite && extended - sup <= 1e-6 * sup};
}

DecayCheck decay_check(const GroundState& gs) { return decay_check(rescaled_profile(gs)); }

}  // namespace critsol
