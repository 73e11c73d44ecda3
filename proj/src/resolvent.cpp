#include "critsol/resolvent.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "critsol/errors.hpp"
#include "critsol/profiles.hpp"
#include "critsol/quadrature.hpp"

namespace critsol {

namespace {

// Scaled homogeneous pair on a grid: phi1 = e^{k r} a, phi1' = e^{k r} z,
// phi2 = e^{-k r} r^{-m} b, and the constant r^{d-1}(phi1' phi2 - phi1 phi2').
struct HomogeneousPair {
  std::vector<double> a, z, b, bp;
  double wronskian = 1.0;
};

HomogeneousPair closed_form_pair(const RadialGrid& grid, double k) {
  const std::size_t N = grid.size();
  HomogeneousPair p{std::vector<double>(N), std::vector<double>(N), std::vector<double>(N, 1.0),
                    std::vector<double>(N, 0.0), 1.0};
  for (std::size_t i = 0; i < N; ++i) {
    const double x = k * grid.r(i);
    if (x < 1e-4) {
      p.a[i] = 1.0 - x + 2.0 * x * x / 3.0;
      p.z[i] = k * (x / 3.0 - x * x / 3.0);
    } else {
      p.a[i] = -std::expm1(-2.0 * x) / (2.0 * x);
      // phi1' e^{-k r} = (cosh x / r - sinh x / (k r^2)) e^{-x}
      p.z[i] = k * ((1.0 + std::exp(-2.0 * x)) / (2.0 * x) - p.a[i] / x);
    }
  }
  return p;
}

using Vec2 = std::array<double, 2>;

template <class F>
Vec2 rk4(const F& f, double t, const Vec2& y, double h) {
  auto axpy = [](const Vec2& y0, double c, const Vec2& k) {
    return Vec2{y0[0] + c * k[0], y0[1] + c * k[1]};
  };
  const Vec2 k1 = f(t, y);
  const Vec2 k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
  const Vec2 k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
  const Vec2 k4 = f(t + h, axpy(y, h, k3));
  return Vec2{y[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
              y[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

HomogeneousPair integrated_pair(const RadialGrid& grid, Dimension dim, double k) {
  const std::size_t n = grid.intervals();
  const std::size_t N = grid.size();
  const double d = dim.value();
  const double m = d - 2.0;
  const double s = k * k;
  const double h = grid.dxi();
  HomogeneousPair p{std::vector<double>(N), std::vector<double>(N), std::vector<double>(N),
                    std::vector<double>(N), 0.0};

  // phi1 = sum_j c_j r^{2j}, c_j = c_{j-1} s / (2j (2j + d - 2)), near the origin.
  auto series = [&](double r, double& phi, double& dphi) {
    double c = 1.0, term = 1.0;
    phi = 1.0;
    dphi = 0.0;
    for (int j = 1; j <= 6; ++j) {
      c *= s / (2.0 * j * (2.0 * j + d - 2.0));
      term = c * std::pow(r, 2 * j);
      phi += term;
      dphi += 2.0 * j * term / r;
    }
  };
  p.a[0] = 1.0;
  p.z[0] = 0.0;
  {
    double phi, dphi;
    const double r1 = grid.r(1);
    series(r1, phi, dphi);
    p.a[1] = std::exp(-k * r1) * phi;
    p.z[1] = std::exp(-k * r1) * dphi;
  }
  // a' = z - k a, z' = -k z + s a - (d-1) z / r, in the grid coordinate.
  auto outward = [&](double xi, const Vec2& y) {
    const double r = grid.r_of_xi(xi);
    const double j = grid.dr_dxi(xi);
    return Vec2{j * (y[1] - k * y[0]), j * (-k * y[1] + s * y[0] - (d - 1.0) * y[1] / r)};
  };
  for (std::size_t i = 1; i < n; ++i) {
    const Vec2 y = rk4(outward, static_cast<double>(i) * h, Vec2{p.a[i], p.z[i]}, h);
    p.a[i + 1] = y[0];
    p.z[i + 1] = y[1];
  }

  // b'' = 2k b' - (3-d)(b' - k b)/r, integrated inward from a seed built on
  // the large-argument expansion of r^{-nu} K_nu(k r).
  const double nu = 0.5 * d - 1.0;
  const double mu = 4.0 * nu * nu;
  auto seed = [&](double r, double& b, double& bp) {
    const double x = k * r;
    double term = 1.0, sum = 1.0, dsum = 0.0;
    for (int j = 1; j <= 8; ++j) {
      const double odd = 2.0 * j - 1.0;
      term *= (mu - odd * odd) / (j * 8.0 * x);
      sum += term;
      dsum += -j * term / r;
    }
    const double e = m - nu - 0.5;
    const double pre = std::sqrt(std::numbers::pi / (2.0 * k)) * std::pow(r, e);
    b = pre * sum;
    bp = pre * (e / r * sum + dsum);
  };
  const double R = grid.r_max();
  const double R_ext = R + 16.0 / k;
  double b, bp;
  seed(R_ext, b, bp);
  auto inward_r = [&](double r, const Vec2& y) {
    return Vec2{y[1], 2.0 * k * y[1] - (3.0 - d) * (y[1] - k * y[0]) / r};
  };
  Vec2 y{b, bp};
  const int aux = 4096;
  const double hr = (R - R_ext) / aux;
  for (int i = 0; i < aux; ++i) y = rk4(inward_r, R_ext + i * hr, y, hr);
  p.b[n] = y[0];
  p.bp[n] = y[1];
  auto inward = [&](double xi, const Vec2& yy) {
    const auto dy = inward_r(grid.r_of_xi(xi), yy);
    const double j = grid.dr_dxi(xi);
    return Vec2{j * dy[0], j * dy[1]};
  };
  for (std::size_t i = n; i > 1; --i) {
    y = rk4(inward, static_cast<double>(i) * h, y, -h);
    p.b[i - 1] = y[0];
    p.bp[i - 1] = y[1];
  }
  // Only multiplied by r = 0 below; the limit value keeps the array tidy.
  p.b[0] = p.b[1];
  p.bp[0] = p.bp[1];

  // r (a' b - a b' + 2k a b) + m a b, constant in exact arithmetic.
  auto wr = [&](std::size_t i) {
    const double r = grid.r(i);
    const double ap = p.z[i] - k * p.a[i];
    return r * (ap * p.b[i] - p.a[i] * p.bp[i] + 2.0 * k * p.a[i] * p.b[i]) +
           m * p.a[i] * p.b[i];
  };
  p.wronskian = wr(n / 2);
  double drift = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    drift = std::max(drift, std::abs(wr(i) - p.wronskian) / std::abs(p.wronskian));
  }
  if (drift > 1e-6) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "Wronskian drift %.3e exceeds 1e-6 (s = %.3e)", drift, s);
    throw IntegrationError(buf);
  }
  return p;
}

// Interval integrals of q over [xi_i, xi_{i+1}] with the cubic through four
// neighbouring nodes; weight(j) multiplies q_j.
template <class W>
double interval_integral(std::span<const double> q, std::size_t i, const W& weight, double h) {
  const std::size_t n = q.size() - 1;
  if (i == 0) {
    return h / 24.0 * (9 * weight(0) * q[0] + 19 * weight(1) * q[1] - 5 * weight(2) * q[2] +
                       weight(3) * q[3]);
  }
  if (i == n - 1) {
    return h / 24.0 * (weight(n - 3) * q[n - 3] - 5 * weight(n - 2) * q[n - 2] +
                       19 * weight(n - 1) * q[n - 1] + 9 * weight(n) * q[n]);
  }
  return h / 24.0 * (-weight(i - 1) * q[i - 1] + 13 * weight(i) * q[i] +
                     13 * weight(i + 1) * q[i + 1] - weight(i + 2) * q[i + 2]);
}

}  // namespace

RadialField resolvent_apply(const RadialField& f, double s, HomogeneousMethod method) {
  if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("resolvent needs s > 0");
  const auto& grid = f.grid();
  const Dimension dim = f.dimension();
  const std::size_t n = grid.intervals();
  const std::size_t N = grid.size();
  const double k = std::sqrt(s);
  const double d = dim.value();
  const double m = d - 2.0;
  const double R = grid.r_max();

  double fmax = 0.0;
  for (double v : f.values()) fmax = std::max(fmax, std::abs(v));
  if (fmax == 0.0) return RadialField(grid, std::vector<double>(N, 0.0), dim, TailModel{});
  if (k * R < 10.0 && std::abs(f[n]) > 1e-12 * fmax) {
    char buf[140];
    std::snprintf(buf, sizeof buf,
                  "grid ends at %.3g decay lengths of the resolvent; need at least 10", k * R);
    throw GridError(buf);
  }

  if (method == HomogeneousMethod::closed_form && dim.value() != 3) {
    throw std::invalid_argument("closed-form homogeneous solutions exist only for d = 3");
  }
  const bool closed = method == HomogeneousMethod::closed_form ||
                      (method == HomogeneousMethod::automatic && dim.value() == 3);
  const HomogeneousPair hp = closed ? closed_form_pair(grid, k) : integrated_pair(grid, dim, k);

  // F(r) = e^{-k r} int_0^r phi1 f t^{d-1} dt, G(r) = e^{k r} int_r^inf phi2 f t^{d-1} dt.
  std::vector<double> qF(N), qG(N);
  for (std::size_t i = 0; i < N; ++i) {
    const double r = grid.r(i);
    const double j = grid.jacobian(i);
    qF[i] = hp.a[i] * f[i] * std::pow(r, d - 1.0) * j;
    qG[i] = r * hp.b[i] * f[i] * j;  // r^{d-1-m} = r
  }
  const double h = grid.dxi();
  std::vector<double> F(N, 0.0), G(N, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double r1 = grid.r(i + 1);
    F[i + 1] = std::exp(-k * (r1 - grid.r(i))) * F[i] +
               interval_integral(qF, i, [&](std::size_t jj) { return std::exp(-k * (r1 - grid.r(jj))); },
                                 h);
  }
  // Continuation past r_max: t b f e^{-k(t-R)} ~ g(R) (t/R)^e e^{-(k + rate)(t - R)}.
  if (f.tail()) {
    const auto& tl = *f.tail();
    const double e = 1.0 + 0.5 * (d - 3.0) - tl.power;
    const double rate = k + tl.rate - e / R;
    const double gR = R * hp.b[n] * f[n];
    G[n] = rate > 0.0 ? gR / rate : gR / (k + tl.rate);
  }
  for (std::size_t i = n; i-- > 0;) {
    const double r0 = grid.r(i);
    G[i] = std::exp(-k * (grid.r(i + 1) - r0)) * G[i + 1] +
           interval_integral(qG, i, [&](std::size_t jj) { return std::exp(-k * (grid.r(jj) - r0)); },
                             h);
  }

  std::vector<double> u(N);
  u[0] = hp.a[0] * G[0] / hp.wronskian;
  for (std::size_t i = 1; i < N; ++i) {
    u[i] = (std::pow(grid.r(i), -m) * hp.b[i] * F[i] + hp.a[i] * G[i]) / hp.wronskian;
  }

  std::optional<TailModel> tail;
  if (f.tail() && f.tail()->rate == 0.0 && f.tail()->amplitude != 0.0) {
    tail = TailModel{f.tail()->amplitude / s, f.tail()->power, 0.0};
  } else {
    const double p = 0.5 * (d - 1.0);
    tail = TailModel{u[n] * std::pow(R, p) * std::exp(k * R), p, k};
  }
  return RadialField(grid, std::move(u), dim, tail);
}

namespace {

// int_R^inf of u V Lambda W over |x| > R, given the integrand value at R:
// V Lambda W ~ r^{-(d+2)}, so a power tail r^{-p} on u leaves r^{-(p+3)} per dr.
double pairing_tail(const RadialField& u, double value_at_R) {
  if (!u.tail() || u.tail()->rate != 0.0) return 0.0;
  const Dimension d = u.dimension();
  const double R = u.grid().r_max();
  return d.sphere_area() * std::pow(R, d.value() - 1) *
         algebraic_tail(value_at_R, R, u.tail()->power + 3.0);
}

}  // namespace

RadialGrid probe_grid(double s, std::size_t n) {
  return RadialGrid::stretched(40.0 / std::sqrt(s), n, 1.0);
}

ResolventProbe probe_resolvent(Dimension d, double s, std::size_t n) {
  const auto grid = probe_grid(s, n);
  const auto u = resolvent_apply(make_W_field(grid, d), s);
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.r(i);
    integrand[i] = u[i] * eval_V(r, d) * eval_LambdaW(r, d);
  }
  ResolventProbe p;
  p.s = s;
  p.origin_value = u[0];
  p.pairing_VLambdaW = integrate_radial(integrand, grid, d) + pairing_tail(u, integrand.back());
  const double delta = scale_delta(s, d);
  p.scaled_origin = delta * p.origin_value;
  p.scaled_pairing = delta * p.pairing_VLambdaW;
  return p;
}

std::vector<double> default_s_list(Dimension d) {
  if (d.value() == 3) return {1e-3, 1e-4, 1e-5};
  return {1e-3, 3e-4, 1e-4};
}

std::vector<ResolventProbe> probe_sweep(Dimension d, std::span<const double> s_list,
                                        std::size_t n) {
  std::vector<ResolventProbe> out;
  out.reserve(s_list.size());
  for (double s : s_list) out.push_back(probe_resolvent(d, s, n));
  return out;
}

namespace {

AsymptoticFit fit_values(Dimension d, std::vector<double> s, std::vector<double> v) {
  if (s.size() < 2) throw std::invalid_argument("extrapolation needs at least two s values");
  std::vector<std::size_t> order(s.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
  AsymptoticFit fit;
  for (auto i : order) {
    fit.s.push_back(s[i]);
    fit.scaled.push_back(v[i]);
  }
  bool up = true, down = true;
  for (std::size_t i = 1; i < fit.scaled.size(); ++i) {
    up = up && fit.scaled[i] > fit.scaled[i - 1];
    down = down && fit.scaled[i] < fit.scaled[i - 1];
  }
  fit.monotone = up || down;

  const std::size_t count = std::min<std::size_t>(3, fit.s.size());
  const std::size_t first = fit.s.size() - count;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = first; i < fit.s.size(); ++i) {
    const double x = scale_delta(fit.s[i], d);
    sx += x;
    sy += fit.scaled[i];
    sxx += x * x;
    sxy += x * fit.scaled[i];
  }
  const double c = static_cast<double>(count);
  fit.slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
  fit.limit = (sy - fit.slope * sx) / c;
  return fit;
}

}  // namespace

AsymptoticFit fit_origin(Dimension d, std::span<const ResolventProbe> probes) {
  std::vector<double> s, v;
  for (const auto& p : probes) {
    s.push_back(p.s);
    v.push_back(p.scaled_origin);
  }
  return fit_values(d, std::move(s), std::move(v));
}

AsymptoticFit fit_pairing(Dimension d, std::span<const ResolventProbe> probes) {
  std::vector<double> s, v;
  for (const auto& p : probes) {
    s.push_back(p.s);
    v.push_back(p.scaled_pairing);
  }
  return fit_values(d, std::move(s), std::move(v));
}

AsymptoticFit origin_asymptotic_A0(Dimension d, std::span<const double> s_list) {
  return fit_origin(d, probe_sweep(d, s_list));
}

AsymptoticFit pairing_asymptotic_A1(Dimension d, std::span<const double> s_list) {
  return fit_pairing(d, probe_sweep(d, s_list));
}

double smallball_integral(Dimension d, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("small-ball integral needs s > 0");
  // |S^{d-1}| int_0^1 rho^{d-3} / (rho^2 + s) d rho
  const int p = d.value() - 3;
  double prev = 0.0, value = 0.0;
  for (std::size_t n : {std::size_t{1} << 12, std::size_t{1} << 13}) {
    const auto grid = RadialGrid::stretched(1.0, n, std::sqrt(s));
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double rho = grid.r(i);
      g[i] = std::pow(rho, p) / (rho * rho + s);
    }
    prev = value;
    value = d.sphere_area() * integrate_dr(g, grid);
  }
  if (std::abs(value - prev) > 1e-9 * std::abs(value)) {
    throw QuadratureError("small-ball quadrature did not converge");
  }
  return value;
}

double orthogonality_functional(const RadialField& zeta, double s) {
  const auto& grid = zeta.grid();
  const Dimension d = zeta.dimension();
  std::vector<double> vz(grid.size());
  for (std::size_t i = 0; i < vz.size(); ++i) vz[i] = eval_V(grid.r(i), d) * zeta[i];
  std::optional<TailModel> tail;
  if (zeta.tail() && zeta.tail()->rate == 0.0) {
    const double amp = -d.critical_power() * std::pow(w_tail_amplitude(d), 4.0 / (d.value() - 2));
    tail = TailModel{amp * zeta.tail()->amplitude, zeta.tail()->power + 4.0, 0.0};
  }
  const auto rvz = resolvent_apply(RadialField(grid, std::move(vz), d, tail), s);
  std::vector<double> integrand(grid.size());
  for (std::size_t i = 0; i < integrand.size(); ++i) {
    const double r = grid.r(i);
    integrand[i] = (zeta[i] + rvz[i]) * eval_V(r, d) * eval_LambdaW(r, d);
  }
  return integrate_radial(integrand, grid, d) + pairing_tail(zeta, integrand.back());
}

}  // namespace critsol
