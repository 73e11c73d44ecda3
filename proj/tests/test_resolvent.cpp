#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "critsol/errors.hpp"
#include "critsol/profiles.hpp"
#include "critsol/quadrature.hpp"
#include "critsol/resolvent.hpp"
#include "doctest.h"

using namespace critsol;
using doctest::Approx;

namespace {

const double kPi = std::numbers::pi;
const Dimension D3 = Dimension::of(3);
const Dimension D4 = Dimension::of(4);

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;

template <class F>
double finite(F f, double a, double b) {
  return GK::integrate(f, a, b, 15, 1e-10);
}

// Kernels below carry e^{-k(t - r)}; 50 decay lengths past r is exact to rounding.
double cutoff(double k, double r) { return r + 50.0 / k; }

// Green-kernel form of the d = 3 resolvent:
// u(r) = (1/(2kr)) int f(t) t (e^{-k|r-t|} - e^{-k(r+t)}) dt.
template <class F>
double green3(F f, double s, double r) {
  const double k = std::sqrt(s);
  if (r == 0.0) {
    return finite([&](double t) { return f(t) * t * std::exp(-k * t); }, 0.0, cutoff(k, 0.0));
  }
  auto kern = [&](double t) {
    return f(t) * t * (std::exp(-k * std::abs(r - t)) - std::exp(-k * (r + t)));
  };
  return (finite(kern, 0.0, r) + finite(kern, r, cutoff(k, r))) / (2.0 * k * r);
}

// d = 4 with phi1 = I_1(kr)/r, phi2 = K_1(kr)/r, whose Wronskian constant is 1.
template <class F>
double green4(F f, double s, double r) {
  const double k = std::sqrt(s);
  auto inner = [&](double t) { return t == 0.0 ? 0.0 : std::cyl_bessel_i(1.0, k * t) * t * t * f(t); };
  auto outer = [&](double t) { return std::cyl_bessel_k(1.0, k * t) * t * t * f(t); };
  return std::cyl_bessel_k(1.0, k * r) / r * finite(inner, 0.0, r) +
         std::cyl_bessel_i(1.0, k * r) / r * finite(outer, r, cutoff(k, r));
}

double bump(double r, double radius) {
  const double x = r / radius;
  return x < 1.0 ? std::exp(-1.0 / (1.0 - x * x)) : 0.0;
}

// Frozen outputs of the Green-kernel quadratures above.
constexpr double kOriginW3_s1e4 = 170.3267522776372;
constexpr double kOrthogonalityW3_s1e2 = 6.082452349272493;

}  // namespace

TEST_CASE("d = 3 variation of parameters matches the Green kernel") {
  const double s = 1e-2;
  const auto grid = probe_grid(s);
  auto gauss = [](double r) { return std::exp(-r * r); };
  const auto u = resolvent_apply(RadialField::sample(grid, D3, gauss), s);
  const auto uw = resolvent_apply(make_W_field(grid, D3), s);
  for (double r : {0.0, 0.37, 1.5, 6.0, 40.0}) {
    CHECK(u.eval(r) == Approx(green3(gauss, s, r)).epsilon(1e-8));
    CHECK(uw.eval(r) == Approx(green3([](double t) { return eval_W(t, D3); }, s, r)).epsilon(1e-8));
  }
}

TEST_CASE("d = 4 integrated solutions match the Bessel Green function") {
  const double s = 1e-2;
  const auto grid = probe_grid(s);
  auto gauss = [](double r) { return std::exp(-r * r); };
  const auto u = resolvent_apply(RadialField::sample(grid, D4, gauss), s);
  const auto uw = resolvent_apply(make_W_field(grid, D4), s);
  for (double r : {0.37, 1.5, 6.0, 40.0}) {
    CHECK(u.eval(r) == Approx(green4(gauss, s, r)).epsilon(1e-8));
    CHECK(uw.eval(r) == Approx(green4([](double t) { return eval_W(t, D4); }, s, r)).epsilon(1e-7));
  }
}

TEST_CASE("integrated homogeneous solutions reproduce the d = 3 closed form") {
  const double s = 1e-3;
  const auto grid = probe_grid(s);
  const auto W = make_W_field(grid, D3);
  const auto a = resolvent_apply(W, s, HomogeneousMethod::closed_form);
  const auto b = resolvent_apply(W, s, HomogeneousMethod::integrated);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(b[i] == Approx(a[i]).epsilon(1e-10));
  CHECK_THROWS_AS(resolvent_apply(make_W_field(grid, D4), s, HomogeneousMethod::closed_form),
                  std::invalid_argument);
}

TEST_CASE("round trip through a finite-difference operator") {
  const double s = 1.0;
  const auto grid = RadialGrid::uniform(12.0, 512);
  for (auto d : {D3, D4}) {
    const auto u = RadialField::sample(grid, d, [](double r) { return bump(r, 3.0); });
    const auto lap = radial_laplacian(u.values(), grid, d);
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = -lap[i] + s * u[i];
    const auto back = resolvent_apply(RadialField(grid, f, d), s);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      err = std::max(err, std::abs(back[i] - u[i]));
      scale = std::max(scale, std::abs(u[i]));
    }
    CHECK(err / scale < 1e-4);
  }
}

TEST_CASE("trivial and invalid inputs") {
  const auto grid = RadialGrid::uniform(10.0, 64);
  const auto zero = resolvent_apply(RadialField::zero(grid, D3), 0.5);
  for (double v : zero.values()) CHECK(v == 0.0);
  const auto W = make_W_field(grid, D3);
  CHECK_THROWS_AS(resolvent_apply(W, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(resolvent_apply(W, -1.0), std::invalid_argument);
  // r_max = 10 is one decay length at s = 0.01 and W is not small there.
  CHECK_THROWS_AS(resolvent_apply(W, 0.01), GridError);
}

TEST_CASE("symmetry, positivity and the resolvent identity") {
  const auto grid = RadialGrid::stretched(60.0, 4096, 1.0);
  for (auto d : {D3, D4}) {
    const auto f = RadialField::sample(grid, d, [](double r) { return bump(r, 4.0); });
    const auto g = RadialField::sample(grid, d, [](double r) { return bump(r - 2.0, 3.0) * r; });
    const double s1 = 0.5, s2 = 1.7;
    const auto Rf = resolvent_apply(f, s1);
    const auto Rg = resolvent_apply(g, s1);
    std::vector<double> a(grid.size()), b(grid.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = Rf[i] * g[i];
      b[i] = f[i] * Rg[i];
    }
    CHECK(integrate_radial(a, grid, d) == Approx(integrate_radial(b, grid, d)).epsilon(1e-9));

    for (double v : Rf.values()) CHECK(v >= 0.0);

    const auto R2f = resolvent_apply(f, s2);
    const auto R1R2f = resolvent_apply(R2f, s1);
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      err = std::max(err, std::abs(Rf[i] - R2f[i] - (s2 - s1) * R1R2f[i]));
      scale = std::max(scale, std::abs(Rf[i]));
    }
    CHECK(err / scale < 1e-9);
  }
}

TEST_CASE("origin constant") {
  SUBCASE("oracle value") {
    const double oracle = green3([](double t) { return eval_W(t, D3); }, 1e-4, 0.0);
    CHECK(oracle == Approx(kOriginW3_s1e4).epsilon(1e-9));
    CHECK(probe_resolvent(D3, 1e-4).origin_value == Approx(oracle).epsilon(1e-8));
  }
  SUBCASE("d = 3 at s = 1e-4 and 1e-5") {
    CHECK(probe_resolvent(D3, 1e-4).scaled_origin == Approx(std::sqrt(3.0)).epsilon(0.05));
    CHECK(probe_resolvent(D3, 1e-5).scaled_origin == Approx(std::sqrt(3.0)).epsilon(0.02));
  }
  SUBCASE("d = 3 sequence is monotone and extrapolates to sqrt 3") {
    const double s[] = {1e-2, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5};
    const auto fit = origin_asymptotic_A0(D3, s);
    CHECK(fit.monotone);
    CHECK(fit.limit == Approx(std::sqrt(3.0)).epsilon(0.02));
  }
  SUBCASE("d = 4 extrapolates to 2") {
    const auto list = default_s_list(D4);
    const auto fit = origin_asymptotic_A0(D4, list);
    CHECK(fit.monotone);
    CHECK(fit.limit == Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("pairing constant") {
  const auto p3 = probe_sweep(D3, default_s_list(D3));
  const auto a0_3 = fit_origin(D3, p3);
  const auto a1_3 = fit_pairing(D3, p3);
  CHECK(p3.back().scaled_pairing == Approx(6 * kPi).epsilon(0.05));
  CHECK(a1_3.limit == Approx(6 * kPi).epsilon(0.05));

  const auto p4 = probe_sweep(D4, default_s_list(D4));
  const auto a0_4 = fit_origin(D4, p4);
  const auto a1_4 = fit_pairing(D4, p4);
  CHECK(a1_4.limit == Approx(64 * kPi * kPi).epsilon(0.10));

  // A1 = C_script0 A0 within the combined tolerances.
  CHECK(a1_3.limit == Approx(2 * std::sqrt(3.0) * kPi * a0_3.limit).epsilon(0.07));
  CHECK(a1_4.limit == Approx(32 * kPi * kPi * a0_4.limit).epsilon(0.15));
}

TEST_CASE("small-ball integral") {
  CHECK(smallball_integral(D3, 1.0) == Approx(kPi * kPi).epsilon(1e-6));
  for (double s : {1e-4, 0.3}) {
    CHECK(smallball_integral(D3, s) == Approx(4 * kPi * std::atan(1 / std::sqrt(s)) / std::sqrt(s)).epsilon(1e-8));
    CHECK(smallball_integral(D4, s) == Approx(kPi * kPi * std::log((1 + s) / s)).epsilon(1e-8));
  }
  CHECK(smallball_integral(D4, 1e-5) / std::log1p(1e5) == Approx(kPi * kPi).epsilon(0.02));
  CHECK(smallball_integral(D3, 1e-4) * 1e-2 == Approx(2 * kPi * kPi).epsilon(0.02));
  CHECK_THROWS_AS(smallball_integral(D3, 0.0), std::invalid_argument);
}

TEST_CASE("orthogonality functional") {
  const auto grid = probe_grid(1e-6);
  CHECK(orthogonality_functional(RadialField::zero(grid, D3), 1e-6) == 0.0);

  SUBCASE("Lambda W is nearly orthogonal as s -> 0") {
    const auto LW = make_LambdaW_field(grid, D3);
    std::vector<double> integrand(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      integrand[i] = LW[i] * eval_V(grid.r(i), D3) * LW[i];
    }
    const double self = integrate_radial(integrand, grid, D3);
    CHECK(std::abs(orthogonality_functional(LW, 1e-6)) < 0.05 * std::abs(self));
  }
  SUBCASE("W at s = 1e-2") {
    const double s = 1e-2;
    auto VW = [](double t) { return eval_V(t, D3) * eval_W(t, D3); };
    auto VLW = [](double t) { return eval_V(t, D3) * eval_LambdaW(t, D3); };
    // <W, V Lambda W> vanishes, leaving <R_s(VW), V Lambda W>.
    auto outer = [&](double r) { return 4 * kPi * r * r * green3(VW, s, r) * VLW(r); };
    const double oracle =
        finite(outer, 0.0, 10.0) + finite(outer, 10.0, 1e3) + finite(outer, 1e3, 1e5);
    CHECK(oracle == Approx(kOrthogonalityW3_s1e2).epsilon(1e-9));
    const double value = orthogonality_functional(make_W_field(probe_grid(s), D3), s);
    CHECK(value == Approx(kOrthogonalityW3_s1e2).epsilon(1e-8));
  }
}
