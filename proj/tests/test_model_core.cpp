#include <cmath>
#include <numbers>

#include "critsol/dimension.hpp"
#include "critsol/errors.hpp"
#include "critsol/grid.hpp"
#include "critsol/nonlinearity.hpp"
#include "critsol/profiles.hpp"
#include "critsol/quadrature.hpp"
#include "doctest.h"

using namespace critsol;
using doctest::Approx;

namespace {
const double kPi = std::numbers::pi;
const Dimension D3 = Dimension::of(3);
const Dimension D4 = Dimension::of(4);
}  // namespace

TEST_CASE("dimension rejects values outside {3, 4}") {
  CHECK_THROWS_AS(Dimension::of(2), std::invalid_argument);
  CHECK_THROWS_AS(Dimension::of(5), std::invalid_argument);
  CHECK(D3.two_star() == 6.0);
  CHECK(D4.critical_power() == 3.0);
  CHECK(D3.sphere_area() == Approx(4 * kPi));
  CHECK(D4.sphere_area() == Approx(2 * kPi * kPi));
}

TEST_CASE("bubble closed forms at known points") {
  CHECK(eval_W(0.0, D3) == 1.0);
  CHECK(eval_W(0.0, D4) == 1.0);
  CHECK(eval_W(std::sqrt(3.0), D3) == Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eval_W(std::sqrt(8.0), D4) == Approx(0.5).epsilon(1e-15));

  CHECK(eval_LambdaW(0.0, D3) == Approx(0.5));
  CHECK(eval_LambdaW(0.0, D4) == Approx(1.0));
  CHECK(std::abs(eval_LambdaW(lambda_w_root(D3), D3)) < 1e-15);
  CHECK(std::abs(eval_LambdaW(lambda_w_root(D4), D4)) < 1e-15);
  CHECK(lambda_w_root(D3) == Approx(std::sqrt(3.0)));
  CHECK(lambda_w_root(D4) == Approx(std::sqrt(8.0)));

  CHECK(eval_V(0.0, D3) == Approx(-5.0));
  CHECK(eval_V(0.0, D4) == Approx(-3.0));
  // W(sqrt 8) = 1/2 in d = 4, so V = -3 * (1/2)^2.
  CHECK(eval_V(std::sqrt(8.0), D4) == Approx(-0.75).epsilon(1e-15));
}

TEST_CASE("Lambda W agrees with its defining combination") {
  for (auto d : {D3, D4}) {
    for (double r : {0.0, 0.3, 1.0, 2.5, 7.0, 40.0}) {
      const double lhs = eval_LambdaW(r, d);
      const double rhs = 0.5 * (d.value() - 2) * eval_W(r, d) + r * eval_dW(r, d);
      CHECK(lhs == Approx(rhs).epsilon(1e-14));
    }
  }
}

TEST_CASE("bubble solves the critical equation") {
  for (auto d : {D3, D4}) {
    const auto grid = RadialGrid::stretched(50.0, 4096, 1.0);
    const auto W = make_W_field(grid, d);
    const auto lap = radial_laplacian(W.values(), grid, d);
    double worst = 0.0;
    for (std::size_t i = 0; i + 3 < grid.size(); ++i) {
      const double w = W[i];
      worst = std::max(worst, std::abs(-lap[i] - std::pow(w, d.critical_power())));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("decay of the bubble") {
  // sup_r W(r)(1+r)^{d-2} = (1 + d(d-2))^{(d-2)/2}, attained at r = d(d-2).
  for (auto d : {D3, D4}) {
    const int dd = d.value();
    double sup = 0.0;
    for (int k = 0; k <= 200000; ++k) {
      const double r = k * 1e-3;
      sup = std::max(sup, eval_W(r, d) * std::pow(1.0 + r, dd - 2));
    }
    CHECK(sup == Approx(std::pow(1.0 + dd * (dd - 2.0), (dd - 2) / 2.0)).epsilon(1e-9));
    CHECK(w_tail_amplitude(d) * std::pow(1e6, -(dd - 2)) ==
          Approx(eval_W(1e6, d)).epsilon(1e-9));
  }
}

TEST_CASE("scale functions") {
  CHECK(scale_delta(0.25, D3) == Approx(0.5));
  CHECK(scale_delta(1.0, D4) == Approx(1.0 / std::log(2.0)));
  CHECK_THROWS_AS(scale_delta(0.0, D3), std::invalid_argument);
  CHECK_THROWS_AS(scale_delta(-1.0, D4), std::invalid_argument);
  CHECK(scale_alpha(0.3, D3) == Approx(0.09));
  CHECK_THROWS_AS(scale_alpha(1.0, D4), std::invalid_argument);
  CHECK_THROWS_AS(scale_alpha(0.0, D4), std::invalid_argument);

  SUBCASE("alpha inverts beta") {
    for (auto d : {D3, D4}) {
      for (double s : {1e-12, 1e-8, 1e-4, 1e-2, 0.5, 3.0, 100.0}) {
        const double t = scale_beta(s, d);
        if (d.value() == 4 && t >= 1.0) continue;
        CHECK(scale_alpha(t, d) == Approx(s).epsilon(1e-10));
      }
    }
  }
  SUBCASE("beta is strictly increasing") {
    for (auto d : {D3, D4}) {
      double prev = 0.0;
      for (int k = -120; k <= 40; ++k) {
        const double b = scale_beta(std::pow(10.0, k / 10.0), d);
        CHECK(b > prev);
        prev = b;
      }
    }
  }
}

TEST_CASE("power integrals of the bubble") {
  // 4 pi int r^2 (1 + r^2/3)^{-3} dr = 4 pi * 3^{3/2} * pi/16
  CHECK(w_power_integral(6.0, D3) == Approx(4 * kPi * std::pow(3.0, 1.5) * kPi / 16).epsilon(1e-9));
  CHECK(w_power_integral(5.0, D3) == Approx(4 * std::sqrt(3.0) * kPi).epsilon(1e-9));
  // d = 4: int W^3 = 2 pi^2 int r^3 (1 + r^2/8)^{-3} dr = 2 pi^2 * 16 = 32 pi^2.
  CHECK(w_power_integral(3.0, D4) == Approx(32 * kPi * kPi).epsilon(1e-9));
  CHECK_THROWS_AS(w_power_integral(3.0, D3), std::invalid_argument);
}

TEST_CASE("pairing of W powers with Lambda W") {
  CHECK(pairing_Wpow_LambdaW(5.0, D3) == 0.0);
  CHECK(pairing_Wpow_LambdaW(3.0, D4) == 0.0);
  CHECK(pairing_Wpow_LambdaW(4.0, D3) == Approx(-0.1 * 4 * std::sqrt(3.0) * kPi).epsilon(1e-9));
  CHECK_THROWS_AS(pairing_Wpow_LambdaW(2.0, D3), std::invalid_argument);
  CHECK_THROWS_AS(pairing_Wpow_LambdaW(5.5, D3), std::invalid_argument);
  CHECK_THROWS_AS(pairing_Wpow_LambdaW(1.0, D4), std::invalid_argument);

  SUBCASE("closed form matches direct quadrature") {
    for (auto [r, d] : {std::pair{2.5, D3}, std::pair{3.0, D3}, std::pair{3.5, D3}, std::pair{4.0, D3},
                        std::pair{4.5, D3}, std::pair{1.5, D4}, std::pair{2.0, D4}, std::pair{2.5, D4}}) {
      const double direct = radial_profile_integral(
          [r = r, d = d](double x) { return std::pow(eval_W(x, d), r) * eval_LambdaW(x, d); }, d,
          r * (d.value() - 2) + (d.value() - 2) - (d.value() - 1));
      CHECK(pairing_Wpow_LambdaW(r, d) == Approx(direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("scale constants") {
  const auto c3 = derive_scale_constants(D3);
  CHECK(c3.A0 == Approx(std::sqrt(3.0)).epsilon(1e-9));
  CHECK(c3.C_script0 == Approx(2 * std::sqrt(3.0) * kPi).epsilon(1e-9));
  CHECK(c3.A1 == Approx(6 * kPi).epsilon(1e-9));
  CHECK(c3.frakC == Approx(2 * kPi * kPi).epsilon(1e-9));

  const auto c4 = derive_scale_constants(D4);
  CHECK(c4.A0 == Approx(2.0).epsilon(1e-9));
  CHECK(c4.C_script0 == Approx(32 * kPi * kPi).epsilon(1e-9));
  CHECK(c4.A1 == Approx(64 * kPi * kPi).epsilon(1e-9));
  CHECK(c4.frakC == Approx(kPi * kPi).epsilon(1e-9));
}

TEST_CASE("nonlinearity evaluation") {
  const auto g = NonlinearitySpec::from_terms({{0.5, 3.5}, {1.0, 4.0}});
  CHECK(g.p1() == 3.5);
  CHECK(g.p2() == 4.0);
  CHECK(g.C2() == 4.0);
  CHECK(g.g(2.0) == Approx(0.5 * std::pow(2.0, 3.5) + 16.0));
  CHECK(g.g(-2.0) == Approx(-g.g(2.0)));
  CHECK(g.G(2.0) == Approx(0.5 * std::pow(2.0, 4.5) / 4.5 + 32.0 / 5.0));
  for (double t : {0.1, 1.0, 3.0}) {
    const double h = 1e-6 * t;
    CHECK(g.dg(t) == Approx((g.g(t + h) - g.g(t - h)) / (2 * h)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(NonlinearitySpec::from_terms({}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::from_terms({{-1.0, 3.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::from_terms({{1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(NonlinearitySpec::from_terms({{1.0, 3.0}, {2.0, 3.0}}), std::invalid_argument);
}

TEST_CASE("admissibility") {
  const auto quartic = check_admissibility(NonlinearitySpec::power(4.0), D3);
  CHECK(quartic.pass);
  CHECK(quartic.violations.empty());
  CHECK(quartic.C1 == 4.0);
  CHECK(quartic.C2 == 4.0);
  CHECK(quartic.C3 == Approx(1.0 / 5 - 1.0 / 6));

  const auto cubic = check_admissibility(NonlinearitySpec::power(3.0), D3);
  CHECK_FALSE(cubic.pass);
  REQUIRE(cubic.violations.size() == 1);
  CHECK(cubic.violations[0].find("p2 >") != std::string::npos);

  const auto mixed = check_admissibility(NonlinearitySpec::from_terms({{1, 2}, {1, 4}}), D3);
  CHECK_FALSE(mixed.pass);
  CHECK(mixed.violations[0].find("p1 >") != std::string::npos);

  CHECK(check_admissibility(NonlinearitySpec::power(2.5), D4).pass);
  CHECK_FALSE(check_admissibility(NonlinearitySpec::power(3.0), D4).pass);
  CHECK_FALSE(check_admissibility(NonlinearitySpec::power(5.0), D3).pass);
}

TEST_CASE("grid maps") {
  const auto g = RadialGrid::stretched(100.0, 64, 0.5);
  CHECK(g.r(0) == 0.0);
  CHECK(g.r(64) == 100.0);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g.r(i) > g.r(i - 1));
  CHECK(g.xi_of_r(g.r(17)) * 64 == Approx(17.0));
  const auto s = g.scaled(2.0);
  CHECK(s.r(10) == Approx(2.0 * g.r(10)));
  CHECK(g.refined(2).r(20) == Approx(g.r(10)));
  CHECK_THROWS_AS(RadialGrid::uniform(1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(RadialGrid::uniform(-1.0, 16), std::invalid_argument);
}

TEST_CASE("field interpolation and tails") {
  const auto grid = RadialGrid::stretched(200.0, 2048, 1.0);
  const auto W = make_W_field(grid, D3);
  for (double r : {0.0, 0.013, 0.77, 3.1, 55.5, 199.0}) {
    CHECK(W.eval(r) == Approx(eval_W(r, D3)).epsilon(1e-8));
  }
  CHECK(W.eval(1e4) == Approx(eval_W(1e4, D3)).epsilon(1e-7));
  const RadialField bare(grid, std::vector<double>(grid.size(), 1.0), D3);
  CHECK_THROWS_AS(bare.eval(300.0), GridError);
  CHECK_THROWS_AS(RadialField(grid, std::vector<double>(3, 0.0), D3), std::invalid_argument);
  std::vector<double> bad(grid.size(), 0.0);
  bad[5] = std::nan("");
  CHECK_THROWS_AS(RadialField(grid, bad, D3), std::invalid_argument);
}

TEST_CASE("quadrature rules") {
  const auto grid = RadialGrid::uniform(1.0, 7);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(grid.r(i), 3);
  CHECK(integrate_dr(f, grid) == Approx(0.25).epsilon(1e-14));
  const auto sg = RadialGrid::stretched(30.0, 1024, 1.0);
  std::vector<double> e(sg.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::exp(-sg.r(i) * sg.r(i));
  // int_{R^3} e^{-|x|^2} dx = pi^{3/2}
  CHECK(integrate_radial(e, sg, D3) == Approx(std::pow(kPi, 1.5)).epsilon(1e-10));
  const auto du = radial_derivative(e, sg);
  for (std::size_t i : {0u, 100u, 500u}) {
    const double r = sg.r(i);
    CHECK(std::abs(du[i] + 2 * r * std::exp(-r * r)) < 1e-8);
  }
}
