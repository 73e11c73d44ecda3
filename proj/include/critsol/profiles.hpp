#pragma once

#include <functional>
#include <string>
#include <vector>

#include "critsol/dimension.hpp"
#include "critsol/grid.hpp"
#include "critsol/nonlinearity.hpp"

namespace critsol {

// Closed-form profiles of the critical problem.

/// Aubin-Talenti function W(r) = (1 + r^2/(d(d-2)))^{-(d-2)/2}.
double eval_W(double r, Dimension d);
/// dW/dr.
double eval_dW(double r, Dimension d);
/// Scaling generator Lambda W = ((d-2)/2) W + r W'.
double eval_LambdaW(double r, Dimension d);
/// Linearized potential V = -((d+2)/(d-2)) W^{4/(d-2)}.
double eval_V(double r, Dimension d);

/// Root of Lambda W, r = sqrt(d(d-2)).
double lambda_w_root(Dimension d);

/// Leading coefficient of W(r) ~ c r^{-(d-2)} as r -> infinity.
double w_tail_amplitude(Dimension d);

/// Sampled W with its algebraic tail model attached.
RadialField make_W_field(const RadialGrid& grid, Dimension d);
RadialField make_LambdaW_field(const RadialGrid& grid, Dimension d);
RadialField make_V_field(const RadialGrid& grid, Dimension d);

// Scale functions.

/// delta(s) = s^{1/2} (d = 3), 1/log(1 + 1/s) (d = 4). Rejects s <= 0.
double scale_delta(double s, Dimension d);
/// beta(s) = s / delta(s), strictly increasing.
double scale_beta(double s, Dimension d);
/// Inverse of beta. For d = 4 the domain is (0, 1).
double scale_alpha(double t, Dimension d);

// Pairings and constants.

/// int_{R^d} W^p dx for p (d-2) > d, by quadrature with an algebraic tail.
double w_power_integral(double p, Dimension d);

/// <W^r, Lambda W> through the closed-form factor
/// -{4 - (d-2)(r-1)} / (2(r+1)) times ||W||_{r+1}^{r+1}.
/// Requires max{1, 2/(d-2)} < r <= (d+2)/(d-2).
double pairing_Wpow_LambdaW(double r_exp, Dimension d);

struct ScaleConstants {
  double A0;
  double C_script0;
  double A1;
  double frakC;
};

/// A0, C_script0 = int V Lambda W dx, A1 = C_script0 * A0 and the small-ball
/// constant, each from quadrature of its defining integral. Throws
/// QuadratureError if two grid levels disagree beyond 1e-9 relative.
ScaleConstants derive_scale_constants(Dimension d);

/// |S^{d-1}| int_0^R f(r) r^{d-1} dr + algebraic tail, where the integrand
/// f(r) r^{d-1} decays like r^{-decay}. Evaluated on a long stretched grid at
/// two resolutions; throws QuadratureError when they disagree beyond `rtol`.
double radial_profile_integral(const std::function<double(double)>& f, Dimension d, double decay,
                               double rtol = 1e-9);

// Admissibility of a nonlinearity.

struct AdmissibilityReport {
  bool pass = true;
  std::vector<std::string> violations;
  double p1 = 0.0;
  double p2 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
};

AdmissibilityReport check_admissibility(const NonlinearitySpec& spec, Dimension d);

}  // namespace critsol
