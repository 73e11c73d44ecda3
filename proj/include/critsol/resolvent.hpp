#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "critsol/dimension.hpp"
#include "critsol/grid.hpp"

namespace critsol {

enum class HomogeneousMethod {
  /// Closed form for d = 3, integrated otherwise.
  automatic,
  /// sinh(k r)/(k r) and e^{-k r}/r; d = 3 only.
  closed_form,
  /// RK4 outward from the origin series and inward from an asymptotic seed.
  integrated,
};

/// u = (-Delta + s)^{-1} f for radial f by variation of parameters.
///
/// With k = sqrt(s) the homogeneous solutions are written e^{k r} a(r) (regular
/// at the origin) and e^{-k r} r^{-(d-2)} b(r) (decaying), and the two
/// cumulative integrals carry the matching exponential factors, so nothing
/// overflows on long grids. A power-law tail model on f is continued past
/// r_max analytically. Throws std::invalid_argument for s <= 0, GridError when
/// f is not negligible at r_max and sqrt(s) r_max < 10, and IntegrationError
/// when the Wronskian drifts by more than 1e-6 across the grid.
RadialField resolvent_apply(const RadialField& f, double s,
                            HomogeneousMethod method = HomogeneousMethod::automatic);

struct ResolventProbe {
  double s = 0.0;
  /// ((-Delta + s)^{-1} W)(0)
  double origin_value = 0.0;
  /// <(-Delta + s)^{-1} W, V Lambda W>
  double pairing_VLambdaW = 0.0;
  double scaled_origin = 0.0;
  double scaled_pairing = 0.0;
};

/// Grid used for a probe at s: stretched, unit core, r_max = 40/sqrt(s).
RadialGrid probe_grid(double s, std::size_t n = 1u << 14);

ResolventProbe probe_resolvent(Dimension d, double s, std::size_t n = 1u << 14);

struct AsymptoticFit {
  std::vector<double> s;
  std::vector<double> scaled;
  /// A in the least-squares fit scaled = A + B delta(s) over the three smallest s.
  double limit = 0.0;
  double slope = 0.0;
  /// Values move in one direction as s decreases.
  bool monotone = false;
};

/// s values used by default: {1e-3, 1e-4, 1e-5} for d = 3 and
/// {1e-3, 3e-4, 1e-4} for d = 4.
std::vector<double> default_s_list(Dimension d);

std::vector<ResolventProbe> probe_sweep(Dimension d, std::span<const double> s_list,
                                        std::size_t n = 1u << 14);

/// Fit of delta(s) (R_s W)(0) and of delta(s) <R_s W, V Lambda W>.
AsymptoticFit fit_origin(Dimension d, std::span<const ResolventProbe> probes);
AsymptoticFit fit_pairing(Dimension d, std::span<const ResolventProbe> probes);

AsymptoticFit origin_asymptotic_A0(Dimension d, std::span<const double> s_list);
AsymptoticFit pairing_asymptotic_A1(Dimension d, std::span<const double> s_list);

/// int_{|xi| <= 1} dxi / ((|xi|^2 + s) |xi|^2) by radial quadrature in |xi|.
double smallball_integral(Dimension d, double s);

/// <zeta + (-Delta + s)^{-1}(V zeta), V Lambda W>.
double orthogonality_functional(const RadialField& zeta, double s);

}  // namespace critsol
