#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "critsol/dimension.hpp"
#include "critsol/grid.hpp"
#include "critsol/nonlinearity.hpp"

namespace critsol {

enum class ShotKind { crossing, rebound, decay };

const char* to_string(ShotKind kind);

struct ShotClassification {
  ShotKind kind = ShotKind::decay;
  std::optional<double> event_radius;
};

struct ShotResult {
  /// Nodes past `last_node` repeat the value at `last_node`.
  RadialField trajectory;
  std::vector<double> slope;
  ShotClassification classification;
  std::size_t last_node = 0;
};

/// Integrates u'' + (d-1)/r u' = omega u - u^{2*-1} - g(u), u(0) = a, u'(0) = 0
/// with classical RK4, one step per grid interval in the grid coordinate. The
/// first node comes from the Taylor series at the origin. Stops at the first
/// crossing (u < 0 or overflow) or rebound (u' > 0); a trajectory that reaches
/// r_max without either is a decay only if it ends below 1e-8 a in value and
/// 1e-8 a sqrt(omega) in slope, and raises IntegrationError otherwise.
ShotResult integrate_shot(const NonlinearitySpec& spec, Dimension d, double omega, double a,
                          const RadialGrid& grid);

struct GroundStateOptions {
  /// Intervals of the final grid.
  std::size_t n = 1u << 14;
  /// Intervals of the grids used while searching for a bracket.
  std::size_t n_search = 1u << 12;
  /// r_max = decay_lengths / sqrt(omega).
  double decay_lengths = 40.0;
  /// Stop bisecting once hi - lo < tol * lo.
  double tol = 1e-14;
  /// Maximum number of height doublings while looking for a crossing.
  int max_doublings = 60;
  double residual_tol = 1e-5;
  bool check_residuals = true;
  /// Overrides the final grid (n, decay_lengths ignored) when set.
  std::optional<RadialGrid> grid;
};

struct GroundStateDiagnostics {
  double nehari_residual = 0.0;
  double pohozaev_residual = 0.0;
  double mass_identity_residual = 0.0;
  bool monotone = false;
  int bisection_steps = 0;
  /// Last node taken from the shooting trajectories; the Bessel tail starts here.
  std::size_t matched_node = 0;
};

struct GroundState {
  double omega;
  Dimension dim;
  NonlinearitySpec spec;
  RadialField field;
  /// dPhi/dr at the grid nodes.
  std::vector<double> slope;
  double M_omega;
  GroundStateDiagnostics diagnostics;
};

/// Bisection on the center height between a rebound and a crossing. Throws
/// NoBracketError when no crossing appears within `max_doublings` doublings
/// and ResidualError when a residual exceeds `residual_tol`.
GroundState find_ground_state(const NonlinearitySpec& spec, Dimension d, double omega,
                              const GroundStateOptions& options = {});

/// Root of omega = a^{2*-2} + g(a)/a: the constant solution height. Shots
/// below it rebound at once.
double equilibrium_height(const NonlinearitySpec& spec, Dimension d, double omega);

/// M^{-1} Phi(M^{-2/(d-2)} r), so the profile is 1 at the origin.
RadialField rescaled_profile(const GroundState& gs);

/// s(omega) = M^{-4/(d-2)} omega, the frequency seen by the rescaled profile.
double rescaled_frequency(const GroundState& gs);

struct DecayCheck {
  double constant = 0.0;
  bool pass = false;
};

/// sup_r u(r) (1+r)^{d-2}, over the grid and over the tail model out to
/// 10 r_max; passes when finite and unchanged by the extension.
DecayCheck decay_check(const RadialField& u);
/// decay_check of the rescaled profile.
DecayCheck decay_check(const GroundState& gs);

}  // namespace critsol
