#pragma once

#include <map>
#include <span>

#include "critsol/grid.hpp"
#include "critsol/nonlinearity.hpp"

namespace critsol {

struct GroundState;

struct Norms {
  double L2_sq = 0.0;
  double grad_L2_sq = 0.0;
  /// r -> int |u|^r dx
  std::map<double, double> Lr;
  /// Set when a tail integral diverges and the value stops at the last node.
  bool truncated = false;
};

/// Radial quadrature of ||u||_2^2, ||grad u||_2^2 and int |u|^r for each
/// requested r. The tail model, when present, adds the part beyond r_max.
/// Gradient: fourth-order differences, zero at the origin.
Norms norms(const RadialField& u, std::span<const double> powers = {});

struct IdentityReport {
  double action_value = 0.0;
  double nehari_value = 0.0;
  double pohozaev_value = 0.0;
  /// |N| over the sum of the magnitudes of its four terms.
  double nehari_residual = 0.0;
  /// |P| over the sum of the magnitudes of its four terms.
  double pohozaev_residual = 0.0;
  /// |omega ||u||^2 - d int (G(u) - g(u)u/2*)| / max(omega ||u||^2, floor).
  double mass_identity_residual = 0.0;
  /// (1/d) ||grad u||^2, equal to S - P for every u.
  double gradient_term = 0.0;
  bool truncated = false;
};

IdentityReport evaluate_identities(const RadialField& u, const NonlinearitySpec& spec,
                                   double omega);
IdentityReport evaluate_identities(const GroundState& gs);

}  // namespace critsol
