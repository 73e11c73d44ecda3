#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "critsol/ground_state.hpp"

namespace critsol {

/// Symmetric tridiagonal discretization of
///   -gamma'' + [(d-1)(d-3)/(4 r^2) + k(d+k-2)/r^2 + potential(r)] gamma
/// on the interior nodes r_1..r_{n-1} with Dirichlet ends.
///
/// The nonuniform three-point stencil is symmetrized by the nodal weights
/// w_i = (r_{i+1} - r_{i-1})/2: the stored matrix acts on y = sqrt(w) gamma, so
/// y^T y is the discrete L^2 norm of gamma.
struct SectorOperator {
  int k = 0;
  Dimension dim = Dimension::of(3);
  RadialGrid grid;
  std::vector<double> diag;
  std::vector<double> offdiag;
  std::vector<double> weights;
  double omega = 0.0;
  /// Eigenvalues of the physical operator are eigen_scale times those of this
  /// matrix (M^{4/(d-2)} in the rescaled frame, 1 otherwise).
  double eigen_scale = 1.0;
  /// Bottom of the continuum in the working frame.
  double continuum = 0.0;

  std::size_t size() const { return diag.size(); }
};

/// Build a sector operator from a potential sampled at every grid node
/// (entries 0 and n are ignored).
SectorOperator assemble_schrodinger(const RadialGrid& grid, Dimension d, int k,
                                    std::span<const double> potential, double continuum,
                                    double eigen_scale = 1.0);

/// Sector k of the linearization around gs, assembled in the rescaled frame of
/// T_M[Phi] with eigen_scale = M^{4/(d-2)}. `grid` is a physical-frame grid; by
/// default the ground state's own. Throws GridError if it reaches beyond the
/// ground state's grid or k < 0.
SectorOperator assemble_sector(const GroundState& gs, int k);
SectorOperator assemble_sector(const GroundState& gs, int k, const RadialGrid& grid);

/// Number of eigenvalues strictly below x (Sturm sequence of LDL^T pivots).
std::size_t sturm_count(const SectorOperator& op, double x);

struct NearZeroMode {
  double value = 0.0;
  /// gamma at interior nodes, normalized so that sum w gamma^2 = 1.
  std::vector<double> eigenvector;
  /// ||T y - value y|| for the normalized y.
  double residual = 0.0;
};

struct SectorSpectrum {
  int k = 0;
  /// Working-frame eigenvalues, ascending.
  std::vector<double> lowest_eigenvalues;
  std::size_t negative_count = 0;
  std::size_t count_below_continuum = 0;
  double eigen_scale = 1.0;
  /// Smallest-magnitude eigenvalue among those returned, if below the threshold.
  std::optional<NearZeroMode> near_zero;
};

/// The m smallest eigenvalues by LAPACK bisection, the negative count from the
/// Sturm sequence, and the eigenvector of the smallest-magnitude eigenvalue
/// by inverse iteration when its magnitude is below `near_zero_threshold`.
/// Throws EigenError if inverse iteration does not converge.
SectorSpectrum lowest_eigs(const SectorOperator& op, std::size_t m,
                           double near_zero_threshold = 1e300);

/// Eigenvectors (as y = sqrt(w) gamma, unit Euclidean norm) for the m lowest
/// eigenvalues.
std::vector<std::vector<double>> lowest_eigenvectors(const SectorOperator& op, std::size_t m);

/// y^T T y for the stored matrix.
double quadratic_form(const SectorOperator& op, std::span<const double> y);
std::vector<double> apply_operator(const SectorOperator& op, std::span<const double> y);

enum class Status { pass, fail, inconclusive };
const char* to_string(Status s);

struct CertificateVerdict {
  std::string name;
  Status status = Status::fail;
  /// The number the verdict was decided on and the bound it was held to.
  double value = 0.0;
  std::string bound;
  std::string detail;
};

struct SpectralOptions {
  int k_max = 2;
  /// Number of grid levels h, h/2, ...
  int ladder_depth = 2;
  std::size_t eigen_count = 6;
  int random_vectors = 64;
  std::uint64_t seed = 0;
  /// Lower bound in B(u,u) >= -form_tolerance ||u||^2.
  double form_tolerance = 1e-6;
  double alignment_min = 0.999;
};

struct LadderLevel {
  std::size_t intervals = 0;
  /// Spacing relative to the first level.
  double relative_h = 1.0;
  double threshold = 0.0;
  std::vector<SectorSpectrum> sectors;
  /// |<kernel eigenvector, r^{(d-1)/2} Phi'>| after normalization.
  double kernel_alignment = 0.0;
  /// min over sampled u of B(u,u)/||u||^2 under the constraint.
  double min_constrained_form = 0.0;
  /// Discrete <L Phi, Phi>; negative means the constrained form is nonnegative.
  double phi_form = 0.0;
};

struct SpectralCertificate {
  double omega = 0.0;
  int dim = 3;
  double eigen_scale = 1.0;
  std::vector<LadderLevel> levels;
  /// k = 1 near-zero magnitude ratios between consecutive levels.
  std::vector<double> kernel_ratios;
  std::vector<CertificateVerdict> verdicts;
  Status overall() const;
};

/// Verdicts (a)-(d) over a ladder that starts at the ground state's grid and
/// halves the spacing ladder_depth - 1 times, re-solving the ground state on
/// each refined grid.
SpectralCertificate spectral_certificate(const GroundState& gs, const SpectralOptions& opts = {});

}  // namespace critsol
