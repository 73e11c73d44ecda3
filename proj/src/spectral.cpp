#include "critsol/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "critsol/errors.hpp"

namespace critsol {

SectorOperator assemble_schrodinger(const RadialGrid& grid, Dimension d, int k,
                                    std::span<const double> potential, double continuum,
                                    double eigen_scale) {
  if (k < 0) throw GridError("sector index must be >= 0");
  if (potential.size() != grid.size()) throw GridError("potential does not match the grid");
  const std::size_t n = grid.intervals();
  if (n < 3) throw GridError("sector operator needs at least 3 intervals");
  const double dd = d.value();
  const double angular = (dd - 1) * (dd - 3) / 4 + k * (dd + k - 2);

  SectorOperator op{.k = k, .dim = d, .grid = grid, .diag = {}, .offdiag = {}, .weights = {}};
  op.continuum = continuum;
  op.eigen_scale = eigen_scale;
  op.diag.resize(n - 1);
  op.offdiag.resize(n - 2);
  op.weights.resize(n - 1);
  for (std::size_t i = 1; i < n; ++i) {
    const double hm = grid.r(i) - grid.r(i - 1);
    const double hp = grid.r(i + 1) - grid.r(i);
    op.weights[i - 1] = 0.5 * (hm + hp);
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double r = grid.r(i);
    const double hm = r - grid.r(i - 1);
    const double hp = grid.r(i + 1) - r;
    const double w = op.weights[i - 1];
    double pot = potential[i];
    if (angular != 0.0) pot += angular / (r * r);
    op.diag[i - 1] = (1.0 / hm + 1.0 / hp) / w + pot;
    if (i + 1 < n) op.offdiag[i - 1] = -1.0 / (hp * std::sqrt(w * op.weights[i]));
  }
  op.omega = continuum * eigen_scale;
  return op;
}

SectorOperator assemble_sector(const GroundState& gs, int k) {
  return assemble_sector(gs, k, gs.field.grid());
}

SectorOperator assemble_sector(const GroundState& gs, int k, const RadialGrid& grid) {
  const auto& src = gs.field.grid();
  if (grid.r_max() > src.r_max() * (1 + 1e-12)) {
    throw GridError("sector grid extends beyond the ground state grid");
  }
  const Dimension d = gs.dim;
  const double M = gs.M_omega;
  const double q = d.critical_power();
  const double energy = std::pow(M, 2.0 * d.scaling_exponent());
  const double s = gs.omega / energy;
  const bool same = grid.same_as(src);

  std::vector<double> pot(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double phi = same ? gs.field[i] : gs.field.eval(grid.r(i));
    const double Q = phi / M;
    pot[i] = s - q * std::pow(std::abs(Q), q - 1) - gs.spec.dg(phi) / energy;
  }
  auto op = assemble_schrodinger(grid.scaled(std::pow(M, d.scaling_exponent())), d, k, pot, s,
                                 energy);
  op.omega = gs.omega;
  return op;
}

std::size_t sturm_count(const SectorOperator& op, double x) {
  const std::size_t n = op.size();
  double scale = 0.0;
  for (double e : op.offdiag) scale = std::max(scale, std::abs(e));
  for (double v : op.diag) scale = std::max(scale, std::abs(v - x));
  const double pivmin = std::numeric_limits<double>::min() * std::max(1.0, scale * scale);
  std::size_t count = 0;
  double piv = op.diag[0] - x;
  for (std::size_t i = 0;; ++i) {
    if (std::abs(piv) < pivmin) piv = -pivmin;
    if (piv < 0.0) ++count;
    if (i + 1 == n) break;
    piv = op.diag[i + 1] - x - op.offdiag[i] * op.offdiag[i] / piv;
  }
  return count;
}

namespace {

struct Bisection {
  std::vector<double> w;
  std::vector<lapack_int> iblock, isplit;
};

Bisection bisect(const SectorOperator& op, std::size_t m) {
  const auto n = static_cast<lapack_int>(op.size());
  if (m == 0 || static_cast<lapack_int>(m) > n) throw std::invalid_argument("bad eigenvalue count");
  Bisection b{std::vector<double>(n), std::vector<lapack_int>(n), std::vector<lapack_int>(n)};
  lapack_int found = 0, nsplit = 0;
  // abstol = 2 * safe minimum asks for the highest attainable accuracy.
  const double abstol = 2 * LAPACKE_dlamch('S');
  const lapack_int info = LAPACKE_dstebz('I', 'B', n, 0.0, 0.0, 1, static_cast<lapack_int>(m),
                                         abstol, op.diag.data(), op.offdiag.data(), &found, &nsplit,
                                         b.w.data(), b.iblock.data(), b.isplit.data());
  if (info != 0 || found != static_cast<lapack_int>(m)) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "bisection failed (info %d, %d of %zu eigenvalues)",
                  static_cast<int>(info), static_cast<int>(found), m);
    throw EigenError(buf);
  }
  b.w.resize(m);
  b.iblock.resize(m);
  return b;
}

// Inverse iteration for the selected eigenvalues; columns of the result are
// unit eigenvectors of the stored matrix.
std::vector<std::vector<double>> invert(const SectorOperator& op, const Bisection& b,
                                        std::span<const std::size_t> which) {
  const auto n = static_cast<lapack_int>(op.size());
  const auto m = static_cast<lapack_int>(which.size());
  // LAPACKE's NaN screen reads n entries of w, so pad it.
  std::vector<double> w(n, 0.0);
  std::vector<lapack_int> iblock(n, 0);
  for (lapack_int j = 0; j < m; ++j) {
    w[j] = b.w[which[j]];
    iblock[j] = b.iblock[which[j]];
  }
  std::vector<double> z(static_cast<std::size_t>(n) * m);
  std::vector<lapack_int> ifail(n);
  const lapack_int info =
      LAPACKE_dstein(LAPACK_COL_MAJOR, n, op.diag.data(), op.offdiag.data(), m, w.data(),
                     iblock.data(), b.isplit.data(), z.data(), n, ifail.data());
  if (info != 0) {
    char buf[120];
    if (info < 0) {
      std::snprintf(buf, sizeof buf, "inverse iteration rejected argument %d", static_cast<int>(-info));
    } else {
      std::snprintf(buf, sizeof buf, "inverse iteration stagnated for %d eigenvector(s)",
                    static_cast<int>(info));
    }
    throw EigenError(buf);
  }
  std::vector<std::vector<double>> out(m);
  for (lapack_int j = 0; j < m; ++j) out[j].assign(z.begin() + j * n, z.begin() + (j + 1) * n);
  return out;
}

double norm2(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

std::vector<double> apply_operator(const SectorOperator& op, std::span<const double> y) {
  const std::size_t n = op.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = op.diag[i] * y[i];
    if (i > 0) v += op.offdiag[i - 1] * y[i - 1];
    if (i + 1 < n) v += op.offdiag[i] * y[i + 1];
    out[i] = v;
  }
  return out;
}

double quadratic_form(const SectorOperator& op, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < op.size(); ++i) {
    sum += op.diag[i] * y[i] * y[i];
    if (i + 1 < op.size()) sum += 2.0 * op.offdiag[i] * y[i] * y[i + 1];
  }
  return sum;
}

std::vector<std::vector<double>> lowest_eigenvectors(const SectorOperator& op, std::size_t m) {
  const auto b = bisect(op, m);
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t c) { return b.w[a] < b.w[c]; });
  return invert(op, b, idx);
}

SectorSpectrum lowest_eigs(const SectorOperator& op, std::size_t m, double near_zero_threshold) {
  const auto b = bisect(op, m);
  SectorSpectrum out;
  out.k = op.k;
  out.eigen_scale = op.eigen_scale;
  out.lowest_eigenvalues = b.w;
  std::sort(out.lowest_eigenvalues.begin(), out.lowest_eigenvalues.end());
  out.negative_count = sturm_count(op, 0.0);
  out.count_below_continuum = sturm_count(op, op.continuum);

  std::size_t best = 0;
  for (std::size_t j = 1; j < m; ++j) {
    if (std::abs(b.w[j]) < std::abs(b.w[best])) best = j;
  }
  if (std::abs(b.w[best]) < near_zero_threshold) {
    const std::size_t which[] = {best};
    auto y = std::move(invert(op, b, which).front());
    const auto Ty = apply_operator(op, y);
    double res = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) res += std::pow(Ty[i] - b.w[best] * y[i], 2);
    NearZeroMode mode{b.w[best], {}, std::sqrt(res) / norm2(y)};
    mode.eigenvector.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) mode.eigenvector[i] = y[i] / std::sqrt(op.weights[i]);
    out.near_zero = std::move(mode);
  }
  return out;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

Status SpectralCertificate::overall() const {
  bool inconclusive = false;
  for (const auto& v : verdicts) {
    if (v.status == Status::fail) return Status::fail;
    if (v.status == Status::inconclusive) inconclusive = true;
  }
  return inconclusive ? Status::inconclusive : Status::pass;
}

namespace {

double smallest_magnitude(const SectorSpectrum& sp) {
  double best = std::numeric_limits<double>::infinity();
  for (double v : sp.lowest_eigenvalues) best = std::min(best, std::abs(v));
  return best;
}

double smallest_nonnegative(const SectorSpectrum& sp) {
  for (double v : sp.lowest_eigenvalues) {
    if (v >= 0.0) return v;
  }
  return std::numeric_limits<double>::infinity();
}

// r^{(d-1)/2} Phi' on the interior nodes, in sqrt(w) form and unit length.
std::vector<double> kernel_candidate(const GroundState& gs, const SectorOperator& op) {
  const double half = 0.5 * (op.dim.value() - 1);
  std::vector<double> y(op.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    y[i] = std::sqrt(op.weights[i]) * std::pow(op.grid.r(i + 1), half) * gs.slope[i + 1];
  }
  const double nrm = norm2(y);
  for (double& v : y) v /= nrm;
  return y;
}

// Discrete <L Phi, u> = 0 constraint and the sampled constrained form.
void constrained_form(const GroundState& gs, const SectorOperator& radial, std::size_t m,
                      int samples, std::uint64_t seed, LadderLevel& level) {
  const double half = 0.5 * (radial.dim.value() - 1);
  std::vector<double> phi(radial.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    phi[i] = std::sqrt(radial.weights[i]) * std::pow(radial.grid.r(i + 1), half) *
             gs.field[i + 1] / gs.M_omega;
  }
  const auto c = apply_operator(radial, phi);
  const double cc = std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
  level.phi_form = quadratic_form(radial, phi) / std::inner_product(phi.begin(), phi.end(),
                                                                     phi.begin(), 0.0);

  const auto basis = lowest_eigenvectors(radial, m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> u(radial.size());
  for (int t = 0; t < samples; ++t) {
    std::fill(u.begin(), u.end(), 0.0);
    for (const auto& v : basis) {
      const double a = normal(rng);
      for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * v[i];
    }
    const double uc = std::inner_product(u.begin(), u.end(), c.begin(), 0.0) / cc;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] -= uc * c[i];
    const double uu = std::inner_product(u.begin(), u.end(), u.begin(), 0.0);
    worst = std::min(worst, quadratic_form(radial, u) / uu);
  }
  level.min_constrained_form = worst;
}

}  // namespace

SpectralCertificate spectral_certificate(const GroundState& gs, const SpectralOptions& opts) {
  if (opts.ladder_depth < 2) throw std::invalid_argument("ladder needs at least 2 levels");
  if (opts.k_max < 0) throw std::invalid_argument("k_max must be >= 0");
  const std::size_t m = std::max<std::size_t>(opts.eigen_count, 2);

  SpectralCertificate cert;
  cert.omega = gs.omega;
  cert.dim = gs.dim.value();

  std::vector<GroundState> states{gs};
  const auto& base = gs.field.grid();
  for (int j = 1; j < opts.ladder_depth; ++j) {
    GroundStateOptions gopt;
    gopt.grid = base.refined(std::size_t{1} << j);
    states.push_back(find_ground_state(gs.spec, gs.dim, gs.omega, gopt));
  }

  // The k = 1 kernel eigenvalue at the first level sets the discretization
  // scale; near-zero means below ten times that, shrunk like h^2.
  std::vector<double> kernel_abs;
  const int k_solve = std::max(opts.k_max, 1);
  for (int j = 0; j < opts.ladder_depth; ++j) {
    const auto& st = states[j];
    LadderLevel level;
    level.intervals = st.field.grid().intervals();
    level.relative_h = std::ldexp(1.0, -j);
    std::vector<SectorSpectrum> sectors(k_solve + 1);

    const auto op1 = assemble_sector(st, 1);
    sectors[1] = lowest_eigs(op1, m);
    kernel_abs.push_back(std::abs(sectors[1].near_zero->value));
    level.threshold = 10.0 * kernel_abs.front() * level.relative_h * level.relative_h;
    const auto cand = kernel_candidate(st, op1);
    const auto& g = sectors[1].near_zero->eigenvector;
    double dot = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) dot += std::sqrt(op1.weights[i]) * g[i] * cand[i];
    level.kernel_alignment = std::abs(dot);
    if (kernel_abs.back() >= level.threshold) sectors[1].near_zero.reset();

    for (int k = 0; k <= k_solve; ++k) {
      if (k == 1) continue;
      const auto op = assemble_sector(st, k);
      sectors[k] = lowest_eigs(op, m, level.threshold);
      if (k == 0) constrained_form(st, op, m, opts.random_vectors, opts.seed, level);
    }
    cert.eigen_scale = op1.eigen_scale;
    sectors.resize(opts.k_max + 1);
    level.sectors = std::move(sectors);
    cert.levels.push_back(std::move(level));
  }
  for (std::size_t j = 1; j < kernel_abs.size(); ++j) {
    cert.kernel_ratios.push_back(kernel_abs[j - 1] / kernel_abs[j]);
  }

  char buf[240];
  auto& levels = cert.levels;
  const auto& last = levels.back();

  // (a) radial sector: one negative eigenvalue, no near-zero eigenvalue.
  {
    bool counts_agree = true, gap_ok = true, gap_stable = true;
    for (const auto& lv : levels) {
      counts_agree = counts_agree && lv.sectors[0].negative_count == levels[0].sectors[0].negative_count;
      gap_ok = gap_ok && smallest_magnitude(lv.sectors[0]) >= lv.threshold;
    }
    for (std::size_t j = 1; j < levels.size(); ++j) {
      const double r = smallest_nonnegative(levels[j].sectors[0]) /
                       smallest_nonnegative(levels[j - 1].sectors[0]);
      gap_stable = gap_stable && r > 0.5 && r < 2.0;
    }
    Status st = Status::fail;
    if (!counts_agree || gap_ok != gap_stable) {
      st = Status::inconclusive;
    } else if (levels[0].sectors[0].negative_count == 1 && gap_ok && gap_stable) {
      st = Status::pass;
    }
    std::snprintf(buf, sizeof buf,
                  "negative_count %zu..%zu; smallest |eigenvalue| %.6e vs near-zero threshold %.6e",
                  levels.front().sectors[0].negative_count, last.sectors[0].negative_count,
                  smallest_magnitude(last.sectors[0]), last.threshold);
    char bound[64];
    std::snprintf(bound, sizeof bound, "negative_count = 1, |eigenvalue| >= %.3e", last.threshold);
    cert.verdicts.push_back(
        {"a_radial_nondegenerate", st, smallest_magnitude(last.sectors[0]), bound, buf});
  }

  // (b) translation kernel in sector 1.
  if (opts.k_max >= 1) {
    bool ratios_ok = true;
    for (double r : cert.kernel_ratios) ratios_ok = ratios_ok && r >= 2.0 && r <= 8.0;
    const bool aligned = last.kernel_alignment >= opts.alignment_min;
    Status st = ratios_ok && aligned ? Status::pass : Status::fail;
    if (ratios_ok != aligned) st = Status::inconclusive;
    std::snprintf(buf, sizeof buf, "|eigenvalue| %.6e -> %.6e (ratio %.4f); alignment %.8f",
                  kernel_abs.front(), kernel_abs.back(), cert.kernel_ratios.back(),
                  last.kernel_alignment);
    char bound[64];
    std::snprintf(bound, sizeof bound, "ratio in [2, 8], alignment >= %g", opts.alignment_min);
    cert.verdicts.push_back({"b_translation_kernel", st, cert.kernel_ratios.back(), bound, buf});
  }

  // (c) higher sectors sit strictly above sector 1 and have no kernel.
  if (opts.k_max >= 2) {
    bool weyl = true, no_kernel = true;
    for (const auto& lv : levels) {
      for (int k = 2; k <= opts.k_max; ++k) {
        const auto& hi = lv.sectors[k].lowest_eigenvalues;
        const auto& lo = lv.sectors[k - 1].lowest_eigenvalues;
        for (std::size_t i = 0; i < hi.size(); ++i) weyl = weyl && hi[i] > lo[i];
        no_kernel = no_kernel && smallest_magnitude(lv.sectors[k]) >= lv.threshold;
      }
    }
    std::snprintf(buf, sizeof buf, "sector 2 lowest %.6e > sector 1 lowest %.6e",
                  last.sectors[2].lowest_eigenvalues[0], last.sectors[1].lowest_eigenvalues[0]);
    cert.verdicts.push_back({"c_higher_sectors", weyl && no_kernel ? Status::pass : Status::fail,
                             last.sectors[2].lowest_eigenvalues[0] - last.sectors[1].lowest_eigenvalues[0],
                             "> 0 (every index, every level)", buf});
  }

  // (d) quadratic form on the constraint hyperplane.
  {
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& lv : levels) worst = std::min(worst, lv.min_constrained_form);
    std::snprintf(buf, sizeof buf, "min B(u,u)/|u|^2 = %.6e over %d vectors per level (bound %.1e)",
                  worst, opts.random_vectors, -opts.form_tolerance);
    char bound[32];
    std::snprintf(bound, sizeof bound, ">= %.1e", -opts.form_tolerance);
    cert.verdicts.push_back({"d_constrained_form",
                             worst >= -opts.form_tolerance ? Status::pass : Status::fail, worst,
                             bound, buf});
  }
  return cert;
}

}  // namespace critsol
