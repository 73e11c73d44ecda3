#include "critsol/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>

#include "critsol/asymptotics.hpp"
#include "critsol/errors.hpp"
#include "critsol/ground_state.hpp"
#include "critsol/profiles.hpp"
#include "critsol/resolvent.hpp"
#include "critsol/spectral.hpp"

namespace critsol::cli {

namespace {

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string list(const std::vector<double>& xs) {
  std::string out;
  for (double x : xs) out += (out.empty() ? "" : ",") + fmt("%.12g", x);
  return out;
}

void common_metadata(Report& rep, const std::string& command, const RunConfig& cfg) {
  rep.meta("command", command);
  rep.meta("dimension", std::to_string(cfg.dimension));
  if (command != "resolvent") rep.meta("nonlinearity", format_nonlinearity(cfg.nonlinearity));
}

int worst(int a, int b) {
  auto rank = [](int c) { return c == kUsage ? 3 : c == kFail ? 2 : c == kInconclusive ? 1 : 0; };
  return rank(a) >= rank(b) ? a : b;
}

void record_error(CommandResult& res, std::optional<double> param, const std::string& kind,
                  const std::string& message) {
  res.report.rows.push_back({"error", param, kind, std::nullopt, std::nan(""), {}, "fail"});
  std::string key = "error";
  if (param) key += " (param " + fmt("%.12g", *param) + ")";
  res.report.meta(key, kind + ": " + message);
  res.exit_code = worst(res.exit_code, kFail);
}

CommandResult usage_error(const std::string& command, const RunConfig& cfg, const std::string& msg) {
  CommandResult res;
  common_metadata(res.report, command, cfg);
  res.report.meta("error", "config: " + msg);
  res.exit_code = kUsage;
  return res;
}

GroundStateOptions ground_options(const RunConfig& cfg, double omega) {
  GroundStateOptions opt;
  opt.n = cfg.grid.n;
  if (cfg.grid.r_max > 0.0) opt.decay_lengths = cfg.grid.r_max * std::sqrt(omega);
  // Residuals become verdict rows instead of exceptions.
  opt.check_residuals = false;
  return opt;
}

// Per-omega work runs concurrently; results are consumed in input order.
template <class T, class F>
std::vector<std::future<T>> launch(const std::vector<double>& omegas, F work) {
  std::vector<std::future<T>> out;
  for (double w : omegas) out.push_back(std::async(std::launch::async, work, w));
  return out;
}

struct SolveOutcome {
  std::optional<GroundState> gs;
  std::optional<RescaledState> state;
  std::string error_kind, error;
};

void finish(CommandResult& res) {
  const char* names[] = {"pass", "fail", "inconclusive", "usage"};
  for (const auto& r : res.report.rows) {
    if (r.verdict == "fail") res.exit_code = worst(res.exit_code, kFail);
    if (r.verdict == "inconclusive") res.exit_code = worst(res.exit_code, kInconclusive);
  }
  res.report.meta("overall", names[res.exit_code]);
}

void solve_rows(const RunConfig& cfg, CommandResult& res) {
  const Dimension d = Dimension::of(cfg.dimension);
  const auto spec = cfg.spec();
  const double tol = cfg.tolerance("residual");
  const std::string tol_text = "< " + fmt("%.1e", tol);
  auto futures = launch<SolveOutcome>(cfg.omega_list, [&](double w) {
    SolveOutcome out;
    try {
      out.gs = find_ground_state(spec, d, w, ground_options(cfg, w));
      out.state = build_rescaled_state(*out.gs);
    } catch (const SolverError& e) {
      out.error_kind = e.kind();
      out.error = e.what();
    }
    return out;
  });

  std::vector<RescaledState> states;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const double w = cfg.omega_list[i];
    const auto out = futures[i].get();
    if (!out.gs || !out.state) {
      record_error(res, w, out.error_kind, out.error);
      continue;
    }
    const auto& gs = *out.gs;
    const auto& dg = gs.diagnostics;
    auto& rep = res.report;
    rep.info("ground_state", w, "M_omega", gs.M_omega);
    rep.check("ground_state", w, "nehari_residual", dg.nehari_residual, tol_text, dg.nehari_residual < tol);
    rep.check("ground_state", w, "pohozaev_residual", dg.pohozaev_residual, tol_text,
              dg.pohozaev_residual < tol);
    rep.check("ground_state", w, "mass_identity_residual", dg.mass_identity_residual, tol_text,
              dg.mass_identity_residual < tol);
    rep.check("ground_state", w, "monotone", dg.monotone ? 1.0 : 0.0, "= 1", dg.monotone);
    rep.info("ground_state", w, "bisection_steps", dg.bisection_steps);
    rep.info("ground_state", w, "decay_constant", decay_check(gs).constant);

    const auto& st = *out.state;
    rep.info("rescaled", w, "mu", st.mu);
    rep.info("rescaled", w, "mu_fallback", st.mu_fallback ? 1.0 : 0.0);
    rep.info("rescaled", w, "abs_mu_minus_1", std::abs(st.mu - 1.0));
    rep.info("rescaled", w, "s_omega", st.s_omega);
    rep.info("rescaled", w, "kappa", st.kappa);
    const double kappa_rel = std::abs(st.kappa - st.kappa_closed_form) / std::abs(st.kappa_closed_form);
    rep.check("rescaled", w, "kappa_two_ways_rel_diff", kappa_rel, "< 1e-08", kappa_rel < 1e-8);
    rep.info("rescaled", w, "t_omega", st.t_omega);
    for (const auto& [r, v] : st.zeta_norms) {
      rep.info("rescaled", w, "zeta_norm", v, static_cast<long long>(std::lround(r)));
    }
    rep.info("rescaled", w, "zeta_relative_critical", st.zeta_relative_critical);
    rep.check("rescaled", w, "pde_residual", st.pde_residual, "< 1e-04", st.pde_residual < 1e-4);
    states.push_back(st);
  }

  if (states.size() >= 3 && states.size() == cfg.omega_list.size()) {
    std::vector<std::size_t> order(states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return states[a].omega < states[b].omega; });
    std::vector<RescaledState> sorted;
    for (std::size_t i : order) sorted.push_back(states[i]);
    const auto law = asymptotic_law_report(sorted, derive_scale_constants(d));
    auto& rep = res.report;
    rep.info("law", std::nullopt, "A1", law.A1);
    for (const auto& row : law.rows) {
      rep.info("law", row.omega, "s", row.s);
      rep.info("law", row.omega, "t", row.t);
      rep.info("law", row.omega, "beta", row.beta);
      rep.info("law", row.omega, "t_over_beta", row.t_over_beta);
      rep.info("law", row.omega, "distance_to_A1", row.distance_to_A1);
      for (const auto& [r, v] : row.zeta_ratios) {
        rep.info("law", row.omega, "zeta_ratio", v, static_cast<long long>(std::lround(r)));
      }
    }
    for (const auto& v : law.verdicts) rep.check("law", std::nullopt, v.name, v.value, v.bound, v.pass);
  } else if (cfg.omega_list.size() < 3) {
    res.report.meta("law", "skipped: needs at least 3 omega values");
  } else {
    res.report.meta("law", "skipped: not every omega was solved");
  }
}

void spectrum_rows(const RunConfig& cfg, CommandResult& res) {
  const Dimension d = Dimension::of(cfg.dimension);
  const auto spec = cfg.spec();
  SpectralOptions sopt;
  sopt.k_max = cfg.k_max;
  sopt.ladder_depth = cfg.grid.ladder_depth;
  sopt.eigen_count = cfg.eigen_count;
  sopt.random_vectors = cfg.random_vectors;
  sopt.seed = cfg.seed;
  sopt.form_tolerance = cfg.tolerance("form");
  sopt.alignment_min = cfg.tolerance("alignment");

  struct Outcome {
    std::optional<SpectralCertificate> cert;
    std::string error_kind, error;
  };
  auto futures = launch<Outcome>(cfg.omega_list, [&](double w) {
    Outcome out;
    try {
      const auto gs = find_ground_state(spec, d, w, ground_options(cfg, w));
      out.cert = spectral_certificate(gs, sopt);
    } catch (const SolverError& e) {
      out.error_kind = e.kind();
      out.error = e.what();
    }
    return out;
  });

  auto& rep = res.report;
  for (std::size_t i = 0; i < futures.size(); ++i) {
    const double w = cfg.omega_list[i];
    const auto out = futures[i].get();
    if (!out.cert) {
      record_error(res, w, out.error_kind, out.error);
      continue;
    }
    const auto& cert = *out.cert;
    rep.info("spectrum", w, "eigen_scale", cert.eigen_scale);
    for (std::size_t j = 0; j < cert.levels.size(); ++j) {
      const auto& lv = cert.levels[j];
      const std::string L = "level" + std::to_string(j) + ".";
      rep.info("spectrum", w, L + "intervals", static_cast<double>(lv.intervals));
      rep.info("spectrum", w, L + "near_zero_threshold", lv.threshold);
      if (cfg.k_max >= 1) rep.info("spectrum", w, L + "kernel_alignment", lv.kernel_alignment);
      rep.info("spectrum", w, L + "min_constrained_form", lv.min_constrained_form);
      rep.info("spectrum", w, L + "phi_form", lv.phi_form);
      for (const auto& sp : lv.sectors) {
        const std::string K = L + "k" + std::to_string(sp.k) + ".";
        for (std::size_t e = 0; e < sp.lowest_eigenvalues.size(); ++e) {
          rep.info("spectrum", w, K + "eigenvalue", sp.lowest_eigenvalues[e], static_cast<long long>(e));
        }
        rep.info("spectrum", w, K + "negative_count", static_cast<double>(sp.negative_count));
        rep.info("spectrum", w, K + "count_below_continuum", static_cast<double>(sp.count_below_continuum));
        if (sp.near_zero) rep.info("spectrum", w, K + "near_zero", sp.near_zero->value);
      }
    }
    if (cfg.k_max >= 1) {
      for (std::size_t j = 0; j < cert.kernel_ratios.size(); ++j) {
        rep.info("spectrum", w, "kernel_ratio", cert.kernel_ratios[j], static_cast<long long>(j));
      }
    }
    for (const auto& v : cert.verdicts) {
      rep.rows.push_back({"certificate", w, v.name, std::nullopt, v.value, v.bound, to_string(v.status)});
    }
  }
}

std::optional<std::string> resolvent_problem(const RunConfig& cfg, const std::vector<double>& s_list) {
  if (s_list.size() < 3) return "the resolvent s-list needs at least 3 values";
  for (double s : s_list) {
    if (!(s > 0.0)) return "resolvent s values must be positive";
    if (cfg.dimension == 4 && s >= 1.0) return "resolvent s values must lie in (0, 1) for d = 4";
  }
  return std::nullopt;
}

void resolvent_rows(const RunConfig& cfg, const std::vector<double>& s_list, CommandResult& res) {
  const Dimension d = Dimension::of(cfg.dimension);
  const auto constants = derive_scale_constants(d);
  auto& rep = res.report;
  rep.info("constants", std::nullopt, "A0", constants.A0);
  rep.info("constants", std::nullopt, "C0", constants.C_script0);
  rep.info("constants", std::nullopt, "A1", constants.A1);
  rep.info("constants", std::nullopt, "smallball_constant", constants.frakC);

  std::vector<ResolventProbe> probes;
  try {
    probes = probe_sweep(d, s_list, cfg.grid.n);
  } catch (const SolverError& e) {
    record_error(res, std::nullopt, e.kind(), e.what());
    return;
  }
  for (const auto& p : probes) {
    rep.info("resolvent", p.s, "origin_value", p.origin_value);
    rep.info("resolvent", p.s, "scaled_origin", p.scaled_origin);
    rep.info("resolvent", p.s, "pairing", p.pairing_VLambdaW);
    rep.info("resolvent", p.s, "scaled_pairing", p.scaled_pairing);
    rep.info("resolvent", p.s, "scaled_smallball", scale_delta(p.s, d) * smallball_integral(d, p.s));
  }
  const auto origin = fit_origin(d, probes);
  const auto pairing = fit_pairing(d, probes);
  rep.info("fit", std::nullopt, "origin_limit", origin.limit);
  rep.info("fit", std::nullopt, "origin_slope", origin.slope);
  rep.info("fit", std::nullopt, "origin_monotone", origin.monotone ? 1.0 : 0.0);
  rep.info("fit", std::nullopt, "pairing_limit", pairing.limit);
  rep.info("fit", std::nullopt, "pairing_slope", pairing.slope);
  rep.info("fit", std::nullopt, "pairing_monotone", pairing.monotone ? 1.0 : 0.0);

  const auto smallest = std::min_element(probes.begin(), probes.end(),
                                         [](const auto& a, const auto& b) { return a.s < b.s; });
  const double s_min = smallest->s;
  auto within = [](double v, double target, double rel) { return std::abs(v - target) <= rel * std::abs(target); };
  auto band = [&](double rel, double target) {
    return fmt("within %g%% of ", 100 * rel) + fmt("%.12e", target);
  };
  if (d.value() == 3) {
    rep.check("check", s_min, "scaled_origin", smallest->scaled_origin, band(0.02, constants.A0),
              within(smallest->scaled_origin, constants.A0, 0.02));
    rep.check("check", s_min, "scaled_pairing", smallest->scaled_pairing, band(0.05, constants.A1),
              within(smallest->scaled_pairing, constants.A1, 0.05));
  } else {
    // The d = 4 approach is logarithmically slow; the target applies to the
    // extrapolated limit.
    rep.check("check", std::nullopt, "origin_limit", origin.limit, band(0.05, constants.A0),
              within(origin.limit, constants.A0, 0.05));
    rep.info("check", std::nullopt, "pairing_limit_rel_distance",
             std::abs(pairing.limit - constants.A1) / constants.A1);
  }
  const double ball = scale_delta(s_min, d) * smallball_integral(d, s_min);
  rep.check("check", s_min, "scaled_smallball", ball, band(0.02, constants.frakC),
            within(ball, constants.frakC, 0.02));
}

std::optional<std::string> precheck(const RunConfig& cfg, bool check_model = true) {
  try {
    validate(cfg, check_model);
  } catch (const ConfigError& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

}  // namespace

CommandResult cmd_solve(const RunConfig& cfg) {
  if (auto err = precheck(cfg)) return usage_error("solve", cfg, *err);
  if (cfg.omega_list.empty()) return usage_error("solve", cfg, "no work: omega list is empty");
  CommandResult res;
  common_metadata(res.report, "solve", cfg);
  res.report.meta("omega", list(cfg.omega_list));
  res.report.meta("grid_n", std::to_string(cfg.grid.n));
  res.report.meta("grid_r_max", cfg.grid.r_max > 0 ? fmt("%.12g", cfg.grid.r_max) : "40/sqrt(omega)");
  solve_rows(cfg, res);
  finish(res);
  return res;
}

CommandResult cmd_spectrum(const RunConfig& cfg) {
  if (auto err = precheck(cfg)) return usage_error("spectrum", cfg, *err);
  if (cfg.omega_list.empty()) return usage_error("spectrum", cfg, "no work: omega list is empty");
  if (cfg.grid.ladder_depth < 2) return usage_error("spectrum", cfg, "ladder_depth must be >= 2");
  CommandResult res;
  common_metadata(res.report, "spectrum", cfg);
  res.report.meta("omega", list(cfg.omega_list));
  res.report.meta("grid_n", std::to_string(cfg.grid.n));
  res.report.meta("ladder_depth", std::to_string(cfg.grid.ladder_depth));
  res.report.meta("k_max", std::to_string(cfg.k_max));
  res.report.meta("seed", std::to_string(cfg.seed));
  res.report.meta("frame", "rescaled; physical eigenvalue = eigen_scale * eigenvalue");
  spectrum_rows(cfg, res);
  finish(res);
  return res;
}

CommandResult cmd_resolvent(const RunConfig& cfg) {
  if (auto err = precheck(cfg, false)) return usage_error("resolvent", cfg, *err);
  const auto s_list = cfg.s_list.empty() ? default_s_list(Dimension::of(cfg.dimension)) : cfg.s_list;
  if (auto err = resolvent_problem(cfg, s_list)) return usage_error("resolvent", cfg, *err);
  CommandResult res;
  common_metadata(res.report, "resolvent", cfg);
  res.report.meta("s", list(s_list));
  res.report.meta("grid_n", std::to_string(cfg.grid.n));
  resolvent_rows(cfg, s_list, res);
  finish(res);
  return res;
}

CommandResult cmd_report(const RunConfig& cfg) {
  if (auto err = precheck(cfg, !cfg.omega_list.empty())) return usage_error("report", cfg, *err);
  const auto s_list = cfg.s_list.empty() ? default_s_list(Dimension::of(cfg.dimension)) : cfg.s_list;
  if (auto err = resolvent_problem(cfg, s_list)) return usage_error("report", cfg, *err);
  if (!cfg.omega_list.empty() && cfg.grid.ladder_depth < 2) {
    return usage_error("report", cfg, "ladder_depth must be >= 2");
  }
  CommandResult res;
  common_metadata(res.report, "report", cfg);
  res.report.meta("omega", list(cfg.omega_list));
  res.report.meta("s", list(s_list));
  res.report.meta("grid_n", std::to_string(cfg.grid.n));
  res.report.meta("ladder_depth", std::to_string(cfg.grid.ladder_depth));
  res.report.meta("k_max", std::to_string(cfg.k_max));
  res.report.meta("seed", std::to_string(cfg.seed));
  resolvent_rows(cfg, s_list, res);
  if (!cfg.omega_list.empty()) {
    solve_rows(cfg, res);
    spectrum_rows(cfg, res);
  }
  finish(res);
  return res;
}

CommandResult run_command(const std::string& name, const RunConfig& config) {
  if (name == "solve") return cmd_solve(config);
  if (name == "spectrum") return cmd_spectrum(config);
  if (name == "resolvent") return cmd_resolvent(config);
  if (name == "report") return cmd_report(config);
  return usage_error(name, config, "unknown command '" + name + "'");
}

bool write_report(const Report& report, const RunConfig& config) {
  const auto text = render(report, config.format);
  if (config.output_path.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout.flush());
  }
  std::ofstream out(config.output_path, std::ios::binary);
  out << text;
  return static_cast<bool>(out.flush());
}

}  // namespace critsol::cli
