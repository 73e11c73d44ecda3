#pragma once

#include <string>

#include "critsol/cli/config.hpp"
#include "critsol/cli/report.hpp"

namespace critsol::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kInconclusive = 2, kUsage = 3 };

struct CommandResult {
  int exit_code = kPass;
  Report report;
};

/// Ground states, identity residuals, rescaled states and, with three or more
/// omegas, the asymptotic-law verdicts.
CommandResult cmd_solve(const RunConfig& config);
/// Spectral certificate (a)-(d) per omega over a grid ladder.
CommandResult cmd_spectrum(const RunConfig& config);
/// Resolvent constant probes over the s-list with extrapolated limits.
CommandResult cmd_resolvent(const RunConfig& config);
/// resolvent, solve and spectrum in one document; the exit code is the worst
/// of the three.
CommandResult cmd_report(const RunConfig& config);

CommandResult run_command(const std::string& name, const RunConfig& config);

/// Write to config.output_path, or standard output when it is empty. Returns
/// false if the file cannot be written.
bool write_report(const Report& report, const RunConfig& config);

}  // namespace critsol::cli
