// Command-line driver: critsol {solve,spectrum,resolvent,report} [options]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "critsol/cli/commands.hpp"
#include "critsol/cli/config.hpp"

using namespace critsol::cli;

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> omega;
  std::optional<int> dim;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<int> ladder;
};

void add_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "config file (sectioned key = value)");
  sub->add_option("--omega", o.omega, "comma-separated frequencies, e.g. 10,100,1000");
  sub->add_option("--dim", o.dim, "spatial dimension")->check(CLI::IsMember({3, 4}));
  sub->add_option("--out", o.out, "output path (default: standard output)");
  sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", o.seed, "seed of the random test vectors");
  sub->add_option("--ladder", o.ladder, "number of grid levels in the spectral ladder");
}

RunConfig build_config(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.omega) cfg.omega_list = parse_number_list(*o.omega);
  if (o.dim) cfg.dimension = *o.dim;
  if (o.out) cfg.output_path = *o.out;
  if (o.format) cfg.format = *o.format == "json" ? Format::json : Format::csv;
  if (o.seed) cfg.seed = *o.seed;
  if (o.ladder) cfg.grid.ladder_depth = *o.ladder;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ground states of the critical NLS with subcritical perturbation: solve, certify, report"};
  app.require_subcommand(1);
  Overrides o;
  for (const char* name : {"solve", "spectrum", "resolvent", "report"}) {
    add_options(app.add_subcommand(name, ""), o);
  }
  app.get_subcommand("solve")->description("ground states, identity residuals and asymptotic laws");
  app.get_subcommand("spectrum")->description("sector spectra and the spectral certificate");
  app.get_subcommand("resolvent")->description("resolvent constants at small s");
  app.get_subcommand("report")->description("resolvent, solve and spectrum in one document");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  RunConfig cfg;
  try {
    cfg = build_config(o);
  } catch (const ConfigError& e) {
    std::cerr << "critsol: " << e.what() << "\n";
    return kUsage;
  }
  const auto result = run_command(app.get_subcommands().front()->get_name(), cfg);
  for (const auto& [k, v] : result.report.metadata) {
    if (k.rfind("error", 0) == 0) std::cerr << "critsol: " << k << ": " << v << "\n";
  }
  if (!write_report(result.report, cfg)) {
    std::cerr << "critsol: cannot write " << cfg.output_path << "\n";
    return kUsage;
  }
  return result.exit_code;
}
