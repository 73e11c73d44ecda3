#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "critsol/nonlinearity.hpp"

namespace critsol::cli {

enum class Format { csv, json };

/// Configuration or usage problem. Line and column are 1-based; 0 when the
/// problem is not tied to a position in a file.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct GridConfig {
  /// 0 selects 40/sqrt(omega).
  double r_max = 0.0;
  std::size_t n = 1u << 14;
  int ladder_depth = 2;
};

struct RunConfig {
  int dimension = 3;
  std::vector<PowerTerm> nonlinearity{{1.0, 4.0}};
  std::vector<double> omega_list;
  GridConfig grid;
  /// Recognized keys: residual, form, alignment.
  std::map<std::string, double> tolerances{{"residual", 1e-5}, {"form", 1e-6}, {"alignment", 0.999}};
  int k_max = 2;
  std::size_t eigen_count = 6;
  int random_vectors = 64;
  std::uint64_t seed = 0;
  /// Resolvent probe frequencies; empty selects the defaults for the dimension.
  std::vector<double> s_list;
  Format format = Format::csv;
  /// Empty writes to standard output.
  std::string output_path;

  NonlinearitySpec spec() const;
  double tolerance(const std::string& key) const;
};

/// Parse the flat sectioned text format:
///
///   # comment
///   [model]
///   dimension = 3
///   nonlinearity = u^4 + 0.5*u^3
///   [solve]
///   omega = 10, 100, 1000
///
/// Sections: model, solve, grid, spectrum, resolvent, tolerances, output.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// "u^4 + 0.5*u^3" -> terms; throws ConfigError with the column of the bad term.
std::vector<PowerTerm> parse_nonlinearity(const std::string& text, int line = 0, int column = 1);
std::string format_nonlinearity(const std::vector<PowerTerm>& terms);
std::vector<double> parse_number_list(const std::string& text, int line = 0, int column = 1);

/// Dimension, grid and admissibility checks; the message of an inadmissible
/// nonlinearity names the violated clause. The resolvent probes do not involve
/// the nonlinearity, so they pass check_model = false.
void validate(const RunConfig& config, bool check_model = true);

}  // namespace critsol::cli
