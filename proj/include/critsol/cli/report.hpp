#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "critsol/cli/config.hpp"

namespace critsol::cli {

/// One long-format record. `param` is omega for solve and spectrum rows and s
/// for resolvent rows; `verdict` is pass, fail, inconclusive or info.
struct Row {
  std::string section;
  std::optional<double> param;
  std::string quantity;
  std::optional<long long> index;
  double value = 0.0;
  std::string tolerance;
  std::string verdict = "info";
};

struct Report {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<Row> rows;

  void meta(std::string key, std::string value) {
    metadata.emplace_back(std::move(key), std::move(value));
  }
  void info(std::string section, std::optional<double> param, std::string quantity, double value,
            std::optional<long long> index = std::nullopt) {
    rows.push_back({std::move(section), param, std::move(quantity), index, value, {}, "info"});
  }
  void check(std::string section, std::optional<double> param, std::string quantity, double value,
             std::string tolerance, bool pass, std::optional<long long> index = std::nullopt) {
    rows.push_back({std::move(section), param, std::move(quantity), index, value,
                    std::move(tolerance), pass ? "pass" : "fail"});
  }
};

inline constexpr const char* kSchema = "critsol-report/1";
inline constexpr const char* kColumns = "section,param,quantity,index,value,tolerance,verdict";

/// Header comment with the schema, '#'-prefixed metadata, a header row, then
/// rows; numbers as %.12e.
std::string render_csv(const Report& report);
/// The same content as one JSON object with keys schema, columns, metadata, rows.
std::string render_json(const Report& report);
std::string render(const Report& report, Format format);

}  // namespace critsol::cli
