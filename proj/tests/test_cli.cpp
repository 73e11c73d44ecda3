#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "critsol/cli/commands.hpp"
#include "critsol/cli/config.hpp"
#include "critsol/cli/report.hpp"
#include "doctest.h"
#include "json.hpp"

using namespace critsol::cli;
using doctest::Approx;

namespace {

const Row* find_row(const Report& rep, const std::string& section, const std::string& quantity,
                    std::optional<double> param = std::nullopt) {
  for (const auto& r : rep.rows) {
    if (r.section == section && r.quantity == quantity && (!param || r.param == param)) return &r;
  }
  return nullptr;
}

std::string meta(const Report& rep, const std::string& key) {
  for (const auto& [k, v] : rep.metadata) {
    if (k == key) return v;
  }
  return {};
}

void expect_error(const std::string& text, int line, int column) {
  try {
    parse_config(text);
    FAIL("no error for: " << text);
  } catch (const ConfigError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
    CHECK(std::string(e.what()).rfind("line " + std::to_string(line) + ", column", 0) == 0);
  }
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(
      "# sweep\n"
      "[model]\n"
      "dimension = 3\n"
      "nonlinearity = u^4 + 0.5*u^3.5\n"
      "\n"
      "[solve]\n"
      "omega = 10, 100 ,1e3\n"
      "[grid]\n"
      "n = 4096\n"
      "r_max = 2.5\n"
      "ladder_depth = 3\n"
      "[spectrum]\n"
      "k_max = 1\n"
      "seed = 7\n"
      "[tolerances]\n"
      "form = 1e-7\n"
      "[output]\n"
      "format = json\n");
  CHECK(cfg.dimension == 3);
  // Terms come back in ascending exponent order.
  REQUIRE(cfg.nonlinearity.size() == 2);
  CHECK(cfg.nonlinearity[0].coefficient == 0.5);
  CHECK(cfg.nonlinearity[0].exponent == 3.5);
  CHECK(cfg.nonlinearity[1].coefficient == 1.0);
  CHECK(cfg.nonlinearity[1].exponent == 4.0);
  CHECK(cfg.omega_list == std::vector<double>{10.0, 100.0, 1000.0});
  CHECK(cfg.grid.n == 4096);
  CHECK(cfg.grid.r_max == 2.5);
  CHECK(cfg.grid.ladder_depth == 3);
  CHECK(cfg.k_max == 1);
  CHECK(cfg.seed == 7);
  CHECK(cfg.tolerance("form") == 1e-7);
  CHECK(cfg.tolerance("residual") == 1e-5);
  CHECK(cfg.format == Format::json);
  CHECK_NOTHROW(validate(cfg));
  CHECK(format_nonlinearity(cfg.nonlinearity) == "0.5*u^3.5 + u^4");
}

TEST_CASE("config errors carry line and column") {
  expect_error("[model]\ndimension = 3\n[solv]\n", 3, 2);
  expect_error("omega = 10\n", 1, 1);
  expect_error("[solve]\nomega = 10\nomega = 20\n", 3, 1);
  expect_error("[solve]\nfrequency = 10\n", 2, 1);
  expect_error("[model]\ndimension\n", 2, 1);
  expect_error("[model]\nnonlinearity = u^4 + x\n", 2, 22);
  expect_error("[solve]\nomega = 10, abc\n", 2, 13);
  expect_error("[tolerances]\nspeed = 1\n", 2, 1);
  expect_error("[output]\nformat = xml\n", 2, 10);
  CHECK_THROWS_AS(load_config("/nonexistent/critsol.cfg"), ConfigError);
}

TEST_CASE("validation") {
  RunConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.nonlinearity = {{1.0, 3.0}};
  try {
    validate(cfg);
    FAIL("u^3 accepted in d = 3");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("not admissible") != std::string::npos);
    CHECK(msg.find("p2 >") != std::string::npos);
  }
  CHECK_NOTHROW(validate(cfg, false));
  cfg = RunConfig{};
  cfg.dimension = 5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.omega_list = {10.0, -1.0};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.grid.n = 10;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("csv and json rendering") {
  Report rep;
  rep.meta("command", "demo");
  rep.info("a", 1.5, "x", 2.0, 3);
  rep.check("b", std::nullopt, "y", std::nan(""), "within 2%, of 1", false);
  const auto csv = render_csv(rep);
  CHECK(csv.rfind(std::string("# ") + kSchema + " columns: " + kColumns + "\n", 0) == 0);
  CHECK(csv.find("# command: demo\n") != std::string::npos);
  CHECK(csv.find(std::string(kColumns) + "\n") != std::string::npos);
  CHECK(csv.find("a,1.500000000000e+00,x,3,2.000000000000e+00,,info\n") != std::string::npos);
  CHECK(csv.find("b,,y,,nan,\"within 2%, of 1\",fail\n") != std::string::npos);

  const auto j = nlohmann::json::parse(render_json(rep));
  CHECK(j["schema"] == kSchema);
  CHECK(j["metadata"]["command"] == "demo");
  REQUIRE(j["rows"].size() == 2);
  CHECK(j["rows"][0]["param"] == 1.5);
  CHECK(j["rows"][0]["index"] == 3);
  CHECK(j["rows"][1]["param"].is_null());
  CHECK(j["rows"][1]["value"].is_null());
  CHECK(j["rows"][1]["verdict"] == "fail");
}

TEST_CASE("solve over three frequencies") {
  RunConfig cfg;
  cfg.omega_list = {10.0, 100.0, 1000.0};
  const auto res = cmd_solve(cfg);
  CHECK(res.exit_code == kPass);
  CHECK(meta(res.report, "overall") == "pass");
  const auto* M = find_row(res.report, "ground_state", "M_omega", 10.0);
  REQUIRE(M);
  CHECK(M->value == Approx(28.659124306594432).epsilon(1e-6));
  for (double w : cfg.omega_list) {
    const auto* r = find_row(res.report, "ground_state", "mass_identity_residual", w);
    REQUIRE(r);
    CHECK(r->verdict == "pass");
  }
  const auto law_rows = std::count_if(res.report.rows.begin(), res.report.rows.end(), [](const Row& r) {
    return r.section == "law" && r.quantity == "t_over_beta";
  });
  CHECK(law_rows == 3);
  for (const auto& r : res.report.rows) {
    CAPTURE(r.quantity);
    CHECK(r.verdict != "fail");
  }
}

TEST_CASE("solve without enough frequencies skips the law") {
  RunConfig cfg;
  cfg.omega_list = {100.0};
  const auto res = cmd_solve(cfg);
  CHECK(res.exit_code == kPass);
  CHECK(find_row(res.report, "law", "t_over_beta") == nullptr);
  CHECK_FALSE(meta(res.report, "law").empty());
}

TEST_CASE("usage errors") {
  RunConfig cfg;
  auto res = cmd_solve(cfg);
  CHECK(res.exit_code == kUsage);
  CHECK(meta(res.report, "error").find("no work") != std::string::npos);

  cfg.omega_list = {100.0};
  cfg.grid.ladder_depth = 1;
  CHECK(cmd_spectrum(cfg).exit_code == kUsage);

  cfg = RunConfig{};
  cfg.nonlinearity = {{1.0, 3.0}};
  cfg.omega_list = {10.0};
  res = cmd_solve(cfg);
  CHECK(res.exit_code == kUsage);
  CHECK(meta(res.report, "error").find("not admissible") != std::string::npos);

  cfg = RunConfig{};
  cfg.dimension = 4;
  cfg.s_list = {0.5, 1.0, 2.0};
  CHECK(cmd_resolvent(cfg).exit_code == kUsage);
  cfg.s_list = {1e-3, 1e-4};
  CHECK(cmd_resolvent(cfg).exit_code == kUsage);

  CHECK(run_command("frobnicate", RunConfig{}).exit_code == kUsage);
}

TEST_CASE("spectrum is deterministic") {
  RunConfig cfg;
  cfg.omega_list = {100.0};
  cfg.seed = 3;
  const auto a = cmd_spectrum(cfg);
  const auto b = cmd_spectrum(cfg);
  CHECK(a.exit_code == kPass);
  CHECK(render_csv(a.report) == render_csv(b.report));
  CHECK(render_json(a.report) == render_json(b.report));

  const auto csv = render_csv(a.report);
  const auto lines = std::count(csv.begin(), csv.end(), '\n');
  const auto comments = static_cast<long>(a.report.metadata.size()) + 1;
  const auto j = nlohmann::json::parse(render_json(a.report));
  CHECK(static_cast<long>(j["rows"].size()) == lines - comments - 1);
}

TEST_CASE("spectrum with k_max = 0") {
  RunConfig cfg;
  cfg.omega_list = {100.0};
  cfg.k_max = 0;
  const auto res = cmd_spectrum(cfg);
  CHECK(res.exit_code == kPass);
  CHECK(find_row(res.report, "certificate", "a_radial_nondegenerate"));
  CHECK(find_row(res.report, "certificate", "d_constrained_form"));
  CHECK(find_row(res.report, "certificate", "b_translation_kernel") == nullptr);
  CHECK(find_row(res.report, "certificate", "c_higher_sectors") == nullptr);
  for (const auto& r : res.report.rows) CHECK(r.quantity.find(".k1.") == std::string::npos);
}

TEST_CASE("resolvent with defaults") {
  for (int d : {3, 4}) {
    RunConfig cfg;
    cfg.dimension = d;
    const auto res = cmd_resolvent(cfg);
    CAPTURE(d);
    CHECK(res.exit_code == kPass);
    CHECK(find_row(res.report, "check", "scaled_smallball"));
    CHECK(meta(res.report, "nonlinearity").empty());
  }
}

TEST_CASE("report file output") {
  RunConfig cfg;
  cfg.dimension = 3;
  cfg.format = Format::json;
  cfg.output_path = "critsol_report_test.json";
  const auto res = cmd_report(cfg);
  CHECK(res.exit_code == kPass);
  REQUIRE(write_report(res.report, cfg));
  std::ifstream in(cfg.output_path);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["metadata"]["command"] == "report");
  CHECK(j["rows"].size() == res.report.rows.size());
  cfg.output_path = "/nonexistent/dir/out.csv";
  CHECK_FALSE(write_report(res.report, cfg));
}
