#include "critsol/cli/report.hpp"

#include <cmath>
#include <cstdio>

#include "json.hpp"

namespace critsol::cli {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

std::string render_csv(const Report& report) {
  std::string out = "# ";
  out += kSchema;
  out += " columns: ";
  out += kColumns;
  out += '\n';
  for (const auto& [k, v] : report.metadata) out += "# " + k + ": " + one_line(v) + "\n";
  out += kColumns;
  out += '\n';
  for (const auto& r : report.rows) {
    out += csv_field(r.section) + ',';
    out += (r.param ? number(*r.param) : std::string()) + ',';
    out += csv_field(r.quantity) + ',';
    out += (r.index ? std::to_string(*r.index) : std::string()) + ',';
    out += number(r.value) + ',';
    out += csv_field(r.tolerance) + ',';
    out += r.verdict + '\n';
  }
  return out;
}

std::string render_json(const Report& report) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema"] = kSchema;
  doc["columns"] = json::array({"section", "param", "quantity", "index", "value", "tolerance", "verdict"});
  json meta = json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  doc["metadata"] = meta;
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row;
    row["section"] = r.section;
    row["param"] = r.param ? json(*r.param) : json(nullptr);
    row["quantity"] = r.quantity;
    row["index"] = r.index ? json(*r.index) : json(nullptr);
    row["value"] = std::isfinite(r.value) ? json(r.value) : json(nullptr);
    row["tolerance"] = r.tolerance;
    row["verdict"] = r.verdict;
    rows.push_back(std::move(row));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render(const Report& report, Format format) {
  return format == Format::json ? render_json(report) : render_csv(report);
}

}  // namespace critsol::cli
