#include "critsol/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "critsol/dimension.hpp"
#include "critsol/profiles.hpp"

namespace critsol::cli {

namespace {

std::string located(const std::string& what, int line, int column) {
  if (line <= 0) return what;
  char buf[64];
  std::snprintf(buf, sizeof buf, "line %d, column %d: ", line, column);
  return buf + what;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Position of the first and one-past-last non-space characters.
std::pair<std::size_t, std::size_t> trim_bounds(const std::string& s, std::size_t b, std::size_t e) {
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return {b, e};
}

double parse_double(const std::string& s, std::size_t b, std::size_t e, int line, int column) {
  std::tie(b, e) = trim_bounds(s, b, e);
  if (b < e && s[b] == '+') ++b;
  double v = 0.0;
  const auto res = std::from_chars(s.data() + b, s.data() + e, v);
  if (b == e || res.ec != std::errc() || res.ptr != s.data() + e || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + s.substr(b, e - b) + "'", line,
                      column + static_cast<int>(b));
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& s, int line, int column) {
  const auto [b, e] = trim_bounds(s, 0, s.size());
  Int v{};
  const auto res = std::from_chars(s.data() + b, s.data() + e, v);
  if (b == e || res.ec != std::errc() || res.ptr != s.data() + e) {
    throw ConfigError("expected an integer, got '" + s.substr(b, e - b) + "'", line,
                      column + static_cast<int>(b));
  }
  return v;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(located(what, line, column)), line_(line), column_(column) {}

NonlinearitySpec RunConfig::spec() const { return NonlinearitySpec::from_terms(nonlinearity); }

double RunConfig::tolerance(const std::string& key) const {
  const auto it = tolerances.find(key);
  if (it == tolerances.end()) throw ConfigError("no tolerance named '" + key + "'");
  return it->second;
}

std::vector<double> parse_number_list(const std::string& text, int line, int column) {
  std::vector<double> out;
  std::size_t b = 0;
  if (trim_bounds(text, 0, text.size()).first == text.size()) return out;
  while (true) {
    const std::size_t e = std::min(text.find(',', b), text.size());
    out.push_back(parse_double(text, b, e, line, column));
    if (e == text.size()) break;
    b = e + 1;
  }
  return out;
}

std::vector<PowerTerm> parse_nonlinearity(const std::string& text, int line, int column) {
  std::vector<PowerTerm> terms;
  std::size_t i = 0;
  const std::size_t n = text.size();
  auto skip = [&] {
    while (i < n && is_space(text[i])) ++i;
  };
  auto fail = [&](const std::string& what) {
    throw ConfigError(what, line, column + static_cast<int>(std::min(i, n)));
  };
  double sign = 1.0;
  skip();
  if (i == n) fail("empty nonlinearity");
  while (true) {
    skip();
    if (i < n && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -sign : sign;
      ++i;
      skip();
    }
    double coef = 1.0;
    if (i < n && text[i] != 'u' && text[i] != 't') {
      std::size_t e = i;
      while (e < n && text[e] != '*' && text[e] != 'u' && text[e] != 't') ++e;
      coef = parse_double(text, i, e, line, column);
      i = e;
      if (i < n && text[i] == '*') ++i;
      skip();
    }
    if (i >= n || (text[i] != 'u' && text[i] != 't')) fail("expected a term of the form c*u^p");
    ++i;
    skip();
    if (i >= n || text[i] != '^') fail("expected '^' after the variable");
    ++i;
    std::size_t e = i;
    while (e < n && text[e] != '+' && !(text[e] == '-' && e > i && text[e - 1] != 'e' && text[e - 1] != 'E')) ++e;
    const double p = parse_double(text, i, e, line, column);
    terms.push_back({sign * coef, p});
    i = e;
    sign = 1.0;
    if (i >= n) break;
  }
  std::sort(terms.begin(), terms.end(),
            [](const PowerTerm& a, const PowerTerm& b) { return a.exponent < b.exponent; });
  return terms;
}

std::string format_nonlinearity(const std::vector<PowerTerm>& terms) {
  std::string out;
  for (const auto& t : terms) {
    char buf[64];
    if (t.coefficient == 1.0) {
      std::snprintf(buf, sizeof buf, "u^%g", t.exponent);
    } else {
      std::snprintf(buf, sizeof buf, "%g*u^%g", t.coefficient, t.exponent);
    }
    if (!out.empty()) out += " + ";
    out += buf;
  }
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(const std::string&, int, int)>;
  const std::map<std::string, std::map<std::string, Setter>> keys{
      {"model",
       {{"dimension", [&](const std::string& v, int l, int c) { cfg.dimension = parse_int<int>(v, l, c); }},
        {"nonlinearity",
         [&](const std::string& v, int l, int c) { cfg.nonlinearity = parse_nonlinearity(v, l, c); }}}},
      {"solve",
       {{"omega", [&](const std::string& v, int l, int c) { cfg.omega_list = parse_number_list(v, l, c); }}}},
      {"grid",
       {{"r_max", [&](const std::string& v, int l, int c) { cfg.grid.r_max = parse_double(v, 0, v.size(), l, c); }},
        {"n", [&](const std::string& v, int l, int c) { cfg.grid.n = parse_int<std::size_t>(v, l, c); }},
        {"ladder_depth",
         [&](const std::string& v, int l, int c) { cfg.grid.ladder_depth = parse_int<int>(v, l, c); }}}},
      {"spectrum",
       {{"k_max", [&](const std::string& v, int l, int c) { cfg.k_max = parse_int<int>(v, l, c); }},
        {"eigen_count",
         [&](const std::string& v, int l, int c) { cfg.eigen_count = parse_int<std::size_t>(v, l, c); }},
        {"random_vectors",
         [&](const std::string& v, int l, int c) { cfg.random_vectors = parse_int<int>(v, l, c); }},
        {"seed", [&](const std::string& v, int l, int c) { cfg.seed = parse_int<std::uint64_t>(v, l, c); }}}},
      {"resolvent",
       {{"s", [&](const std::string& v, int l, int c) { cfg.s_list = parse_number_list(v, l, c); }}}},
      {"output",
       {{"format",
         [&](const std::string& v, int l, int c) {
           const auto [b, e] = trim_bounds(v, 0, v.size());
           const auto f = v.substr(b, e - b);
           if (f == "csv") {
             cfg.format = Format::csv;
           } else if (f == "json") {
             cfg.format = Format::json;
           } else {
             throw ConfigError("format must be csv or json", l, c + static_cast<int>(b));
           }
         }},
        {"path",
         [&](const std::string& v, int, int) {
           const auto [b, e] = trim_bounds(v, 0, v.size());
           cfg.output_path = v.substr(b, e - b);
         }}}},
  };

  std::istringstream in(text);
  std::string raw, section;
  std::set<std::string> seen;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::size_t hash = raw.find('#');
    const std::string body = raw.substr(0, hash);
    const auto [b, e] = trim_bounds(body, 0, body.size());
    if (b == e) continue;
    if (body[b] == '[') {
      if (body[e - 1] != ']') throw ConfigError("unterminated section header", line, static_cast<int>(e));
      const auto [sb, se] = trim_bounds(body, b + 1, e - 1);
      section = body.substr(sb, se - sb);
      if (!keys.count(section) && section != "tolerances") {
        throw ConfigError("unknown section '" + section + "'", line, static_cast<int>(sb) + 1);
      }
      continue;
    }
    const std::size_t eq = body.find('=', b);
    if (eq == std::string::npos || eq >= e) {
      throw ConfigError("expected 'key = value'", line, static_cast<int>(b) + 1);
    }
    const auto [kb, ke] = trim_bounds(body, b, eq);
    const std::string key = body.substr(kb, ke - kb);
    if (section.empty()) throw ConfigError("key outside of a section", line, static_cast<int>(kb) + 1);
    if (!seen.insert(section + "." + key).second) {
      throw ConfigError("duplicate key '" + key + "'", line, static_cast<int>(kb) + 1);
    }
    const std::string value = body.substr(eq + 1, e - eq - 1);
    const int vcol = static_cast<int>(eq) + 2;
    if (section == "tolerances") {
      if (!cfg.tolerances.count(key)) {
        throw ConfigError("unknown tolerance '" + key + "'", line, static_cast<int>(kb) + 1);
      }
      cfg.tolerances[key] = parse_double(value, 0, value.size(), line, vcol);
      continue;
    }
    const auto& table = keys.at(section);
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("unknown key '" + key + "' in [" + section + "]", line, static_cast<int>(kb) + 1);
    }
    it->second(value, line, vcol);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const RunConfig& config, bool check_model) {
  if (config.dimension != 3 && config.dimension != 4) throw ConfigError("dimension must be 3 or 4");
  if (config.nonlinearity.empty()) throw ConfigError("empty nonlinearity");
  for (double w : config.omega_list) {
    if (!(w > 0.0)) throw ConfigError("omega values must be positive");
  }
  if (config.grid.n < 64) throw ConfigError("grid n must be at least 64");
  if (config.grid.r_max < 0.0) throw ConfigError("grid r_max must be >= 0");
  if (config.grid.ladder_depth < 1) throw ConfigError("ladder_depth must be >= 1");
  if (config.k_max < 0) throw ConfigError("k_max must be >= 0");
  if (config.eigen_count < 2) throw ConfigError("eigen_count must be >= 2");
  if (config.random_vectors < 1) throw ConfigError("random_vectors must be >= 1");
  if (!check_model) return;
  NonlinearitySpec spec = NonlinearitySpec::power(4.0);
  try {
    spec = config.spec();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid nonlinearity: ") + e.what());
  }
  const auto adm = check_admissibility(spec, Dimension::of(config.dimension));
  if (!adm.pass) {
    std::string msg = "nonlinearity " + format_nonlinearity(config.nonlinearity) +
                      " is not admissible in d = " + std::to_string(config.dimension) + ":";
    for (const auto& v : adm.violations) msg += " " + v + ";";
    msg.pop_back();
    throw ConfigError(msg);
  }
}

}  // namespace critsol::cli
