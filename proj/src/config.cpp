#include "kinavg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "kinavg/errors.hpp"
#include "kinavg/symbols.hpp"

namespace kinavg {

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

long long parse_integer(const std::string& text) {
  long long v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError("not an integer: '" + text + "'");
  return v;
}

double parse_plain(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw InputError("not a number: '" + text + "'");
  return v;
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw InputError("not a boolean: '" + text + "'");
}

std::vector<Rational> expand_range(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw InputError("expected lo:hi:step, got '" + text + "'");
  const Rational lo = Rational::parse(parts[0]), hi = Rational::parse(parts[1]), step = Rational::parse(parts[2]);
  if (!(step > Rational(0))) throw InputError("range step must be positive");
  if (hi < lo) throw InputError("range is empty: '" + text + "'");
  std::vector<Rational> out;
  for (Rational v = lo; v <= hi; v += step) {
    out.push_back(v);
    if (out.size() > 10000) throw InputError("range has more than 10000 points");
  }
  return out;
}

void check_value(const ConfigKey& key, const std::string& value) {
  switch (key.type) {
    case ValueType::integer:
      parse_integer(value);
      break;
    case ValueType::real:
      parse_real(value);
      break;
    case ValueType::rational:
      Rational::parse(value);
      break;
    case ValueType::boolean:
      parse_bool(value);
      break;
    case ValueType::choice:
      if (std::find(key.choices.begin(), key.choices.end(), value) == key.choices.end()) {
        std::string all;
        for (const auto& c : key.choices) all += (all.empty() ? "" : ", ") + c;
        throw InputError("'" + value + "' is not one of: " + all);
      }
      break;
    case ValueType::int_list:
      if (!value.empty())
        for (const auto& item : split(value, ',')) parse_integer(item);
      break;
    case ValueType::real_list:
      if (!value.empty())
        for (const auto& item : split(value, ',')) parse_real(item);
      break;
    case ValueType::rational_range:
      expand_range(value);
      break;
    case ValueType::text:
      if (key.name == "symbol") parse_symbol(value);
      break;
  }
}

const char* type_name(ValueType t) {
  switch (t) {
    case ValueType::integer: return "integer";
    case ValueType::real: return "real";
    case ValueType::rational: return "rational";
    case ValueType::text: return "string";
    case ValueType::choice: return "choice";
    case ValueType::boolean: return "boolean";
    case ValueType::int_list: return "integer list";
    case ValueType::real_list: return "real list";
    case ValueType::rational_range: return "rational range";
  }
  return "?";
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  using V = ValueType;
  static const std::vector<ConfigKey> schema{
      {"command", V::choice, "selftest", "experiment to run",
       {"thresholds", "constants", "radon", "average", "duality-check", "knapp-scan", "dyadic-scan", "rho-scan",
        "funk-hecke", "sharp-radial", "extremiser", "strichartz-probe", "selftest"}},
      {"d", V::integer, "2", "spatial dimension", {}},
      {"q", V::rational, "2", "time Lebesgue exponent", {}},
      {"r", V::rational, "2", "space Lebesgue exponent", {}},
      {"alpha", V::rational, "0", "cone multiplier order", {}},
      {"kappa", V::rational, "-1", "velocity weight exponent, -1 is the sphere", {}},
      {"beta_plus", V::rational, "1/4", "D+ order", {}},
      {"beta_minus", V::rational, "1/4", "D- order", {}},
      {"grid_qr", V::rational_range, "2:8:1/2", "q and r lattice for thresholds, lo:hi:step", {}},
      {"grid.n", V::integer, "0", "points per spatial axis, 0 for the command default", {}},
      {"grid.len", V::real, "0", "spatial period, 0 for the command default", {}},
      {"grid.n_t", V::integer, "0", "points in time, 0 for the command default", {}},
      {"grid.len_t", V::real, "0", "time period, 0 for the command default", {}},
      {"measure", V::choice, "sphere", "velocity measure", {"sphere", "kappa_ball"}},
      {"measure.nodes", V::integer, "0", "angular nodes, 0 for the command default", {}},
      {"symbol", V::text, "1", "multiplier, factors joined by '*'", {}},
      {"deltas", V::real_list, "2^-3,2^-4,2^-5,2^-6,2^-7", "Knapp plate thicknesses", {}},
      {"ks", V::int_list, "3,4,5,6,7,8", "dyadic cone indices", {}},
      {"levels", V::int_list, "", "resolution ladder, empty for the command default", {}},
      {"modes", V::int_list, "0,1,2", "harmonic degrees", {}},
      {"data", V::choice, "generic", "rho-scan data family", {"generic", "radial_x"}},
      {"seed", V::integer, "1", "first random seed", {}},
      {"seeds", V::integer, "1", "number of consecutive seeds", {}},
      {"t_span", V::real, "4", "Strichartz time window", {}},
      {"steps", V::integer, "8", "Strichartz time steps", {}},
      {"radial", V::boolean, "false", "use radial data and the radial Strichartz range", {}},
      {"samples", V::integer, "200", "points on [-1, 1] for radon", {}},
      {"criteria", V::int_list, "", "acceptance criteria for selftest, empty for all", {}},
      {"output_dir", V::text, "out", "report directory", {}},
      {"deterministic", V::boolean, "false", "omit timestamps from reports", {}},
  };
  return schema;
}

const ConfigKey& config_key(const std::string& name) {
  for (const auto& k : config_schema())
    if (k.name == name) return k;
  throw InputError("unknown key '" + name + "'");
}

json schema_json() {
  json keys = json::array();
  for (const auto& k : config_schema()) {
    json e = {{"key", k.name}, {"type", type_name(k.type)}, {"default", k.fallback}, {"help", k.help}};
    if (!k.choices.empty()) e["choices"] = k.choices;
    keys.push_back(e);
  }
  return {{"format", "key = value per line, '#' comments"}, {"keys", keys}};
}

double parse_real(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw InputError("empty number");
  if (text.size() > 2 && text.ends_with("pi")) {
    const std::string head = trim(text.substr(0, text.size() - 2));
    const double k = head.empty() ? 1.0 : parse_plain(head.ends_with('*') ? trim(head.substr(0, head.size() - 1)) : head);
    return k * std::numbers::pi;
  }
  if (text == "pi") return std::numbers::pi;
  if (const auto caret = text.find('^'); caret != std::string::npos) {
    return std::pow(parse_plain(text.substr(0, caret)), parse_plain(text.substr(caret + 1)));
  }
  return parse_plain(text);
}

ExperimentConfig::ExperimentConfig() {
  for (const auto& k : config_schema()) values_[k.name] = k.fallback;
}

ExperimentConfig ExperimentConfig::parse(std::istream& in, const std::string& source) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (cfg.is_set(key)) throw InputError(where + ": key '" + key + "' given twice");
    cfg.set(key, trim(line.substr(eq + 1)), where);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open config " + file.string());
  return parse(in, file.string());
}

void ExperimentConfig::set(const std::string& key, const std::string& value, const std::string& where) {
  const std::string prefix = where.empty() ? "" : where + ": ";
  const auto it = std::find_if(config_schema().begin(), config_schema().end(),
                               [&](const ConfigKey& k) { return k.name == key; });
  if (it == config_schema().end()) throw InputError(prefix + "unknown key '" + key + "'");
  try {
    check_value(*it, value);
  } catch (const InputError& e) {
    throw InputError(prefix + "invalid value for '" + key + "': " + e.what());
  }
  values_[key] = value;
  explicit_.insert(key);
}

const std::string& ExperimentConfig::text(const std::string& key) const {
  config_key(key);
  return values_.at(key);
}

long long ExperimentConfig::integer(const std::string& key) const { return parse_integer(text(key)); }
double ExperimentConfig::real(const std::string& key) const { return parse_real(text(key)); }
Rational ExperimentConfig::rational(const std::string& key) const { return Rational::parse(text(key)); }
bool ExperimentConfig::flag(const std::string& key) const { return parse_bool(text(key)); }

std::vector<int> ExperimentConfig::integers(const std::string& key) const {
  std::vector<int> out;
  if (text(key).empty()) return out;
  for (const auto& item : split(text(key), ',')) out.push_back(static_cast<int>(parse_integer(item)));
  return out;
}

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  std::vector<double> out;
  if (text(key).empty()) return out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_real(item));
  return out;
}

std::vector<Rational> ExperimentConfig::rational_range(const std::string& key) const {
  return expand_range(text(key));
}

long long ExperimentConfig::integer_or(const std::string& key, long long fallback) const {
  const long long v = integer(key);
  return v == 0 ? fallback : v;
}

double ExperimentConfig::real_or(const std::string& key, double fallback) const {
  const double v = real(key);
  return v == 0.0 ? fallback : v;
}

std::vector<int> ExperimentConfig::integers_or(const std::string& key, std::vector<int> fallback) const {
  auto v = integers(key);
  return v.empty() ? fallback : v;
}

std::string ExperimentConfig::dump() const {
  std::ostringstream os;
  for (const auto& k : config_schema()) os << k.name << " = " << values_.at(k.name) << "\n";
  return os.str();
}

json ExperimentConfig::to_json() const {
  json j = json::object();
  for (const auto& k : config_schema()) j[k.name] = values_.at(k.name);
  return j;
}

}  // namespace kinavg
