#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kinavg/rational.hpp"
#include "kinavg/report.hpp"

namespace kinavg {

enum class ValueType { integer, real, rational, text, choice, boolean, int_list, real_list, rational_range };

struct ConfigKey {
  std::string name;
  ValueType type;
  std::string fallback;  // default as written in a config file
  std::string help;
  std::vector<std::string> choices;  // choice keys only
};

// Every key a config file may contain, in --show-config order.
const std::vector<ConfigKey>& config_schema();
const ConfigKey& config_key(const std::string& name);
json schema_json();

// Reals accept a decimal, "<x>pi" for multiples of pi, and "2^<k>".
double parse_real(const std::string& text);

// Key/value experiment configuration. Files hold one `key = value` per line;
// '#' starts a comment. Every value is checked against the schema when set.
class ExperimentConfig {
 public:
  ExperimentConfig();

  static ExperimentConfig parse(std::istream& in, const std::string& source);
  static ExperimentConfig load(const std::filesystem::path& file);

  // Throws InputError naming `where` and the key on unknown keys or bad values.
  void set(const std::string& key, const std::string& value, const std::string& where = "");
  bool is_set(const std::string& key) const { return explicit_.count(key) > 0; }

  const std::string& text(const std::string& key) const;
  long long integer(const std::string& key) const;
  double real(const std::string& key) const;
  Rational rational(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  // lo:hi:step, inclusive of hi
  std::vector<Rational> rational_range(const std::string& key) const;

  // Value if set, otherwise `fallback`; for keys whose default depends on the command.
  long long integer_or(const std::string& key, long long fallback) const;
  double real_or(const std::string& key, double fallback) const;
  std::vector<int> integers_or(const std::string& key, std::vector<int> fallback) const;

  // `key = value` lines for every schema key
  std::string dump() const;
  json to_json() const;

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> explicit_;
};

}  // namespace kinavg
