#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kinavg/scaling.hpp"

namespace kinavg {

using json = nlohmann::ordered_json;

// Shortest decimal that reads back to the same double; "inf", "-inf", "nan"
// for the special values.
std::string format_real(double v);

// CSV with a header row. Cells are preformatted strings; quoting is applied
// to cells containing a comma, quote or newline.
class Table {
 public:
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  void add(std::vector<std::string> row);
  std::string csv() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

// scale, lhs, rhs, ratio, log2_ratio
Table scaling_table(const ScalingReport& r);
json to_json(const ScalingReport& r);

// Non-finite doubles become the strings of format_real; JSON has no literal
// for them.
json real_value(double v);

struct ReportSink {
  std::filesystem::path dir;
  bool deterministic = false;

  // Writes <stem>.json and one <stem>[_<name>].csv per table, each through a
  // temporary and a rename. Adds a generated_at field unless deterministic.
  void write(const std::string& stem, json body,
             const std::vector<std::pair<std::string, Table>>& tables = {}) const;
};

}  // namespace kinavg
