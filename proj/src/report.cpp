#include "kinavg/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>

#include "kinavg/errors.hpp"
#include "kinavg/field_io.hpp"

namespace kinavg {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json real_value(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns)) {
  require(!columns_.empty(), "a table needs at least one column");
}

void Table::add(std::vector<std::string> row) {
  require(row.size() == columns_.size(), "row width does not match the header");
  rows_.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void append_row(std::string& out, const std::vector<std::string>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += quote(row[i]);
  }
  out += '\n';
}

}  // namespace

std::string Table::csv() const {
  std::string out;
  append_row(out, columns_);
  for (const auto& r : rows_) append_row(out, r);
  return out;
}

Table scaling_table(const ScalingReport& r) {
  Table t({"scale", "lhs", "rhs", "ratio", "log2_ratio"});
  for (const auto& p : r.points) {
    t.add({format_real(p.scale), format_real(p.lhs), format_real(p.rhs), format_real(p.ratio),
           format_real(std::log2(p.ratio))});
  }
  return t;
}

json to_json(const ScalingReport& r) {
  json j;
  j["id"] = r.id;
  j["claim"] = r.claim;
  j["kind"] = to_string(r.kind);
  j["params"] = r.params;
  j["grid"] = r.grid;
  if (r.seed) j["seed"] = *r.seed;
  json pts = json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"scale", real_value(p.scale)},
                   {"lhs", real_value(p.lhs)},
                   {"rhs", real_value(p.rhs)},
                   {"ratio", real_value(p.ratio)}});
  }
  j["points"] = pts;
  j["slope"] = real_value(r.fit.slope);
  j["intercept"] = real_value(r.fit.intercept);
  j["residual"] = real_value(r.fit.residual);
  j["predicted"] = real_value(r.predicted);
  j["tolerance"] = real_value(r.tolerance);
  j["check"] = r.kind == ScanKind::necessity     ? "|slope - predicted| <= tolerance"
               : r.kind == ScanKind::sufficiency ? "slope <= predicted + tolerance"
                                                 : "none";
  j["pass"] = r.pass ? json(*r.pass) : json(nullptr);
  j["verdict"] = r.verdict;
  return j;
}

void ReportSink::write(const std::string& stem, json body,
                       const std::vector<std::pair<std::string, Table>>& tables) const {
  require(!stem.empty(), "report name must not be empty");
  std::filesystem::create_directories(dir);
  if (!deterministic) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
    body["generated_at"] = stamp;
  }
  write_file_atomic(dir / (stem + ".json"), body.dump(2) + "\n");
  for (const auto& [name, table] : tables) {
    const std::string file = name.empty() ? stem + ".csv" : stem + "_" + name + ".csv";
    write_file_atomic(dir / file, table.csv());
  }
}

}  // namespace kinavg
