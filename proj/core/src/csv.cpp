#include "eec/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace eec {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string to_csv(const SweepResult& result) {
  std::string out;
  for (const auto& [key, value] : result.metadata) out += "# " + key + ": " + value + "\n";
  std::string header;
  for (const auto& column : result.param_columns) header += csv_field(column) + ",";
  header += "metric,analytic,simulated,std_error,note\n";
  out += header;
  for (const auto& row : result.rows) {
    if (row.params.size() != result.param_columns.size()) {
      throw std::logic_error("to_csv: row has " + std::to_string(row.params.size()) +
                             " parameter values for " +
                             std::to_string(result.param_columns.size()) + " columns");
    }
    for (const auto& p : row.params) out += csv_field(p) + ",";
    out += csv_field(row.metric) + "," + format_number(row.analytic) + ",";
    out += (row.simulated ? format_number(*row.simulated) : std::string()) + ",";
    out += (row.std_error ? format_number(*row.std_error) : std::string()) + ",";
    out += csv_field(row.note) + "\n";
  }
  return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message());
  }
}

}  // namespace eec
