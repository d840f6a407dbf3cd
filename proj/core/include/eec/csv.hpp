#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eec {

struct SweepRow {
  std::vector<std::string> params;  // one entry per SweepResult::param_columns
  std::string metric;
  double analytic = 0.0;
  std::optional<double> simulated;
  std::optional<double> std_error;
  std::string note;
};

/// Tabular command output. Metadata lines are written as `# key: value`
/// comments ahead of the header row.
struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> param_columns;
  std::vector<SweepRow> rows;
};

/// RFC 4180 field quoting: fields containing a comma, quote, CR or LF are
/// wrapped in quotes with embedded quotes doubled.
std::string csv_field(const std::string& text);

/// Shortest round-trip decimal for finite values; "inf", "-inf", "nan"
/// otherwise.
std::string format_number(double value);

/// Metadata comments, header `<params...>,metric,analytic,simulated,std_error,note`,
/// then one line per row, each ending in "\n".
std::string to_csv(const SweepResult& result);

/// Writes `content` to a temporary sibling and renames it over `path`, so
/// readers never see a partial file. Throws std::runtime_error on failure.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace eec
