#pragma once

#include <optional>
#include <string>
#include <vector>

namespace chillops::csv {

/// A delimited text table: leading '#' comment lines, one header row, data
/// rows. Cells are kept as raw strings; numeric conversion happens at the
/// call site so parse failures can be reported per row.
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by header name, or -1.
  int column(const std::string& name) const;
};

Table read_file(const std::string& path, char delim = ',');
Table read_string(const std::string& text, char delim = ',');

std::vector<std::string> split(const std::string& line, char delim);

/// Full-precision double formatting (%.17g); parse_double round-trips it.
std::string format_double(double v);

/// Strict double parse of a whole cell. Returns nullopt on any trailing
/// garbage, empty cell, or non-numeric text (including "NaN" by policy:
/// the ingest layer treats non-finite cells as rejects).
std::optional<double> parse_double(const std::string& cell);

class Writer {
 public:
  explicit Writer(char delim = ',') : delim_(delim) {}
  void comment(const std::string& line);
  void row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }
  void write_file(const std::string& path) const;

 private:
  char delim_;
  std::string out_;
};

}  // namespace chillops::csv
