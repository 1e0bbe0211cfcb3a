#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kToolVersion = "qbmgap 0.1.0";

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string config_hash;
  std::string version = kToolVersion;

  /// Throws DimensionMismatch if the row width differs from the header.
  void add_row(std::vector<double> row);
  std::size_t column_index(std::string_view column) const;
  std::vector<double> column(std::string_view column) const;
};

/// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

/// Metadata lines start with '#'; the timestamp line is excluded from the payload.
std::string to_csv(const ResultTable& table, std::string_view timestamp = {});
/// Inverse of to_csv. Throws IoError on malformed input.
ResultTable parse_csv(std::string_view text);
/// Everything except lines starting with '#'.
std::string csv_payload(std::string_view csv_text);

void emit_csv(const ResultTable& table, const std::string& path, std::string_view timestamp = {});

struct PlotSpec {
  std::string x;
  std::vector<std::string> y;  // empty: every other column
  std::string group;           // split each series by the values of this column
  bool log_y = false;
  std::string title;
  int width = 720, height = 440;
};

std::string to_svg(const ResultTable& table, const PlotSpec& spec);
void emit_svg(const ResultTable& table, const PlotSpec& spec, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace qbm
