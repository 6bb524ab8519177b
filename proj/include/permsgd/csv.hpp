#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace permsgd {

/// 17 significant digits, enough to round-trip any double.
std::string csv_number(double value);

/// Parses a csv_number() field, including "inf", "-inf" and "nan".
double parse_number(std::string_view field);

/// Minimal CSV table: header plus string rows. Fields never contain commas
/// in the files this project writes, so no quoting is supported.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index by name; throws std::out_of_range when absent.
  std::size_t column(std::string_view name) const;
  const std::string& at(std::size_t row, std::string_view name) const;
  double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

std::vector<std::string> split(std::string_view text, char sep);

}  // namespace permsgd
