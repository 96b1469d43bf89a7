#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace weyl_lab {

/// Locale-independent decimal with 17 significant digits.
std::string format_double(double value);

/// Parses a decimal, "0x" hex integer, or a fraction "p/q". Returns false on
/// malformed input. Locale-independent.
bool parse_number(std::string_view text, double& value);

/// Minimal CSV table: fixed header, rows of doubles, "\n" line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::span<const double> values);
  void add_row(std::initializer_list<double> values);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return data_.size() / columns_.size(); }
  double at(std::size_t row, std::size_t col) const { return data_[row * columns_.size() + col]; }

  void write(std::ostream& out) const;
  /// Writes to a file in binary mode; throws Error(io_error).
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<double> data_;
};

}  // namespace weyl_lab
