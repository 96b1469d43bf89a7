#include "weyl_lab/format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "weyl_lab/error.hpp"

namespace weyl_lab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {
std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_plain(std::string_view s, double& value) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    unsigned long long v = 0;
    const auto res = std::from_chars(s.data() + 2, s.data() + s.size(), v, 16);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return false;
    value = static_cast<double>(v);
    return true;
  }
  if (s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}
}  // namespace

bool parse_number(std::string_view text, double& value) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_plain(text, value);
  double num = 0.0;
  double den = 0.0;
  if (!parse_plain(text.substr(0, slash), num) || !parse_plain(text.substr(slash + 1), den) || den == 0.0) return false;
  value = num / den;
  return true;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw std::invalid_argument("CsvTable needs at least one column");
}

void CsvTable::add_row(std::span<const double> values) {
  if (values.size() != columns_.size()) fail(Errc::length_mismatch, "cli", "CSV row width does not match header");
  data_.insert(data_.end(), values.begin(), values.end());
}

void CsvTable::add_row(std::initializer_list<double> values) {
  add_row(std::span<const double>(values.begin(), values.size()));
}

void CsvTable::write(std::ostream& out) const {
  for (std::size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
  out << '\n';
  const std::size_t w = columns_.size();
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c = 0; c < w; ++c) out << (c ? "," : "") << format_double(data_[r * w + c]);
    out << '\n';
  }
}

void CsvTable::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, "cli", "cannot write " + path);
  write(out);
  if (!out) fail(Errc::io_error, "cli", "write failed for " + path);
}

}  // namespace weyl_lab
