#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace weyl_lab {

/// Self-contained SVG line plot: polylines with optional log axes.
/// Non-finite points and, on log axes, nonpositive ones are skipped.
class SvgPlot {
 public:
  SvgPlot(std::string title, std::string x_label, std::string y_label, bool log_x = false, bool log_y = false);

  void add_series(std::string name, std::vector<double> xs, std::vector<double> ys);
  std::string render() const;
  /// Throws Error(io_error).
  void write_file(const std::filesystem::path& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> xs;
    std::vector<double> ys;
  };

  std::string title_;
  std::string x_label_;
  std::string y_label_;
  bool log_x_;
  bool log_y_;
  std::vector<Series> series_;
};

}  // namespace weyl_lab
