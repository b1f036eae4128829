#pragma once

// CSV tables and SVG plots written next to report.json.

#include <filesystem>
#include <string>
#include <vector>

namespace pwinterp::cli {

/// Shortest decimal that round-trips the double.
std::string format_number(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_row(std::vector<double> row);
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  /// Throws if any cell is not finite.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
};

/// Log-log line plot with markers; non-positive points are skipped.
std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series);

struct Triangle2 {
  double x[3];
  double y[3];
};

/// Triangles outlined, points marked; for the 2-d location demo.
std::string mesh_svg(const std::string& title, const std::vector<Triangle2>& cells, const std::vector<double>& px,
                     const std::vector<double>& py);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace pwinterp::cli
