#include "artifacts.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pwinterp::cli {

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) throw std::logic_error("csv row width does not match the header");
  rows_.push_back(std::move(row));
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ostringstream out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!std::isfinite(row[i])) throw std::runtime_error("non-finite value in column " + columns_[i]);
      out << (i ? "," : "") << format_number(row[i]);
    }
    out << '\n';
  }
  write_text(path, out.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

namespace {

constexpr double kWidth = 640, kHeight = 440;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;

std::string fixed(double v, int digits = 2) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
    << "</text>\n";
  return s.str();
}

}  // namespace

std::string loglog_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0) || !(s.y[i] > 0.0)) continue;
      xmin = std::min(xmin, std::log10(s.x[i]));
      xmax = std::max(xmax, std::log10(s.x[i]));
      ymin = std::min(ymin, std::log10(s.y[i]));
      ymax = std::max(ymax, std::log10(s.y[i]));
    }
  }
  if (!std::isfinite(xmin)) xmin = -1, xmax = 0, ymin = -1, ymax = 0;
  // Whole decades around the data.
  xmin = std::floor(xmin), xmax = std::max(std::ceil(xmax), xmin + 1);
  ymin = std::floor(ymin), ymax = std::max(std::ceil(ymax), ymin + 1);
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double lx) { return kLeft + (lx - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double ly) { return kTop + (ymax - ly) / (ymax - ymin) * ph; };

  std::ostringstream s;
  s << header(title);
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double d = xmin; d <= xmax + 0.5; d += 1) {
    s << "<line x1=\"" << fixed(sx(d)) << "\" y1=\"" << kTop << "\" x2=\"" << fixed(sx(d)) << "\" y2=\""
      << kTop + ph << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << fixed(sx(d)) << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  for (double d = ymin; d <= ymax + 0.5; d += 1) {
    s << "<line x1=\"" << kLeft << "\" y1=\"" << fixed(sy(d)) << "\" x2=\"" << kLeft + pw << "\" y2=\""
      << fixed(sy(d)) << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(sy(d) + 4) << "\" text-anchor=\"end\">1e"
      << static_cast<int>(d) << "</text>\n";
  }
  s << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 16 << "\" text-anchor=\"middle\">"
    << escape(x_label) << "</text>\n";
  s << "<text transform=\"translate(18," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << escape(y_label) << "</text>\n";

  double legend_y = kTop + 10;
  for (const auto& ser : series) {
    std::string points;
    for (std::size_t i = 0; i < ser.x.size(); ++i) {
      if (!(ser.x[i] > 0.0) || !(ser.y[i] > 0.0)) continue;
      const double px = sx(std::log10(ser.x[i])), py = sy(std::log10(ser.y[i]));
      points += fixed(px) + "," + fixed(py) + " ";
      s << "<circle cx=\"" << fixed(px) << "\" cy=\"" << fixed(py) << "\" r=\"3\" fill=\"" << ser.color
        << "\"/>\n";
    }
    if (!points.empty()) points.pop_back();
    s << "<polyline points=\"" << points << "\" fill=\"none\" stroke=\"" << ser.color
      << "\" stroke-width=\"1.5\"/>\n";
    s << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << legend_y << "\" x2=\"" << kLeft + pw + 32
      << "\" y2=\"" << legend_y << "\" stroke=\"" << ser.color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << legend_y + 4 << "\">" << escape(ser.label)
      << "</text>\n";
    legend_y += 18;
  }
  s << "</svg>\n";
  return s.str();
}

std::string mesh_svg(const std::string& title, const std::vector<Triangle2>& cells, const std::vector<double>& px,
                     const std::vector<double>& py) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  auto grow = [&](double x, double y) {
    xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  };
  for (const auto& t : cells)
    for (int k = 0; k < 3; ++k) grow(t.x[k], t.y[k]);
  for (std::size_t i = 0; i < px.size(); ++i) grow(px[i], py[i]);
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  const double side = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double size = std::min(kWidth - 2 * 40, kHeight - kTop - 20);
  auto sx = [&](double x) { return (kWidth - size) / 2 + (x - xmin) / side * size; };
  auto sy = [&](double y) { return kTop + (ymax - y) / side * size; };

  std::ostringstream s;
  s << header(title);
  for (const auto& t : cells) {
    s << "<polygon points=\"";
    for (int k = 0; k < 3; ++k) s << (k ? " " : "") << fixed(sx(t.x[k])) << ',' << fixed(sy(t.y[k]));
    s << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.6\"/>\n";
  }
  for (std::size_t i = 0; i < px.size(); ++i) {
    s << "<circle cx=\"" << fixed(sx(px[i])) << "\" cy=\"" << fixed(sy(py[i])) << "\" r=\"2\" fill=\"#c0392b\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace pwinterp::cli
