#pragma once

// Minimal SVG rendering for line charts and the region map. Geometry is
// printed with fixed precision so identical inputs give identical files.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qi/cli/table.hpp"

namespace qi::cli::svg {

struct Series {
  std::string name;
  std::string color = "#000000";
  bool dashed = false;
  bool markers = false;  // draw points instead of a polyline
  std::vector<std::pair<double, double>> points;
  std::vector<std::pair<double, double>> errorBars;  // (low, high) per point, optional
};

struct Frame {
  double width = 640, height = 480;
  double left = 70, right = 20, top = 40, bottom = 60;
  double xMin = 0, xMax = 1, yMin = 0, yMax = 1;

  double x(double v) const { return left + (v - xMin) / (xMax - xMin) * (width - left - right); }
  double y(double v) const { return height - bottom - (v - yMin) / (yMax - yMin) * (height - top - bottom); }
};

inline std::string f2(double v) { return formatFixed(v, 2); }

inline void axes(std::ostringstream& os, const Frame& fr, const std::string& title, const std::string& xLabel,
                 const std::string& yLabel) {
  os << "<rect x=\"" << f2(fr.left) << "\" y=\"" << f2(fr.top) << "\" width=\"" << f2(fr.width - fr.left - fr.right)
     << "\" height=\"" << f2(fr.height - fr.top - fr.bottom) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double xv = fr.xMin + (fr.xMax - fr.xMin) * k / 5.0;
    const double yv = fr.yMin + (fr.yMax - fr.yMin) * k / 5.0;
    os << "<text x=\"" << f2(fr.x(xv)) << "\" y=\"" << f2(fr.height - fr.bottom + 18)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << formatFixed(xv, 2) << "</text>\n";
    os << "<text x=\"" << f2(fr.left - 8) << "\" y=\"" << f2(fr.y(yv) + 4)
       << "\" font-size=\"12\" text-anchor=\"end\">" << formatFixed(yv, 2) << "</text>\n";
  }
  os << "<text x=\"" << f2(fr.width / 2) << "\" y=\"" << f2(fr.top - 14)
     << "\" font-size=\"15\" text-anchor=\"middle\">" << title << "</text>\n";
  os << "<text x=\"" << f2(fr.width / 2) << "\" y=\"" << f2(fr.height - 18)
     << "\" font-size=\"13\" text-anchor=\"middle\">" << xLabel << "</text>\n";
  os << "<text x=\"16\" y=\"" << f2(fr.height / 2) << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << f2(fr.height / 2) << ")\">" << yLabel << "</text>\n";
}

inline std::string header(const Frame& fr) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f2(fr.width) << "\" height=\"" << f2(fr.height)
     << "\" viewBox=\"0 0 " << f2(fr.width) << ' ' << f2(fr.height) << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  return os.str();
}

inline void polyline(std::ostringstream& os, const Frame& fr, const std::vector<std::pair<double, double>>& pts,
                     const std::string& color, bool dashed) {
  if (pts.empty()) return;
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
  if (dashed) os << " stroke-dasharray=\"6 4\"";
  os << " points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) os << (i ? " " : "") << f2(fr.x(pts[i].first)) << ',' << f2(fr.y(pts[i].second));
  os << "\"/>\n";
}

inline std::string lineChart(const std::string& title, const std::string& xLabel, const std::string& yLabel,
                             const std::vector<Series>& series, std::optional<std::pair<double, double>> yRange = {}) {
  Frame fr;
  if (yRange) {
    fr.yMin = yRange->first;
    fr.yMax = yRange->second;
  } else {
    double hi = 0.0;
    for (const auto& s : series) {
      for (const auto& p : s.points) hi = std::max(hi, p.second);
      for (const auto& e : s.errorBars) hi = std::max(hi, e.second);
    }
    fr.yMax = hi > 0 ? hi * 1.1 : 1.0;
  }
  std::ostringstream os;
  os << header(fr);
  axes(os, fr, title, xLabel, yLabel);
  for (const auto& s : series) {
    if (!s.markers) {
      polyline(os, fr, s.points, s.color, s.dashed);
      continue;
    }
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto [px, py] = s.points[i];
      if (i < s.errorBars.size()) {
        os << "<line x1=\"" << f2(fr.x(px)) << "\" x2=\"" << f2(fr.x(px)) << "\" y1=\"" << f2(fr.y(s.errorBars[i].first))
           << "\" y2=\"" << f2(fr.y(s.errorBars[i].second)) << "\" stroke=\"" << s.color << "\"/>\n";
      }
      os << "<circle cx=\"" << f2(fr.x(px)) << "\" cy=\"" << f2(fr.y(py)) << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
    }
  }
  // legend
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ly = fr.top + 16 + 16 * static_cast<double>(i);
    os << "<line x1=\"" << f2(fr.width - 210) << "\" x2=\"" << f2(fr.width - 185) << "\" y1=\"" << f2(ly - 4)
       << "\" y2=\"" << f2(ly - 4) << "\" stroke=\"" << series[i].color << "\" stroke-width=\"2\""
       << (series[i].dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    os << "<text x=\"" << f2(fr.width - 180) << "\" y=\"" << f2(ly) << "\" font-size=\"12\">" << series[i].name
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

struct Cell2D {
  double x, y;
  std::string color;
};

/// Colored cells on the unit square plus overlay polylines.
inline std::string regionMap(const std::string& title, const std::string& xLabel, const std::string& yLabel,
                             const std::vector<Cell2D>& cells, double cellW, double cellH,
                             const std::vector<Series>& overlays) {
  Frame fr;
  fr.height = 560;
  std::ostringstream os;
  os << header(fr);
  const double w = cellW / (fr.xMax - fr.xMin) * (fr.width - fr.left - fr.right);
  const double h = cellH / (fr.yMax - fr.yMin) * (fr.height - fr.top - fr.bottom);
  for (const auto& c : cells) {
    os << "<rect x=\"" << f2(fr.x(c.x) - w / 2) << "\" y=\"" << f2(fr.y(c.y) - h / 2) << "\" width=\"" << f2(w)
       << "\" height=\"" << f2(h) << "\" fill=\"" << c.color << "\"/>\n";
  }
  for (const auto& s : overlays) polyline(os, fr, s.points, s.color, s.dashed);
  axes(os, fr, title, xLabel, yLabel);
  os << "</svg>\n";
  return os.str();
}

}  // namespace qi::cli::svg
