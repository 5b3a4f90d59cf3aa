#pragma once

// Minimal self-contained SVG line charts (polyline + markers + legend).
// Pure function of the data, so chart files are reproducible byte for
// byte.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace chainsim {

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (x, y), sorted by x
};

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Fixed-point coordinate text keeps the SVG stable across platforms.
inline std::string fmt_coord(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string render_line_chart(const std::string& title, const std::string& x_label,
                                     const std::string& y_label,
                                     const std::vector<ChartSeries>& series,
                                     int width = 720, int height = 440) {
  if (series.empty()) throw std::invalid_argument("render_line_chart: no series");
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr int kPaletteSize = 8;

  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool any = false;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!any) throw std::invalid_argument("render_line_chart: all series empty");
  if (ymin > 0) ymin = 0;  // anchor nonnegative data at zero
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  ymax += (ymax - ymin) * 0.05;  // headroom so the top marker is visible

  const double ml = 72, mr = 168, mt = 48, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + detail::fmt_coord(ml + pw / 2) + "\" y=\"24\" font-family=\"sans-serif\" "
         "font-size=\"16\" text-anchor=\"middle\">" + detail::xml_escape(title) + "</text>\n";

  // Gridlines and tick labels (5 divisions per axis).
  for (int i = 0; i <= 5; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 5.0;
    const double fy = ymin + (ymax - ymin) * i / 5.0;
    const std::string gx = detail::fmt_coord(sx(fx));
    const std::string gy = detail::fmt_coord(sy(fy));
    svg += "<line x1=\"" + gx + "\" y1=\"" + detail::fmt_coord(mt) + "\" x2=\"" + gx +
           "\" y2=\"" + detail::fmt_coord(mt + ph) + "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + detail::fmt_coord(ml) + "\" y1=\"" + gy + "\" x2=\"" +
           detail::fmt_coord(ml + pw) + "\" y2=\"" + gy +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + gx + "\" y=\"" + detail::fmt_coord(mt + ph + 18) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" +
           detail::fmt_num(fx) + "</text>\n";
    svg += "<text x=\"" + detail::fmt_coord(ml - 8) + "\" y=\"" + detail::fmt_coord(sy(fy) + 4) +
           "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" +
           detail::fmt_num(fy) + "</text>\n";
  }
  // Axes.
  svg += "<line x1=\"" + detail::fmt_coord(ml) + "\" y1=\"" + detail::fmt_coord(mt) + "\" x2=\"" +
         detail::fmt_coord(ml) + "\" y2=\"" + detail::fmt_coord(mt + ph) +
         "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg += "<line x1=\"" + detail::fmt_coord(ml) + "\" y1=\"" + detail::fmt_coord(mt + ph) +
         "\" x2=\"" + detail::fmt_coord(ml + pw) + "\" y2=\"" + detail::fmt_coord(mt + ph) +
         "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  svg += "<text x=\"" + detail::fmt_coord(ml + pw / 2) + "\" y=\"" +
         detail::fmt_coord(height - 12.0) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
         detail::xml_escape(x_label) + "</text>\n";
  svg += "<text x=\"18\" y=\"" + detail::fmt_coord(mt + ph / 2) +
         "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 18 " + detail::fmt_coord(mt + ph / 2) + ")\">" +
         detail::xml_escape(y_label) + "</text>\n";

  // Series polylines, markers, legend.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % kPaletteSize];
    const auto& s = series[si];
    if (!s.points.empty()) {
      std::string pts;
      for (const auto& [x, y] : s.points) {
        if (!pts.empty()) pts += " ";
        pts += detail::fmt_coord(sx(x)) + "," + detail::fmt_coord(sy(y));
      }
      svg += std::string("<polyline fill=\"none\" stroke=\"") + color +
             "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
      for (const auto& [x, y] : s.points)
        svg += std::string("<circle cx=\"") + detail::fmt_coord(sx(x)) + "\" cy=\"" +
               detail::fmt_coord(sy(y)) + "\" r=\"3\" fill=\"" + color + "\"/>\n";
    }
    const double ly = mt + 16 + 22.0 * static_cast<double>(si);
    svg += std::string("<line x1=\"") + detail::fmt_coord(ml + pw + 16) + "\" y1=\"" +
           detail::fmt_coord(ly - 4) + "\" x2=\"" + detail::fmt_coord(ml + pw + 44) +
           "\" y2=\"" + detail::fmt_coord(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + detail::fmt_coord(ml + pw + 50) + "\" y=\"" + detail::fmt_coord(ly) +
           "\" font-family=\"sans-serif\" font-size=\"12\">" + detail::xml_escape(s.label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace chainsim
