#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace glmdiag {

// Minimal standalone SVG scatter/band plots.  Output is deterministic for
// identical input (fixed formatting, no timestamps) and carries the plotted
// numbers inside a <desc> block so the graphic doubles as a data file.

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
};

struct PlotBand {            // per-x lower/upper envelope
  double x = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct SvgPlot {
  std::string title;
  std::string xlabel;
  std::string ylabel;
  std::vector<PlotPoint> points;
  std::vector<PlotBand> bands;   // optional
  std::vector<PlotPoint> line;   // optional reference line
};

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Ticks {
  std::vector<double> at;
};

// round tick spacing to 1/2/5 x 10^k
inline Ticks nice_ticks(double lo, double hi) {
  Ticks t;
  if (!(hi > lo)) {
    hi = lo + 1.0;
    lo -= 1.0;
  }
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  const double start = std::ceil(lo / step) * step;
  for (double v = start; v <= hi + 1e-9 * step; v += step) t.at.push_back(v);
  return t;
}

}  // namespace detail

inline std::string render_svg(const SvgPlot& plot) {
  const double width = 560.0, height = 420.0;
  const double ml = 64.0, mr = 16.0, mt = 36.0, mb = 48.0;

  double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
  auto extend = [&](double x, double y) {
    xlo = std::min(xlo, x); xhi = std::max(xhi, x);
    ylo = std::min(ylo, y); yhi = std::max(yhi, y);
  };
  for (const auto& p : plot.points) extend(p.x, p.y);
  for (const auto& b : plot.bands) { extend(b.x, b.lower); extend(b.x, b.upper); }
  for (const auto& p : plot.line) extend(p.x, p.y);
  if (xlo > xhi) { xlo = 0.0; xhi = 1.0; ylo = 0.0; yhi = 1.0; }
  const double xpad = 0.04 * (xhi - xlo + 1e-12), ypad = 0.06 * (yhi - ylo + 1e-12);
  xlo -= xpad; xhi += xpad; ylo -= ypad; yhi += ypad;

  auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (width - ml - mr); };
  auto py = [&](double y) { return height - mb - (y - ylo) / (yhi - ylo) * (height - mt - mb); };

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";

  // embedded data table
  out << "<desc>\n";
  if (!plot.bands.empty()) {
    out << "x\tlower\tupper\n";
    for (const auto& b : plot.bands) {
      out << detail::fmt(b.x) << '\t' << detail::fmt(b.lower) << '\t' << detail::fmt(b.upper)
          << '\n';
    }
  }
  out << "x\ty\n";
  for (const auto& p : plot.points) out << detail::fmt(p.x) << '\t' << detail::fmt(p.y) << '\n';
  out << "</desc>\n";

  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

  // band polygon under everything else
  if (!plot.bands.empty()) {
    out << "<polygon fill=\"#c9d8ef\" stroke=\"none\" points=\"";
    for (const auto& b : plot.bands) out << detail::fmt(px(b.x)) << ',' << detail::fmt(py(b.upper)) << ' ';
    for (auto it = plot.bands.rbegin(); it != plot.bands.rend(); ++it) {
      out << detail::fmt(px(it->x)) << ',' << detail::fmt(py(it->lower)) << ' ';
    }
    out << "\"/>\n";
    for (bool upper : {false, true}) {
      out << "<polyline fill=\"none\" stroke=\"#4a6da7\" stroke-width=\"1\" points=\"";
      for (const auto& b : plot.bands) {
        out << detail::fmt(px(b.x)) << ',' << detail::fmt(py(upper ? b.upper : b.lower)) << ' ';
      }
      out << "\"/>\n";
    }
  }
  if (!plot.line.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"4 3\" points=\"";
    for (const auto& p : plot.line) out << detail::fmt(px(p.x)) << ',' << detail::fmt(py(p.y)) << ' ';
    out << "\"/>\n";
  }

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << height - mb
      << "\" stroke=\"black\"/>\n";
  for (double t : detail::nice_ticks(xlo, xhi).at) {
    out << "<line x1=\"" << detail::fmt(px(t)) << "\" y1=\"" << height - mb << "\" x2=\""
        << detail::fmt(px(t)) << "\" y2=\"" << height - mb + 4 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << detail::fmt(px(t)) << "\" y=\"" << height - mb + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << detail::fmt(t) << "</text>\n";
  }
  for (double t : detail::nice_ticks(ylo, yhi).at) {
    out << "<line x1=\"" << ml - 4 << "\" y1=\"" << detail::fmt(py(t)) << "\" x2=\"" << ml
        << "\" y2=\"" << detail::fmt(py(t)) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 8 << "\" y=\"" << detail::fmt(py(t) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << detail::fmt(t) << "</text>\n";
  }

  for (const auto& p : plot.points) {
    out << "<circle cx=\"" << detail::fmt(px(p.x)) << "\" cy=\"" << detail::fmt(py(p.y))
        << "\" r=\"2.6\" fill=\"#202020\"/>\n";
  }

  out << "<text x=\"" << width / 2 << "\" y=\"" << mt - 14
      << "\" font-size=\"14\" text-anchor=\"middle\">" << plot.title << "</text>\n";
  out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"12\" text-anchor=\"middle\">" << plot.xlabel << "</text>\n";
  out << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">" << plot.ylabel << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

}  // namespace glmdiag
