#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tailflow {

/// One polyline on a chart.
struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#000000";
  std::string dash;  // empty = solid; e.g. "6,4" dashed, "1.5,3" dotted
};

/// Minimal line chart: axes, ticks, polylines, legend. No dependencies; the
/// output is a plain SVG <g> group so several charts can share one document.
class SvgLineChart {
 public:
  explicit SvgLineChart(std::string title, double width = 380,
                        double height = 300)
      : title_(std::move(title)), width_(width), height_(height) {}

  void add_series(SvgSeries s) { series_.push_back(std::move(s)); }

  void set_x_limits(double lo, double hi) { xlo_ = lo; xhi_ = hi; has_xlim_ = true; }
  void set_y_limits(double lo, double hi) { ylo_ = lo; yhi_ = hi; has_ylim_ = true; }
  void set_axis_labels(std::string x, std::string y) {
    xlabel_ = std::move(x);
    ylabel_ = std::move(y);
  }

  double width() const { return width_; }
  double height() const { return height_; }

  /// Render as a group translated to (ox, oy).
  std::string render(double ox, double oy) const;

 private:
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
  }

  std::string title_, xlabel_, ylabel_;
  double width_, height_;
  std::vector<SvgSeries> series_;
  double xlo_ = 0, xhi_ = 1, ylo_ = 0, yhi_ = 1;
  bool has_xlim_ = false, has_ylim_ = false;
};

namespace svg_detail {

inline void nice_ticks(double lo, double hi, int target, std::vector<double>& out) {
  out.clear();
  if (!(hi > lo)) {
    out.push_back(lo);
    return;
  }
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + 1e-12 * step; t += step) out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
}

}  // namespace svg_detail

inline std::string SvgLineChart::render(double ox, double oy) const {
  const double ml = 52, mr = 12, mt = 26, mb = 40;  // margins
  const double pw = width_ - ml - mr, ph = height_ - mt - mb;

  double xlo = xlo_, xhi = xhi_, ylo = ylo_, yhi = yhi_;
  if (!has_xlim_ || !has_ylim_) {
    double dxlo = 1e300, dxhi = -1e300, dylo = 1e300, dyhi = -1e300;
    for (const auto& s : series_)
      for (size_t i = 0; i < s.x.size(); ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        dxlo = std::min(dxlo, s.x[i]);
        dxhi = std::max(dxhi, s.x[i]);
        dylo = std::min(dylo, s.y[i]);
        dyhi = std::max(dyhi, s.y[i]);
      }
    if (dxlo > dxhi) { dxlo = 0; dxhi = 1; }
    if (dylo > dyhi) { dylo = 0; dyhi = 1; }
    if (dylo == dyhi) { dylo -= 0.5; dyhi += 0.5; }
    if (!has_xlim_) { xlo = dxlo; xhi = dxhi; }
    if (!has_ylim_) {
      const double pad = 0.05 * (dyhi - dylo);
      ylo = dylo - pad;
      yhi = dyhi + pad;
    }
  }

  const auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };

  std::string out;
  out += "<g transform=\"translate(" + fmt(ox) + "," + fmt(oy) + ")\" "
         "font-family=\"sans-serif\" font-size=\"11\">\n";
  out += "<rect x=\"" + fmt(ml) + "\" y=\"" + fmt(mt) + "\" width=\"" + fmt(pw) +
         "\" height=\"" + fmt(ph) + "\" fill=\"white\" stroke=\"#444\"/>\n";

  std::vector<double> ticks;
  svg_detail::nice_ticks(xlo, xhi, 5, ticks);
  for (double t : ticks) {
    out += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" +
           fmt(px(t)) + "\" y2=\"" + fmt(mt + ph + 4) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(mt + ph + 16) +
           "\" text-anchor=\"middle\">" + fmt(t) + "</text>\n";
  }
  svg_detail::nice_ticks(ylo, yhi, 5, ticks);
  for (double t : ticks) {
    out += "<line x1=\"" + fmt(ml - 4) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" +
           fmt(ml) + "\" y2=\"" + fmt(py(t)) + "\" stroke=\"#444\"/>\n";
    out += "<text x=\"" + fmt(ml - 7) + "\" y=\"" + fmt(py(t) + 4) +
           "\" text-anchor=\"end\">" + fmt(t) + "</text>\n";
  }

  for (const auto& s : series_) {
    std::string pts;
    bool pen_down = false;
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]) || s.x[i] < xlo ||
          s.x[i] > xhi) {
        pen_down = false;
        continue;
      }
      const double cy = std::clamp(s.y[i], ylo, yhi);
      pts += (pen_down ? " L" : (pts.empty() ? "M" : " M"));
      pts += fmt(px(s.x[i])) + " " + fmt(py(cy));
      pen_down = true;
    }
    out += "<path d=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
           "\" stroke-width=\"1.6\"";
    if (!s.dash.empty()) out += " stroke-dasharray=\"" + s.dash + "\"";
    out += "/>\n";
  }

  if (!title_.empty())
    out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(mt - 8) +
           "\" text-anchor=\"middle\" font-size=\"13\">" + title_ + "</text>\n";
  if (!xlabel_.empty())
    out += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(mt + ph + 32) +
           "\" text-anchor=\"middle\">" + xlabel_ + "</text>\n";
  if (!ylabel_.empty())
    out += "<text x=\"12\" y=\"" + fmt(mt + ph / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 12 " +
           fmt(mt + ph / 2) + ")\">" + ylabel_ + "</text>\n";

  // legend, top-right corner of the plot area
  double ly = mt + 12;
  for (const auto& s : series_) {
    if (s.label.empty()) continue;
    const double lx = ml + pw - 108;
    out += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly - 3) + "\" x2=\"" +
           fmt(lx + 22) + "\" y2=\"" + fmt(ly - 3) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"1.6\"";
    if (!s.dash.empty()) out += " stroke-dasharray=\"" + s.dash + "\"";
    out += "/>\n";
    out += "<text x=\"" + fmt(lx + 27) + "\" y=\"" + fmt(ly) + "\">" + s.label +
           "</text>\n";
    ly += 14;
  }

  out += "</g>\n";
  return out;
}

/// Wrap pre-rendered chart groups in an SVG document.
inline std::string svg_document(double width, double height,
                                const std::string& body) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string((int)std::lround(width)) + "\" height=\"" +
         std::to_string((int)std::lround(height)) + "\" viewBox=\"0 0 " +
         std::to_string((int)std::lround(width)) + " " +
         std::to_string((int)std::lround(height)) + "\">\n";
  out += body;
  out += "</svg>\n";
  return out;
}

/// Lay charts out left to right in a single SVG file.
inline void write_svg_row(const std::string& path,
                          const std::vector<SvgLineChart>& charts) {
  double w = 0, h = 0;
  std::string body;
  for (const auto& c : charts) {
    body += c.render(w, 0);
    w += c.width();
    h = std::max(h, c.height());
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write SVG: " + path);
  f << svg_document(w, h, body);
}

}  // namespace tailflow
