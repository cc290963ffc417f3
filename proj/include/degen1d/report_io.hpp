#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "degen1d/errors.hpp"
#include "degen1d/piecewise.hpp"

namespace degen1d {

/// 17-significant-digit float formatting; C locale semantics (decimal point).
inline std::string format_float(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string format_float(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    append_row(header);
  }

  void append_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw IoError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) body_ += ',';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  void append_numeric(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double v : cells) s.push_back(format_float(v));
    append_row(s);
  }

  const std::string& str() const { return body_; }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << body_;
  }

 private:
  std::size_t columns_;
  std::string body_;
};

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Standalone deterministic SVG: fixed canvas, polyline per series, no
/// external assets, fixed-precision coordinates.
inline std::string render_plot(const std::vector<PlotSeries>& series) {
  if (series.empty()) throw IoError("refusing to plot an empty series list");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) throw IoError("bad plot series");
    for (std::size_t i = 1; i < s.x.size(); ++i)
      if (!(s.x[i] >= s.x[i - 1])) throw IoError("plot series x must be sorted");
  }
  const int W = 800, H = 500;
  const double ml = 60, mr = 20, mt = 20, mb = 40;
  double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
  for (const auto& s : series) {
    for (double v : s.x) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) ymax = ymin + 1.0;
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb); };
  auto num = [](double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.3f", v);
    return std::string(b);
  };
  auto lbl = [](double v) {
    char b[32];
    std::snprintf(b, sizeof(b), "%.6g", v);
    return std::string(b);
  };

  static const char* palette[] = {"#1f6fb2", "#d1495b", "#3f7d20", "#8f6aa8"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"500\" "
         "viewBox=\"0 0 800 500\">\n";
  svg += "<rect width=\"800\" height=\"500\" fill=\"#ffffff\"/>\n";
  // axes
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(H - mb) + "\" x2=\"" + num(W - mr) +
         "\" y2=\"" + num(H - mb) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) + "\" y2=\"" +
         num(H - mb) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  // min/max labels
  svg += "<text x=\"" + num(ml) + "\" y=\"" + num(H - mb + 16) +
         "\" font-family=\"monospace\" font-size=\"11\">" + lbl(xmin) + "</text>\n";
  svg += "<text x=\"" + num(W - mr - 40) + "\" y=\"" + num(H - mb + 16) +
         "\" font-family=\"monospace\" font-size=\"11\">" + lbl(xmax) + "</text>\n";
  svg += "<text x=\"4\" y=\"" + num(H - mb) +
         "\" font-family=\"monospace\" font-size=\"11\">" + lbl(ymin + pad) + "</text>\n";
  svg += "<text x=\"4\" y=\"" + num(mt + 10) +
         "\" font-family=\"monospace\" font-size=\"11\">" + lbl(ymax - pad) + "</text>\n";

  int ci = 0;
  for (const auto& s : series) {
    const char* color = palette[ci % 4];
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) svg += ' ';
      svg += num(px(s.x[i])) + "," + num(py(s.y[i]));
    }
    svg += "\"/>\n";
    svg += "<text x=\"" + num(W - mr - 120) + "\" y=\"" + num(mt + 16 + 16 * ci) +
           "\" font-family=\"monospace\" font-size=\"12\" fill=\"";
    svg += color;
    svg += "\">" + s.label + "</text>\n";
    ++ci;
  }
  svg += "</svg>\n";
  return svg;
}

inline void emit_plot(const std::vector<PlotSeries>& series, const std::string& path) {
  const std::string svg = render_plot(series);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << svg;
}

}  // namespace degen1d
