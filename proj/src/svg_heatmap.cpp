#include "hbi/svg_heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace hbi {

namespace {

struct Color {
  double r, g, b;
};

// Four-tier scale, low to high: blue, green, orange, red.
constexpr Color kStops[4] = {
    {0.13, 0.28, 0.75},
    {0.20, 0.65, 0.33},
    {0.95, 0.60, 0.10},
    {0.85, 0.16, 0.12},
};

std::string color_at(double t) {
  t = std::clamp(t, 0.0, 1.0);
  double scaled = t * 3.0;
  int lo = std::min(2, static_cast<int>(scaled));
  double f = scaled - lo;
  auto channel = [&](double a, double b) {
    int v = static_cast<int>(std::lround(255.0 * (a + (b - a) * f)));
    return std::clamp(v, 0, 255);
  };
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", channel(kStops[lo].r, kStops[lo + 1].r),
                channel(kStops[lo].g, kStops[lo + 1].g), channel(kStops[lo].b, kStops[lo + 1].b));
  return buf;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_heatmap_svg(const Mat& values, const HeatmapSpec& spec) {
  if (values.rows < 1 || values.cols < 1) throw std::invalid_argument("empty heatmap");
  if (!spec.row_labels.empty() && static_cast<int>(spec.row_labels.size()) != values.rows)
    throw std::invalid_argument("row label count mismatch");
  if (!spec.col_labels.empty() && static_cast<int>(spec.col_labels.size()) != values.cols)
    throw std::invalid_argument("col label count mismatch");

  double lo = values.data[0], hi = values.data[0];
  for (double v : values.data) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi > lo ? hi - lo : 1.0;

  const int cell = 26;
  const int left = 56, top = 42, bottom = 34;
  const int width = left + values.cols * cell + 16;
  const int height = top + values.rows * cell + bottom;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"monospace\" font-size=\"11\">\n";
  svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << left << "\" y=\"16\" font-size=\"13\">" << escape(spec.title)
      << "</text>\n";

  for (int i = 0; i < values.rows; ++i) {
    for (int j = 0; j < values.cols; ++j) {
      double t = (values(i, j) - lo) / span;
      svg << "<rect x=\"" << left + j * cell << "\" y=\"" << top + i * cell << "\" width=\""
          << cell - 1 << "\" height=\"" << cell - 1 << "\" fill=\"" << color_at(t) << "\">"
          << "<title>" << num(values(i, j)) << "</title></rect>\n";
    }
  }

  for (int i = 0; i < values.rows; ++i) {
    std::string label = spec.row_labels.empty() ? std::to_string(i) : spec.row_labels[i];
    svg << "<text x=\"" << left - 6 << "\" y=\"" << top + i * cell + cell / 2 + 4
        << "\" text-anchor=\"end\">" << escape(label) << "</text>\n";
  }
  for (int j = 0; j < values.cols; ++j) {
    std::string label = spec.col_labels.empty() ? std::to_string(j) : spec.col_labels[j];
    svg << "<text x=\"" << left + j * cell + cell / 2 << "\" y=\"" << top - 6
        << "\" text-anchor=\"middle\">" << escape(label) << "</text>\n";
  }

  svg << "<text x=\"" << left << "\" y=\"" << top + values.rows * cell + 18 << "\">min="
      << num(lo) << " max=" << num(hi) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace hbi
