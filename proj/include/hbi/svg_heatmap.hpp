#ifndef HBI_SVG_HEATMAP_HPP
#define HBI_SVG_HEATMAP_HPP

#include <string>
#include <vector>

#include "hbi/matrix.hpp"

namespace hbi {

struct HeatmapSpec {
  std::string title;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
};

/// Renders the matrix as an SVG heatmap: linear color scale over four stops
/// (low to high: blue, green, orange, red), min/max annotated under the
/// grid. Output depends only on the inputs; nothing volatile (timestamps,
/// pointers) is embedded.
std::string render_heatmap_svg(const Mat& values, const HeatmapSpec& spec);

}  // namespace hbi

#endif
