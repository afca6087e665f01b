#ifndef HBI_MATRIX_HPP
#define HBI_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace hbi {

/// Dense row-major matrix of doubles. Everything in this project is small
/// (dozens of rows), so no view or expression machinery.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
  std::size_t size() const { return data.size(); }

  bool operator==(const Mat&) const = default;
};

}  // namespace hbi

#endif
