#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tailproc {

using Vec = std::vector<double>;

// Small dense row-major matrix; everything in this library is low-dimensional.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  Mat(int r, int c, std::vector<double> values)
      : rows(r), cols(c), a(std::move(values)) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const {
    return a[static_cast<std::size_t>(i) * cols + j];
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat diag(std::span<const double> d) {
    Mat m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
  }
};

// y = A x
void mat_vec(const Mat& A, std::span<const double> x, std::span<double> y);
// C = A B
Mat mat_mul(const Mat& A, const Mat& B);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace tailproc
