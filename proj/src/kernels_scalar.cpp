#include <cmath>
#include <cstddef>

#include "tailproc/kernels.hpp"

namespace tailproc::kernels {

namespace {

void row_norms_euclidean_scalar(const double* data, std::size_t n, std::size_t d,
                                double* out) {
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::fabs(data[i]);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data + i * d;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += row[j] * row[j];
    out[i] = std::sqrt(s);
  }
}

void row_norms_max_scalar(const double* data, std::size_t n, std::size_t d,
                          double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = data + i * d;
    double m = std::fabs(row[0]);
    for (std::size_t j = 1; j < d; ++j) {
      const double a = std::fabs(row[j]);
      if (m < a) m = a;
    }
    out[i] = m;
  }
}

std::size_t count_greater_scalar(const double* v, std::size_t n, double level) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += (v[i] > level) ? 1 : 0;
  return c;
}

double max_value_scalar(const double* v, std::size_t n) {
  double m = v[0];
  for (std::size_t i = 1; i < n; ++i)
    if (m < v[i]) m = v[i];
  return m;
}

void ma_convolve_scalar(const double* innov, std::size_t n, const double* coef,
                        std::size_t taps, double* out) {
  for (std::size_t t = 0; t < n; ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < taps; ++i) s += coef[i] * innov[t + taps - 1 - i];
    out[t] = s;
  }
}

}  // namespace

const Impl& scalar_impl() {
  static const Impl impl = {
      "scalar",          row_norms_euclidean_scalar, row_norms_max_scalar,
      count_greater_scalar, max_value_scalar,        ma_convolve_scalar,
  };
  return impl;
}

}  // namespace tailproc::kernels
