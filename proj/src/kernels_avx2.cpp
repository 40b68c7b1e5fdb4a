// AVX2 variants. Lanes run across rows / time steps; the per-element
// operation order matches the scalar reference exactly, so outputs are
// bit-identical (abs/sqrt/compare/max are exact, sums keep scalar order).

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)

#include <immintrin.h>

#include <bit>
#include <cmath>
#include <cstdint>

#include "tailproc/kernels.hpp"

namespace tailproc::kernels {

namespace {

inline __m256d abs_pd(__m256d x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));
  return _mm256_and_pd(x, mask);
}

inline __m256d gather4(const double* data, std::size_t i, std::size_t d,
                       std::size_t j) {
  return _mm256_set_pd(data[(i + 3) * d + j], data[(i + 2) * d + j],
                       data[(i + 1) * d + j], data[(i + 0) * d + j]);
}

void row_norms_euclidean_avx2(const double* data, std::size_t n, std::size_t d,
                              double* out) {
  std::size_t i = 0;
  if (d == 1) {
    for (; i + 4 <= n; i += 4)
      _mm256_storeu_pd(out + i, abs_pd(_mm256_loadu_pd(data + i)));
    for (; i < n; ++i) out[i] = std::fabs(data[i]);
    return;
  }
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < d; ++j) {
      const __m256d x = gather4(data, i, d, j);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
    }
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(acc));
  }
  for (; i < n; ++i) {
    const double* row = data + i * d;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += row[j] * row[j];
    out[i] = std::sqrt(s);
  }
}

void row_norms_max_avx2(const double* data, std::size_t n, std::size_t d,
                        double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m = abs_pd(gather4(data, i, d, 0));
    for (std::size_t j = 1; j < d; ++j)
      m = _mm256_max_pd(m, abs_pd(gather4(data, i, d, j)));
    _mm256_storeu_pd(out + i, m);
  }
  for (; i < n; ++i) {
    const double* row = data + i * d;
    double m = std::fabs(row[0]);
    for (std::size_t j = 1; j < d; ++j) {
      const double a = std::fabs(row[j]);
      if (m < a) m = a;
    }
    out[i] = m;
  }
}

std::size_t count_greater_avx2(const double* v, std::size_t n, double level) {
  const __m256d lev = _mm256_set1_pd(level);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(v + i), lev, _CMP_GT_OQ);
    c += static_cast<std::size_t>(
        std::popcount(static_cast<unsigned>(_mm256_movemask_pd(cmp))));
  }
  for (; i < n; ++i) c += (v[i] > level) ? 1 : 0;
  return c;
}

double max_value_avx2(const double* v, std::size_t n) {
  if (n < 8) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
      if (m < v[i]) m = v[i];
    return m;
  }
  __m256d acc = _mm256_loadu_pd(v);
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(v + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = lanes[0];
  for (int k = 1; k < 4; ++k)
    if (m < lanes[k]) m = lanes[k];
  for (; i < n; ++i)
    if (m < v[i]) m = v[i];
  return m;
}

void ma_convolve_avx2(const double* innov, std::size_t n, const double* coef,
                      std::size_t taps, double* out) {
  std::size_t t = 0;
  for (; t + 4 <= n; t += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < taps; ++i) {
      const __m256d c = _mm256_set1_pd(coef[i]);
      const __m256d x = _mm256_loadu_pd(innov + t + taps - 1 - i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(c, x));
    }
    _mm256_storeu_pd(out + t, acc);
  }
  for (; t < n; ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < taps; ++i) s += coef[i] * innov[t + taps - 1 - i];
    out[t] = s;
  }
}

}  // namespace

const Impl* avx2_impl_ptr() {
  static const Impl impl = {
      "avx2",          row_norms_euclidean_avx2, row_norms_max_avx2,
      count_greater_avx2, max_value_avx2,        ma_convolve_avx2,
  };
  return &impl;
}

}  // namespace tailproc::kernels

#endif  // x86
