// NEON variants (aarch64). Same lane discipline as the AVX2 file: lanes run
// across rows / time steps only, keeping outputs bit-identical to scalar.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>
#include <cstdint>

#include "tailproc/kernels.hpp"

namespace tailproc::kernels {

namespace {

inline float64x2_t gather2(const double* data, std::size_t i, std::size_t d,
                           std::size_t j) {
  float64x2_t v = vdupq_n_f64(data[i * d + j]);
  return vsetq_lane_f64(data[(i + 1) * d + j], v, 1);
}

void row_norms_euclidean_neon(const double* data, std::size_t n, std::size_t d,
                              double* out) {
  std::size_t i = 0;
  if (d == 1) {
    for (; i + 2 <= n; i += 2)
      vst1q_f64(out + i, vabsq_f64(vld1q_f64(data + i)));
    for (; i < n; ++i) out[i] = std::fabs(data[i]);
    return;
  }
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < d; ++j) {
      const float64x2_t x = gather2(data, i, d, j);
      acc = vaddq_f64(acc, vmulq_f64(x, x));
    }
    vst1q_f64(out + i, vsqrtq_f64(acc));
  }
  for (; i < n; ++i) {
    const double* row = data + i * d;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) s += row[j] * row[j];
    out[i] = std::sqrt(s);
  }
}

void row_norms_max_neon(const double* data, std::size_t n, std::size_t d,
                        double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t m = vabsq_f64(gather2(data, i, d, 0));
    for (std::size_t j = 1; j < d; ++j)
      m = vmaxq_f64(m, vabsq_f64(gather2(data, i, d, j)));
    vst1q_f64(out + i, m);
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

std::size_t count_greater_neon(const double* v, std::size_t n, double level) {
  const float64x2_t lev = vdupq_n_f64(level);
  std::size_t c = 0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint64x2_t cmp = vcgtq_f64(vld1q_f64(v + i), lev);
    c += (vgetq_lane_u64(cmp, 0) ? 1u : 0u) + (vgetq_lane_u64(cmp, 1) ? 1u : 0u);
  }
  for (; i < n; ++i) c += (v[i] > level) ? 1 : 0;
  return c;
}

double max_value_neon(const double* v, std::size_t n) {
  if (n < 4) {
    double m = v[0];
    for (std::size_t i = 1; i < n; ++i)
      if (m < v[i]) m = v[i];
    return m;
  }
  float64x2_t acc = vld1q_f64(v);
  std::size_t i = 2;
  for (; i + 2 <= n; i += 2) acc = vmaxq_f64(acc, vld1q_f64(v + i));
  double m = vgetq_lane_f64(acc, 0);
  const double m1 = vgetq_lane_f64(acc, 1);
  if (m < m1) m = m1;
  for (; i < n; ++i)
    if (m < v[i]) m = v[i];
  return m;
}

void ma_convolve_neon(const double* innov, std::size_t n, const double* coef,
                      std::size_t taps, double* out) {
  std::size_t t = 0;
  for (; t + 2 <= n; t += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t i = 0; i < taps; ++i) {
      const float64x2_t c = vdupq_n_f64(coef[i]);
      const float64x2_t x = vld1q_f64(innov + t + taps - 1 - i);
      acc = vaddq_f64(acc, vmulq_f64(c, x));
    }
    vst1q_f64(out + t, acc);
  }
  for (; t < n; ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < taps; ++i) s += coef[i] * innov[t + taps - 1 - i];
    out[t] = s;
  }
}

}  // namespace

const Impl* neon_impl_ptr() {
  static const Impl impl = {
      "neon",          row_norms_euclidean_neon, row_norms_max_neon,
      count_greater_neon, max_value_neon,        ma_convolve_neon,
  };
  return &impl;
}

}  // namespace tailproc::kernels

#endif  // aarch64
