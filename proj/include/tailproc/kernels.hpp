#pragma once

#include <cstddef>
#include <vector>

namespace tailproc::kernels {

// Data-parallel inner loops over path data. Every variant of an entry point
// must produce bit-identical output to the scalar reference: per-element
// arithmetic keeps the same operation order (lanes run across rows/time
// steps, never across the reduction axis), comparisons and maxima are exact.
// The library is built with -ffp-contract=off so no variant silently fuses.
struct Impl {
  const char* name;

  // out[i] = euclidean norm of row i of the row-major n x d matrix.
  // d == 1 uses |x| (not sqrt(x*x)) in all variants.
  void (*row_norms_euclidean)(const double* data, std::size_t n, std::size_t d,
                              double* out);
  // out[i] = max_j |data[i*d + j]|.
  void (*row_norms_max)(const double* data, std::size_t n, std::size_t d,
                        double* out);
  // Number of strict exceedances v[i] > level.
  std::size_t (*count_greater)(const double* v, std::size_t n, double level);
  // Maximum of v[0..n); requires n >= 1 and finite input.
  double (*max_value)(const double* v, std::size_t n);
  // Finite moving-average: out[t] = sum_{i=0}^{taps-1} coef[i] * innov[t + taps - 1 - i]
  // for t in [0, n); innov has length n + taps - 1.
  void (*ma_convolve)(const double* innov, std::size_t n, const double* coef,
                      std::size_t taps, double* out);
};

const Impl& scalar_impl();
// Best implementation for this machine, honoring the TAILPROC_SIMD
// environment override (scalar | avx2 | neon | auto).
const Impl& active();
// All implementations compiled in and usable on this machine.
const std::vector<const Impl*>& available();

}  // namespace tailproc::kernels
