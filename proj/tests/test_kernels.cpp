#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "tailproc/kernels.hpp"
#include "tailproc/rng.hpp"

using namespace tailproc;

namespace {

std::vector<double> random_buf(std::size_t n, RngStream& rng, double scale) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.gaussian() * scale;
  return v;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() &&
         (a.empty() ||
          std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_SUITE("kernels") {

// Every compiled-in variant must be bit-identical to the scalar reference.
TEST_CASE("row norms match scalar bit-for-bit") {
  RngStream rng(7, 1);
  const auto& ref = kernels::scalar_impl();
  for (std::size_t n : {0ul, 1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 64ul, 1001ul}) {
    for (std::size_t d : {1ul, 2ul, 3ul, 5ul}) {
      const auto data = random_buf(n * d, rng, 100.0);
      std::vector<double> expect_e(n), expect_m(n), got(n);
      ref.row_norms_euclidean(data.data(), n, d, expect_e.data());
      ref.row_norms_max(data.data(), n, d, expect_m.data());
      for (const auto* impl : kernels::available()) {
        impl->row_norms_euclidean(data.data(), n, d, got.data());
        CHECK_MESSAGE(bits_equal(expect_e, got), impl->name << " euclid n=" << n
                                                            << " d=" << d);
        impl->row_norms_max(data.data(), n, d, got.data());
        CHECK_MESSAGE(bits_equal(expect_m, got), impl->name << " max n=" << n
                                                            << " d=" << d);
      }
    }
  }
}

TEST_CASE("count/max/convolve match scalar bit-for-bit") {
  RngStream rng(7, 2);
  const auto& ref = kernels::scalar_impl();
  for (std::size_t n : {1ul, 2ul, 3ul, 4ul, 5ul, 9ul, 33ul, 4097ul}) {
    const auto data = random_buf(n, rng, 10.0);
    const double level = data[n / 2];
    const double expect_max = ref.max_value(data.data(), n);
    const std::size_t expect_cnt = ref.count_greater(data.data(), n, level);
    for (const auto* impl : kernels::available()) {
      CHECK(impl->max_value(data.data(), n) == expect_max);
      CHECK(impl->count_greater(data.data(), n, level) == expect_cnt);
    }
    for (std::size_t taps : {1ul, 2ul, 3ul, 5ul}) {
      const auto innov = random_buf(n + taps - 1, rng, 3.0);
      const auto coef = random_buf(taps, rng, 1.0);
      std::vector<double> expect(n), got(n);
      ref.ma_convolve(innov.data(), n, coef.data(), taps, expect.data());
      for (const auto* impl : kernels::available()) {
        impl->ma_convolve(innov.data(), n, coef.data(), taps, got.data());
        CHECK_MESSAGE(bits_equal(expect, got), impl->name << " taps=" << taps);
      }
    }
  }
}

TEST_CASE("scalar kernels compute the right things") {
  // row_norms_euclidean d=1 is |x| (no overflow through squaring)
  const double big = 1e200;
  double out = 0.0;
  kernels::scalar_impl().row_norms_euclidean(&big, 1, 1, &out);
  CHECK(out == big);

  const std::vector<double> m{3.0, -4.0, 0.0, 1.0};
  std::vector<double> norms(2);
  kernels::scalar_impl().row_norms_euclidean(m.data(), 2, 2, norms.data());
  CHECK(norms[0] == doctest::Approx(5.0));
  CHECK(norms[1] == doctest::Approx(1.0));
  kernels::scalar_impl().row_norms_max(m.data(), 2, 2, norms.data());
  CHECK(norms[0] == 4.0);
  CHECK(norms[1] == 1.0);

  const std::vector<double> v{1.0, 5.0, 2.0, 5.0, -3.0};
  CHECK(kernels::scalar_impl().max_value(v.data(), v.size()) == 5.0);
  CHECK(kernels::scalar_impl().count_greater(v.data(), v.size(), 2.0) == 2);
  CHECK(kernels::scalar_impl().count_greater(v.data(), v.size(), 5.0) == 0);

  // impulse response of the convolution
  std::vector<double> innov(6, 0.0);
  innov[2] = 1.0;  // xi at buffer slot 2
  const std::vector<double> coef{1.0, 1.0};
  std::vector<double> path(5);
  kernels::scalar_impl().ma_convolve(innov.data(), 5, coef.data(), 2, path.data());
  CHECK(path == std::vector<double>{0.0, 1.0, 1.0, 0.0, 0.0});
}

TEST_CASE("active kernel honors the available list") {
  const auto& act = kernels::active();
  bool found = false;
  for (const auto* impl : kernels::available())
    if (impl == &act) found = true;
  CHECK(found);
}

}  // TEST_SUITE
