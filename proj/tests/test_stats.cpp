#include <doctest.h>

#include <cmath>
#include <vector>

#include "tailproc/rng.hpp"
#include "tailproc/stats.hpp"

using namespace tailproc;

TEST_SUITE("stats") {

TEST_CASE("mean accumulator merge equals sequential") {
  RngStream rng(3, 1);
  MeanAcc whole, p1, p2;
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.gaussian();
    whole.add(x);
    (i < 400 ? p1 : p2).add(x);
  }
  p1.merge(p2);
  CHECK(p1.n == whole.n);
  CHECK(p1.mean() == doctest::Approx(whole.mean()));
  CHECK(p1.se() == doctest::Approx(whole.se()));
}

TEST_CASE("ratio accumulator delta-method SE is sane") {
  RngStream rng(3, 2);
  RatioAcc acc;
  // num = 2*den + noise, den ~ 1: ratio ~ 2
  for (int i = 0; i < 100000; ++i) {
    const double den = 1.0 + 0.1 * rng.gaussian();
    const double num = 2.0 * den + 0.05 * rng.gaussian();
    acc.add(num, den);
  }
  CHECK(acc.ratio() == doctest::Approx(2.0).epsilon(0.01));
  CHECK(acc.se() > 0.0);
  CHECK(acc.se() < 0.01);
  CHECK(std::fabs(acc.ratio() - 2.0) < 4.0 * acc.se() + 1e-3);
}

TEST_CASE("pareto KS statistic small for pareto data, large otherwise") {
  RngStream rng(3, 3);
  std::vector<double> good(2000), bad(2000);
  for (std::size_t i = 0; i < good.size(); ++i) {
    good[i] = std::pow(rng.uniform_oc(), -1.0 / 1.5);
    bad[i] = 1.0 + rng.uniform_co();  // uniform on [1,2], not Pareto
  }
  const double d_good = ks_statistic_pareto(good, 1.5);
  const double d_bad = ks_statistic_pareto(bad, 1.5);
  CHECK(d_good < ks_critical(0.01, 2000.0));
  CHECK(d_bad > ks_critical(0.01, 2000.0));
}

TEST_CASE("two-sample KS detects a shift") {
  RngStream rng(3, 4);
  std::vector<double> a(3000), b(3000), c(3000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.gaussian();
    b[i] = rng.gaussian();
    c[i] = rng.gaussian() + 0.5;
  }
  const double n_eff = 3000.0 * 3000.0 / 6000.0;
  std::vector<double> a2 = a;
  CHECK(two_sample_ks(a, b) < ks_critical(0.01, n_eff));
  CHECK(two_sample_ks(a2, c) > ks_critical(0.01, n_eff));
}

TEST_CASE("hill estimator recovers alpha") {
  RngStream rng(3, 5);
  std::vector<double> sample(100000);
  for (double& x : sample) x = std::pow(rng.uniform_oc(), -1.0 / 1.5);
  const double a = hill_alpha(sample, 1000);
  CHECK(std::fabs(a - 1.5) < 0.05);
}

TEST_CASE("dispersion index near one for poisson-like counts") {
  const std::vector<std::uint64_t> flat{100, 100, 100, 100};
  CHECK(dispersion_index(flat) == doctest::Approx(0.0));
  const std::vector<std::uint64_t> counts{95, 104, 99, 102};
  CHECK(dispersion_index(counts) > 0.0);
}

TEST_CASE("fnv1a64 is stable") {
  CHECK(fnv1a64("") == 0xCBF29CE484222325ULL);
  CHECK(fnv1a64("a") != fnv1a64("b"));
}

}  // TEST_SUITE
