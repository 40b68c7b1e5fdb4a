#include "tailproc/stats.hpp"

#include <algorithm>
#include <cmath>

#include "tailproc/errors.hpp"

namespace tailproc {

double MeanAcc::variance() const {
  if (n < 2) return 0.0;
  const double m = mean();
  const double v = (sumsq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
  return std::max(v, 0.0);
}

double MeanAcc::se() const {
  return n ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

double RatioAcc::ratio() const {
  const double d = den_mean();
  return d != 0.0 ? num_mean() / d : 0.0;
}

double RatioAcc::se() const {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double mn = num_mean();
  const double md = den_mean();
  if (md == 0.0) return 0.0;
  const double vn = std::max((snn - nn * mn * mn) / (nn - 1.0), 0.0);
  const double vd = std::max((sdd - nn * md * md) / (nn - 1.0), 0.0);
  const double cnd = (snd - nn * mn * md) / (nn - 1.0);
  const double r = mn / md;
  const double var = (vn - 2.0 * r * cnd + r * r * vd) / (md * md);
  return std::sqrt(std::max(var, 0.0) / nn);
}

double binomial_se(double p, std::uint64_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n));
}

double ks_statistic_pareto(std::vector<double>& sample, double alpha) {
  if (sample.empty()) throw empty_estimate("ks_statistic_pareto: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = 1.0 - std::pow(std::max(sample[i], 1.0), -alpha);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(f - lo, hi - f));
  }
  return d;
}

double two_sample_ks(std::vector<double>& a, std::vector<double>& b) {
  if (a.empty() || b.empty()) throw empty_estimate("two_sample_ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical(double level, double n_eff) {
  double c;
  if (level == 0.01)
    c = 1.62762;
  else if (level == 0.05)
    c = 1.35810;
  else
    throw invalid_parameter("ks_critical: supported levels are 0.01 and 0.05");
  return c / std::sqrt(n_eff);
}

double hill_alpha(std::vector<double> sample, std::size_t k) {
  if (k + 1 > sample.size())
    throw invalid_parameter("hill_alpha: k must satisfy k + 1 <= sample size");
  std::sort(sample.begin(), sample.end(), std::greater<>());
  const double xk = sample[k];
  if (xk <= 0.0) throw invalid_parameter("hill_alpha: nonpositive order statistic");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(sample[i] / xk);
  if (s <= 0.0) throw degenerate_estimate("hill_alpha: degenerate sample");
  return static_cast<double>(k) / s;
}

double dispersion_index(std::span<const std::uint64_t> counts) {
  if (counts.size() < 2) throw invalid_parameter("dispersion_index: need >= 2 counts");
  double mean = 0.0;
  for (auto c : counts) mean += static_cast<double>(c);
  mean /= static_cast<double>(counts.size());
  if (mean == 0.0) return 0.0;
  double ss = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(counts.size() - 1);
  return var / mean;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace tailproc
