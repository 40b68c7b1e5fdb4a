#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tailproc {

// Plain moment accumulator. Shards accumulate independently and merge in
// shard order, so totals do not depend on the worker count.
struct MeanAcc {
  std::uint64_t n = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++n;
    sum += x;
    sumsq += x * x;
  }
  void merge(const MeanAcc& o) {
    n += o.n;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double variance() const;
  double se() const;
};

// Ratio-of-means accumulator E[num]/E[den] with delta-method standard error;
// one (num, den) pair per independent draw.
struct RatioAcc {
  std::uint64_t n = 0;
  double sn = 0.0, sd = 0.0;
  double snn = 0.0, sdd = 0.0, snd = 0.0;

  void add(double num, double den) {
    ++n;
    sn += num;
    sd += den;
    snn += num * num;
    sdd += den * den;
    snd += num * den;
  }
  void merge(const RatioAcc& o) {
    n += o.n;
    sn += o.sn;
    sd += o.sd;
    snn += o.snn;
    sdd += o.sdd;
    snd += o.snd;
  }
  double num_mean() const { return n ? sn / static_cast<double>(n) : 0.0; }
  double den_mean() const { return n ? sd / static_cast<double>(n) : 0.0; }
  double ratio() const;
  double se() const;
};

double binomial_se(double p, std::uint64_t n);

// One-sample Kolmogorov-Smirnov statistic against the Pareto law
// F(y) = 1 - y^-alpha on [1, inf). `sample` is modified (sorted).
double ks_statistic_pareto(std::vector<double>& sample, double alpha);

// Two-sample KS statistic; inputs are modified (sorted).
double two_sample_ks(std::vector<double>& a, std::vector<double>& b);

// Asymptotic KS critical value at significance `level` (supported: 0.01,
// 0.05) for effective sample size n (one-sample) or n_eff (two-sample).
double ks_critical(double level, double n_eff);

// Hill estimate of the tail index from the top k order statistics.
double hill_alpha(std::vector<double> sample, std::size_t k);

// Sample-variance / mean of nonnegative counts (index of dispersion).
double dispersion_index(std::span<const std::uint64_t> counts);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace tailproc
