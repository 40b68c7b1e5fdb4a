#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailproc/analytic.hpp"
#include "tailproc/models.hpp"
#include "tailproc/norms.hpp"

namespace tailproc {

// Norm series ||X_t|| of a path, computed once through the kernel layer and
// shared by every estimator.
struct PathNorms {
  std::vector<double> values;  // index t-1 for time t
};
PathNorms path_norms(const PathMatrix& path, const NormSpec& norm);

// Threshold as an order statistic (k strict exceedances) or a quantile p
// (mapped to k = max(1, floor(n(1-p)))). Binding to a path resolves the level
// x = (k+1)-th largest norm.
struct ThresholdSpec {
  enum class Mode { OrderStatistic, Quantile };
  Mode mode = Mode::OrderStatistic;
  std::size_t k = 0;
  double p = 0.0;

  // resolved against a path:
  double level = 0.0;
  std::size_t n_exceed = 0;
  std::size_t n = 0;
  std::vector<std::string> warnings;

  static ThresholdSpec order_statistic(std::size_t k) {
    ThresholdSpec t;
    t.mode = Mode::OrderStatistic;
    t.k = k;
    return t;
  }
  static ThresholdSpec quantile(double p) {
    ThresholdSpec t;
    t.mode = Mode::Quantile;
    t.p = p;
    return t;
  }
};

ThresholdSpec select_threshold(const PathNorms& norms, ThresholdSpec spec);

// Block length rule: explicit r or r = ceil(n^gamma).
struct BlockSpec {
  enum class Rule { Explicit, Power };
  Rule rule = Rule::Power;
  std::size_t r = 0;
  double gamma = 0.6;

  static BlockSpec explicit_r(std::size_t r) {
    BlockSpec b;
    b.rule = Rule::Explicit;
    b.r = r;
    return b;
  }
  static BlockSpec power(double gamma) {
    BlockSpec b;
    b.rule = Rule::Power;
    b.gamma = gamma;
    return b;
  }
  std::size_t resolve(std::size_t n) const;
};

struct EmpiricalTailProcess {
  int s = 0, t = 0;
  bool spectral = false;
  std::vector<std::size_t> anchors;       // 1-based times tau
  std::vector<std::vector<Vec>> windows;  // one per anchor: X_{tau+s}/x .. X_{tau+t}/x
  std::vector<double> anchor_ratios;      // ||X_tau|| / x
};

EmpiricalTailProcess empirical_tail_process(const PathMatrix& path,
                                            const PathNorms& norms,
                                            const ThresholdSpec& threshold, int s,
                                            int t, bool spectral);

// Pr(M_{tau+1..tau+r} <= x | ||X_tau|| > x): fraction of anchors whose next-r
// window stays below the level. Standard error is binomial and ignores serial
// dependence (approximate, flagged in reports).
ThetaEstimate runs_estimator(const PathNorms& norms, const ThresholdSpec& threshold,
                             std::size_t r);

// P(M_r > x) / (r k/n) over disjoint blocks; clamped to [0,1] with a flag.
ThetaEstimate blocks_estimator(const PathNorms& norms, const ThresholdSpec& threshold,
                               std::size_t r);

struct ClusterPartition {
  std::size_t r = 0;
  double level = 0.0;
  std::size_t n_blocks = 0;
  struct Cluster {
    std::size_t block_index = 0;
    std::vector<std::size_t> times;   // 1-based exceedance times
    std::vector<Vec> points;          // X_tau / x
  };
  std::vector<Cluster> clusters;

  double mean_size() const;
  // Empirical Pr(kappa = k), k = 1..max size.
  std::vector<double> size_law() const;
};

ClusterPartition extract_clusters(const PathMatrix& path, const PathNorms& norms,
                                  const ThresholdSpec& threshold, std::size_t r);

struct LevelSummary {
  double u = 1.0;
  double level = 0.0;
  std::size_t exceed_count = 0;
  std::size_t cluster_count = 0;
  double dispersion_halves = 0.0;
  double dispersion_quarters = 0.0;
  double implied_theta = 0.0;  // -log(no-exceedance block frequency)/(r (k/n) u^-alpha)
  double mean_cluster_size = 0.0;
  double mean_mark = 0.0;  // mean of ||X_tau||/(x u) over exceedances of x u
};

struct CompoundPoissonSummary {
  std::size_t r = 0;
  double base_level = 0.0;
  std::vector<LevelSummary> levels;
};

CompoundPoissonSummary point_process_summary(const PathNorms& norms,
                                             const ThresholdSpec& threshold,
                                             std::size_t r,
                                             const std::vector<double>& u_levels,
                                             double alpha);

struct AnticlusterRow {
  std::size_t m = 0;
  double prob = 0.0;
  double se = 0.0;
  std::size_t n_anchors = 0;
};

// Pr(max_{m <= |t| <= r} ||X_{tau+t}|| > x | ||X_tau|| > x) for each m.
std::vector<AnticlusterRow> anticluster_diagnostic(const PathNorms& norms,
                                                   const ThresholdSpec& threshold,
                                                   const std::vector<std::size_t>& m_list,
                                                   std::size_t r);

}  // namespace tailproc
