#include "tailproc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tailproc/errors.hpp"
#include "tailproc/kernels.hpp"
#include "tailproc/stats.hpp"

namespace tailproc {

PathNorms path_norms(const PathMatrix& path, const NormSpec& norm) {
  PathNorms out;
  out.values.resize(path.n);
  const auto& k = kernels::active();
  if (norm.kind() == NormSpec::Kind::Euclidean) {
    k.row_norms_euclidean(path.data.data(), path.n,
                          static_cast<std::size_t>(path.d), out.values.data());
  } else if (norm.kind() == NormSpec::Kind::Max) {
    k.row_norms_max(path.data.data(), path.n, static_cast<std::size_t>(path.d),
                    out.values.data());
  } else {
    for (std::size_t t = 0; t < path.n; ++t) out.values[t] = norm(path.row(t));
  }
  return out;
}

ThresholdSpec select_threshold(const PathNorms& norms, ThresholdSpec spec) {
  const std::size_t n = norms.values.size();
  if (n == 0) throw invalid_parameter("select_threshold: empty path");
  spec.n = n;
  if (spec.mode == ThresholdSpec::Mode::Quantile) {
    if (!(spec.p > 0.0 && spec.p < 1.0))
      throw invalid_parameter("select_threshold: quantile p must be in (0,1)");
    spec.k = std::max<std::size_t>(
        1, static_cast<std::size_t>(
               std::floor(static_cast<double>(n) * (1.0 - spec.p) + 1e-9)));
  }
  if (spec.k < 1 || spec.k >= n)
    throw invalid_parameter("select_threshold: need 1 <= k < n");
  if (spec.k * 10 >= n)
    spec.warnings.push_back("k >= n/10: asymptotic threshold regime doubtful");

  // x = (k+1)-th largest norm -> exactly k strict exceedances (fewer on ties).
  std::vector<double> sorted = norms.values;
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(spec.k),
                   sorted.end(), std::greater<>());
  spec.level = sorted[spec.k];
  spec.n_exceed =
      kernels::active().count_greater(norms.values.data(), n, spec.level);
  if (spec.n_exceed == 0)
    spec.warnings.push_back(
        "degenerate threshold: ties leave zero strict exceedances");
  return spec;
}

std::size_t BlockSpec::resolve(std::size_t n) const {
  std::size_t out;
  if (rule == Rule::Explicit) {
    out = r;
  } else {
    if (!(gamma > 0.0 && gamma < 1.0))
      throw invalid_parameter("BlockSpec: gamma must be in (0,1)");
    out = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(n), gamma)));
  }
  if (out < 1 || out > n)
    throw invalid_parameter("BlockSpec: need 1 <= r <= n");
  return out;
}

namespace {

std::vector<std::size_t> exceedance_times(const PathNorms& norms, double level) {
  std::vector<std::size_t> times;  // 1-based
  for (std::size_t i = 0; i < norms.values.size(); ++i)
    if (norms.values[i] > level) times.push_back(i + 1);
  return times;
}

}  // namespace

EmpiricalTailProcess empirical_tail_process(const PathMatrix& path,
                                            const PathNorms& norms,
                                            const ThresholdSpec& threshold, int s,
                                            int t, bool spectral) {
  if (s > 0 || t < 0 || s > t)
    throw invalid_parameter("empirical_tail_process: need s <= 0 <= t");
  const double x = threshold.level;
  const long long n = static_cast<long long>(path.n);
  EmpiricalTailProcess out;
  out.s = s;
  out.t = t;
  out.spectral = spectral;
  for (std::size_t tau : exceedance_times(norms, x)) {
    const long long tt = static_cast<long long>(tau);
    if (tt + s < 1 || tt + t > n) continue;  // edge anchors dropped
    const double denom = spectral ? norms.values[tau - 1] : x;
    std::vector<Vec> window;
    window.reserve(static_cast<std::size_t>(t - s + 1));
    for (int j = s; j <= t; ++j) {
      const auto row = path.row(static_cast<std::size_t>(tt + j - 1));
      Vec v(row.begin(), row.end());
      for (double& y : v) y /= denom;
      window.push_back(std::move(v));
    }
    out.windows.push_back(std::move(window));
    out.anchors.push_back(tau);
    out.anchor_ratios.push_back(norms.values[tau - 1] / x);
  }
  if (out.anchors.empty())
    throw empty_estimate("empirical_tail_process: no usable exceedance anchors");
  return out;
}

ThetaEstimate runs_estimator(const PathNorms& norms, const ThresholdSpec& threshold,
                             std::size_t r) {
  if (r < 1) throw invalid_parameter("runs_estimator: r must be >= 1");
  const double x = threshold.level;
  const std::size_t n = norms.values.size();
  std::size_t used = 0, quiet = 0;
  for (std::size_t tau : exceedance_times(norms, x)) {
    if (tau + r > n) continue;  // window must fit inside the path
    ++used;
    const double m = kernels::active().max_value(norms.values.data() + tau, r);
    if (!(m > x)) ++quiet;
  }
  if (used == 0) throw empty_estimate("runs_estimator: no usable anchors");
  const double value = static_cast<double>(quiet) / static_cast<double>(used);
  return {value, binomial_se(value, used), "runs", used, "", false};
}

ThetaEstimate blocks_estimator(const PathNorms& norms, const ThresholdSpec& threshold,
                               std::size_t r) {
  if (r < 1) throw invalid_parameter("blocks_estimator: r must be >= 1");
  const double x = threshold.level;
  const std::size_t n = norms.values.size();
  const std::size_t nb = n / r;
  if (nb == 0) throw invalid_parameter("blocks_estimator: r exceeds path length");
  std::size_t hit = 0;
  for (std::size_t b = 0; b < nb; ++b) {
    const double m = kernels::active().max_value(norms.values.data() + b * r, r);
    if (m > x) ++hit;
  }
  if (hit == 0) throw empty_estimate("blocks_estimator: no block exceedances");
  const double freq = static_cast<double>(hit) / static_cast<double>(nb);
  const double denom = static_cast<double>(r) * static_cast<double>(threshold.k) /
                       static_cast<double>(threshold.n);
  double value = freq / denom;
  bool clamped = false;
  if (value > 1.0) {
    value = 1.0;
    clamped = true;
  }
  const double se = binomial_se(freq, nb) / denom;
  return {value, se, "blocks", nb, "", clamped};
}

double ClusterPartition::mean_size() const {
  if (clusters.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.times.size();
  return static_cast<double>(total) / static_cast<double>(clusters.size());
}

std::vector<double> ClusterPartition::size_law() const {
  std::vector<double> law;
  for (const auto& c : clusters) {
    const std::size_t k = c.times.size();
    if (law.size() < k) law.resize(k, 0.0);
    law[k - 1] += 1.0;
  }
  for (double& p : law) p /= static_cast<double>(clusters.size());
  return law;
}

ClusterPartition extract_clusters(const PathMatrix& path, const PathNorms& norms,
                                  const ThresholdSpec& threshold, std::size_t r) {
  if (r < 1) throw invalid_parameter("extract_clusters: r must be >= 1");
  ClusterPartition part;
  part.r = r;
  part.level = threshold.level;
  const std::size_t n = norms.values.size();
  part.n_blocks = n / r;  // trailing partial block discarded
  for (std::size_t b = 0; b < part.n_blocks; ++b) {
    ClusterPartition::Cluster cl;
    cl.block_index = b;
    for (std::size_t i = b * r; i < (b + 1) * r; ++i) {
      if (norms.values[i] > part.level) {
        cl.times.push_back(i + 1);
        const auto row = path.row(i);
        Vec v(row.begin(), row.end());
        for (double& y : v) y /= part.level;
        cl.points.push_back(std::move(v));
      }
    }
    if (!cl.times.empty()) part.clusters.push_back(std::move(cl));
  }
  return part;
}

CompoundPoissonSummary point_process_summary(const PathNorms& norms,
                                             const ThresholdSpec& threshold,
                                             std::size_t r,
                                             const std::vector<double>& u_levels,
                                             double alpha) {
  CompoundPoissonSummary out;
  out.r = r;
  out.base_level = threshold.level;
  const std::size_t n = norms.values.size();
  const std::size_t nb = n / r;
  if (nb < 4)
    throw invalid_parameter("point_process_summary: need at least 4 blocks");
  const double p_hat = static_cast<double>(threshold.k) / static_cast<double>(threshold.n);

  for (double u : u_levels) {
    if (!(u >= 1.0))
      throw invalid_parameter("point_process_summary: levels u must be >= 1");
    LevelSummary ls;
    ls.u = u;
    ls.level = threshold.level * u;

    std::vector<std::uint64_t> quarter_counts(4, 0), half_counts(2, 0);
    std::size_t clusters = 0, exceed = 0;
    double mark_sum = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const double m = kernels::active().max_value(norms.values.data() + b * r, r);
      if (m > ls.level) {
        ++clusters;
        ++quarter_counts[std::min<std::size_t>(3, b * 4 / nb)];
        ++half_counts[std::min<std::size_t>(1, b * 2 / nb)];
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      if (norms.values[i] > ls.level) {
        ++exceed;
        mark_sum += norms.values[i] / ls.level;
      }
    ls.exceed_count = exceed;
    ls.cluster_count = clusters;
    ls.dispersion_quarters = dispersion_index(quarter_counts);
    ls.dispersion_halves = dispersion_index(half_counts);
    ls.mean_cluster_size =
        clusters > 0 ? static_cast<double>(exceed) / static_cast<double>(clusters) : 0.0;
    ls.mean_mark = exceed > 0 ? mark_sum / static_cast<double>(exceed) : 0.0;
    const double freq0 =
        1.0 - static_cast<double>(clusters) / static_cast<double>(nb);
    ls.implied_theta =
        freq0 > 0.0 ? -std::log(freq0) / (static_cast<double>(r) * p_hat *
                                          std::pow(u, -alpha))
                    : 0.0;
    out.levels.push_back(ls);
  }
  return out;
}

std::vector<AnticlusterRow> anticluster_diagnostic(const PathNorms& norms,
                                                   const ThresholdSpec& threshold,
                                                   const std::vector<std::size_t>& m_list,
                                                   std::size_t r) {
  for (std::size_t i = 1; i < m_list.size(); ++i)
    if (m_list[i] <= m_list[i - 1])
      throw invalid_parameter("anticluster_diagnostic: m_list must be increasing");
  const double x = threshold.level;
  const std::size_t n = norms.values.size();
  std::vector<AnticlusterRow> rows;
  const auto times = exceedance_times(norms, x);
  for (std::size_t m : m_list) {
    if (m < 1 || m > r)
      throw invalid_parameter("anticluster_diagnostic: need 1 <= m <= r");
    std::size_t used = 0, hit = 0;
    for (std::size_t tau : times) {
      if (tau <= r || tau + r > n) continue;  // full two-sided window required
      ++used;
      bool any = false;
      // forward side [tau+m, tau+r]
      if (kernels::active().max_value(norms.values.data() + tau + m - 1,
                                      r - m + 1) > x)
        any = true;
      // backward side [tau-r, tau-m]
      if (!any && kernels::active().max_value(norms.values.data() + tau - r - 1,
                                              r - m + 1) > x)
        any = true;
      if (any) ++hit;
    }
    if (used == 0) throw empty_estimate("anticluster_diagnostic: no usable anchors");
    const double p = static_cast<double>(hit) / static_cast<double>(used);
    rows.push_back({m, p, binomial_se(p, used), used});
  }
  return rows;
}

}  // namespace tailproc
