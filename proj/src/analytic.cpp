#include "tailproc/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tailproc/errors.hpp"
#include "tailproc/stats.hpp"

namespace tailproc {

namespace {

constexpr double kFpGuard = 1e-9;  // absolute slack on 3-SE self-checks

double pow_alpha(double x, double alpha) {
  if (x <= 0.0) return 0.0;
  return std::pow(x, alpha);
}

// Frobenius norm (upper bound on the euclidean operator norm, used for the
// eps cut of surviving products).
double frob(const Mat& A) {
  double s = 0.0;
  for (double x : A.a) s += x * x;
  return std::sqrt(s);
}

void mma_draw_windows(const MMASpec& spec, int s, int t, RngStream& rng,
                      std::vector<SpectralWindowSample>& out) {
  const int m = spec.m;
  Vec theta(static_cast<std::size_t>(spec.q));
  spec.innovation.spectral.sample(rng, theta);

  // Coefficient arrays for every time index the window touches, drawn from a
  // per-draw parent stream so the coefficient process stays independent of
  // the innovation angle.
  const int lo = std::min(s, 0);
  const int hi = std::max(t, 0);
  std::vector<std::vector<Mat>> arrays(static_cast<std::size_t>(hi - lo + 1));
  if (spec.coeffs.is_deterministic()) {
    for (auto& a : arrays) a = spec.coeffs.fixed();
  } else {
    RngStream coeff_parent = rng.substream(rng.next_u64());
    for (int tau = lo; tau <= hi; ++tau)
      spec.coeffs.at_time(coeff_parent, tau, arrays[static_cast<std::size_t>(tau - lo)]);
  }
  const std::vector<Mat>& at0 = arrays[static_cast<std::size_t>(-lo)];

  Vec tmp(static_cast<std::size_t>(spec.d));
  for (int i = 0; i <= m; ++i) {
    mat_vec(at0[static_cast<std::size_t>(i)], theta, tmp);
    const double den = spec.ambient(tmp);
    if (!(den > 0.0)) continue;  // zero-weight branch, valid
    SpectralWindowSample w;
    w.s = s;
    w.weight = pow_alpha(den, spec.alpha());
    w.values.assign(static_cast<std::size_t>(t - s + 1),
                    Vec(static_cast<std::size_t>(spec.d), 0.0));
    for (int j = s; j <= t; ++j) {
      const int branch = i + j;
      if (branch < 0 || branch > m) continue;  // C_k = 0 outside 0..m
      const std::vector<Mat>& at_j = arrays[static_cast<std::size_t>(j - lo)];
      Vec& val = w.values[static_cast<std::size_t>(j - s)];
      mat_vec(at_j[static_cast<std::size_t>(branch)], theta, val);
      for (double& x : val) x /= den;
    }
    out.push_back(std::move(w));
  }
}

std::vector<double> window_norms(const SpectralWindowSample& w, const NormSpec& norm,
                                 int lo, int hi) {
  std::vector<double> norms(static_cast<std::size_t>(hi - lo + 1), 0.0);
  for (int j = lo; j <= hi; ++j) {
    const Vec* v = w.get(j);
    if (v != nullptr) norms[static_cast<std::size_t>(j - lo)] = norm(*v);
  }
  return norms;
}

void check_two_routes(double a, double sa, double b, double sb, const char* what) {
  const double tol = 3.0 * std::sqrt(sa * sa + sb * sb) + kFpGuard;
  if (std::fabs(a - b) > tol)
    throw degenerate_estimate(std::string(what) + ": internal routes disagree (" +
                              std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

double LaplaceResult::pooled_se() const {
  return std::sqrt(general_se * general_se + simplified_se * simplified_se);
}
double TimeChangeResult::pooled_se() const {
  return std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);
}
double LagReversalResult::pooled_se() const {
  return std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);
}

void IidWindowSampler::draw(RngStream& rng, int s, int t,
                            std::vector<SpectralWindowSample>& out) const {
  if (s > 0 || t < 0)
    throw invalid_parameter("IidWindowSampler: window must contain index 0");
  SpectralWindowSample w;
  w.s = s;
  w.weight = 1.0;
  w.values.assign(static_cast<std::size_t>(t - s + 1),
                  Vec(static_cast<std::size_t>(dim()), 0.0));
  spectral_.sample(rng, w.values[static_cast<std::size_t>(-s)]);
  out.push_back(std::move(w));
}

void MmaWindowSampler::draw(RngStream& rng, int s, int t,
                            std::vector<SpectralWindowSample>& out) const {
  mma_draw_windows(spec_, s, t, rng, out);
}

void RcarForwardWindowSampler::draw(RngStream& rng, int s, int t,
                                    std::vector<SpectralWindowSample>& out) const {
  if (s < 0)
    throw invalid_parameter(
        "RcarForwardWindowSampler: forward-only (requested s < 0)");
  SpectralWindowSample w;
  w.s = s;
  w.weight = 1.0;
  w.values.assign(static_cast<std::size_t>(t - s + 1),
                  Vec(static_cast<std::size_t>(spec_.d), 0.0));

  Vec theta(static_cast<std::size_t>(spec_.d));
  spec_.stationary_spectral.sample(rng, theta);
  if (s == 0) w.values[0] = theta;

  Mat prod = Mat::identity(spec_.d);
  Mat A(spec_.d, spec_.d);
  Vec b(static_cast<std::size_t>(spec_.d));
  for (int j = 1; j <= t; ++j) {
    spec_.ab_sampler(rng, A, b);
    prod = mat_mul(A, prod);
    if (frob(prod) < eps_) break;  // remaining values stay zero
    if (j >= s) mat_vec(prod, theta, w.values[static_cast<std::size_t>(j - s)]);
  }
  out.push_back(std::move(w));
}

std::string RcarForwardWindowSampler::truncation_note() const {
  return "rcar forward window cut at eps=" + std::to_string(eps_) +
         " (sup bias <= eps^alpha)";
}

std::vector<SpectralWindowSample> mma_spectral_window(const MMASpec& spec, int s,
                                                      int t, RngStream& rng) {
  if (s > 0 || t < 0 || s > t)
    throw invalid_parameter("mma_spectral_window: need s <= 0 <= t");
  std::vector<SpectralWindowSample> out;
  mma_draw_windows(spec, s, t, rng, out);
  return out;
}

NormalizerEstimate mma_normalizer(const MMASpec& spec, const ExecPolicy& ep,
                                  const RngStream& rng) {
  if (spec.coeffs.is_deterministic() && spec.innovation.spectral.is_finite_atomic()) {
    const auto& atoms = spec.innovation.spectral.atoms();
    const auto& wts = spec.innovation.spectral.weights();
    Vec tmp(static_cast<std::size_t>(spec.d));
    double c = 0.0;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      for (int i = 0; i <= spec.m; ++i) {
        mat_vec(spec.coeffs.fixed()[static_cast<std::size_t>(i)], atoms[a], tmp);
        c += wts[a] * pow_alpha(spec.ambient(tmp), spec.alpha());
      }
    return {c, 0.0, 0, "closed-form"};
  }
  MmaWindowSampler sampler(spec);
  auto acc = mc_sharded<MeanAcc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, MeanAcc& a) {
        std::vector<SpectralWindowSample> windows;
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          windows.clear();
          sampler.draw(r, 0, 0, windows);
          double w = 0.0;
          for (const auto& win : windows) w += win.weight;
          a.add(w);
        }
      });
  return {acc.mean(), acc.se(), acc.n, "mc"};
}

ThetaEstimate mma_theta(const MMASpec& spec, const ExecPolicy& ep,
                        const RngStream& rng) {
  if (spec.coeffs.is_deterministic() && spec.innovation.spectral.is_finite_atomic()) {
    const auto& atoms = spec.innovation.spectral.atoms();
    const auto& wts = spec.innovation.spectral.weights();
    Vec tmp(static_cast<std::size_t>(spec.d));
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      double mx = 0.0;
      for (int i = 0; i <= spec.m; ++i) {
        mat_vec(spec.coeffs.fixed()[static_cast<std::size_t>(i)], atoms[a], tmp);
        const double v = pow_alpha(spec.ambient(tmp), spec.alpha());
        mx = std::max(mx, v);
        den += wts[a] * v;
      }
      num += wts[a] * mx;
    }
    if (!(den > 0.0))
      throw degenerate_estimate(
          "mma_theta: all branches degenerate (M3 violated)");
    return {num / den, 0.0, "closed-form", 0, "", false};
  }

  auto acc = mc_sharded<RatioAcc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, RatioAcc& a) {
        Vec theta(static_cast<std::size_t>(spec.q));
        Vec tmp(static_cast<std::size_t>(spec.d));
        std::vector<std::vector<Mat>> arrays(static_cast<std::size_t>(spec.m) + 1);
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          spec.innovation.spectral.sample(r, theta);
          RngStream coeff_parent = r.substream(r.next_u64());
          for (int tau = 0; tau <= spec.m; ++tau)
            spec.coeffs.at_time(coeff_parent, tau, arrays[static_cast<std::size_t>(tau)]);
          double num = 0.0, den = 0.0;
          for (int i = 0; i <= spec.m; ++i) {
            // numerator along the stationary diagonal: C_i at time i
            mat_vec(arrays[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)],
                    theta, tmp);
            num = std::max(num, pow_alpha(spec.ambient(tmp), spec.alpha()));
            mat_vec(arrays[0][static_cast<std::size_t>(i)], theta, tmp);
            den += pow_alpha(spec.ambient(tmp), spec.alpha());
          }
          a.add(num, den);
        }
      });
  if (!(acc.den_mean() > 0.0))
    throw degenerate_estimate("mma_theta: denominator estimate <= 0 (M3 violated)");
  return {acc.ratio(), acc.se(), "mc-mma", acc.n, "", false};
}

ThetaEstimate theta_forward(const WindowSampler& sampler, int horizon,
                            const ExecPolicy& ep, const RngStream& rng) {
  struct Acc {
    RatioAcc direct;     // E max(1 - sup_{i>=1}, 0)
    RatioAcc telescoped; // E [sup_{i>=0} - sup_{i>=1}]
    void merge(const Acc& o) {
      direct.merge(o.direct);
      telescoped.merge(o.telescoped);
    }
  };
  auto acc = mc_sharded<Acc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, Acc& a) {
        std::vector<SpectralWindowSample> windows;
        const double alpha = sampler.alpha();
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          windows.clear();
          sampler.draw(r, 0, horizon, windows);
          double w_sum = 0.0, v1 = 0.0, v2 = 0.0;
          for (const auto& win : windows) {
            const auto norms = window_norms(win, sampler.norm(), 0, horizon);
            double sup1 = 0.0;
            for (std::size_t j = 1; j < norms.size(); ++j)
              sup1 = std::max(sup1, pow_alpha(norms[j], alpha));
            const double sup0 = std::max(pow_alpha(norms[0], alpha), sup1);
            w_sum += win.weight;
            v1 += win.weight * std::max(1.0 - sup1, 0.0);
            v2 += win.weight * (sup0 - sup1);
          }
          a.direct.add(v1, w_sum);
          a.telescoped.add(v2, w_sum);
        }
      });
  check_two_routes(acc.direct.ratio(), acc.direct.se(), acc.telescoped.ratio(),
                   acc.telescoped.se(), "theta_forward");
  return {acc.direct.ratio(), acc.direct.se(), "mc-forward", acc.direct.n,
          sampler.truncation_note(), false};
}

TailWindow rcar_forward_tail(const RCARSpec& spec, int horizon, double eps,
                             RngStream& rng) {
  TailWindow out;
  out.s = 0;
  out.radius = sample_pareto(RadialLaw{spec.alpha}, rng);

  Vec theta(static_cast<std::size_t>(spec.d));
  spec.stationary_spectral.sample(rng, theta);
  Vec y0 = theta;
  for (double& x : y0) x *= out.radius;
  out.values.push_back(std::move(y0));

  Mat prod = Mat::identity(spec.d);
  Mat A(spec.d, spec.d);
  Vec b(static_cast<std::size_t>(spec.d));
  out.truncation = "horizon";
  for (int j = 1; j <= horizon; ++j) {
    spec.ab_sampler(rng, A, b);
    prod = mat_mul(A, prod);
    if (frob(prod) * out.radius < eps) {
      out.truncation = "eps";
      break;
    }
    Vec yj(static_cast<std::size_t>(spec.d));
    mat_vec(prod, theta, yj);
    for (double& x : yj) x *= out.radius;
    out.values.push_back(std::move(yj));
  }
  return out;
}

ClusterSizeLaw cluster_size_law(const WindowSampler& sampler, int horizon,
                                const ExecPolicy& ep, const RngStream& rng,
                                const ThetaEstimate* theta) {
  ThetaEstimate th =
      theta != nullptr ? *theta
                       : theta_forward(sampler, horizon, ep, rng.substream(7));
  if (!(th.value > 0.0))
    throw degenerate_estimate(
        "cluster_size_law: theta <= 0 (finite-cluster condition presumed violated)");

  struct Acc {
    std::vector<double> w_by_nu;
    double total_w = 0.0;
    RatioAcc nu0;
    void bump(std::size_t k, double w) {
      if (w_by_nu.size() <= k) w_by_nu.resize(k + 1, 0.0);
      w_by_nu[k] += w;
    }
    void merge(const Acc& o) {
      if (w_by_nu.size() < o.w_by_nu.size()) w_by_nu.resize(o.w_by_nu.size(), 0.0);
      for (std::size_t i = 0; i < o.w_by_nu.size(); ++i) w_by_nu[i] += o.w_by_nu[i];
      total_w += o.total_w;
      nu0.merge(o.nu0);
    }
  };
  const double alpha = sampler.alpha();
  auto acc = mc_sharded<Acc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, Acc& a) {
        std::vector<SpectralWindowSample> windows;
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          const double y = sample_pareto(RadialLaw{alpha}, r);
          windows.clear();
          sampler.draw(r, 0, horizon, windows);
          double w_sum = 0.0, w_nu0 = 0.0;
          for (const auto& win : windows) {
            const auto norms = window_norms(win, sampler.norm(), 0, horizon);
            std::size_t nu = 0;
            for (std::size_t j = 1; j < norms.size(); ++j)
              if (y * norms[j] > 1.0) ++nu;  // strict: ties count as not exceeding
            a.bump(nu, win.weight);
            a.total_w += win.weight;
            w_sum += win.weight;
            if (nu == 0) w_nu0 += win.weight;
          }
          a.nu0.add(w_nu0, w_sum);
        }
      });

  ClusterSizeLaw law;
  law.n_samples = acc.nu0.n;
  law.theta = th.value;
  law.theta_se = th.std_error;
  law.truncation = sampler.truncation_note();
  if (acc.total_w <= 0.0)
    throw empty_estimate("cluster_size_law: no windows with positive weight");
  law.nu.resize(acc.w_by_nu.size());
  for (std::size_t i = 0; i < acc.w_by_nu.size(); ++i)
    law.nu[i] = acc.w_by_nu[i] / acc.total_w;
  law.K = static_cast<int>(law.nu.size()) - 1;
  law.nu0 = acc.nu0.ratio();
  law.nu0_se = acc.nu0.se();

  check_two_routes(law.nu0, law.nu0_se, th.value, th.std_error,
                   "cluster_size_law: Pr(nu=0) vs theta");

  double sum_nu = 0.0;
  for (double p : law.nu) sum_nu += p;
  law.tail_bound = std::max(0.0, 1.0 - sum_nu);

  law.kappa.resize(law.nu.size());
  law.mean_kappa = 0.0;
  for (std::size_t k = 1; k <= law.nu.size(); ++k) {
    const double pk_m1 = law.nu[k - 1];
    const double pk = k < law.nu.size() ? law.nu[k] : 0.0;
    law.kappa[k - 1] = std::max(0.0, (pk_m1 - pk) / th.value);
    law.mean_kappa += static_cast<double>(k) * law.kappa[k - 1];
  }
  return law;
}

LaplaceResult laplace_functional(const RadialFunctional& f,
                                 const WindowSampler& sampler, int horizon,
                                 const ExecPolicy& ep, const RngStream& rng,
                                 const ThetaEstimate* theta) {
  if (!(f.vanishing_radius > 0.0))
    throw invalid_parameter(
        "laplace_functional: functional must declare a vanishing radius > 0");
  ThetaEstimate th =
      theta != nullptr ? *theta
                       : theta_forward(sampler, horizon, ep, rng.substream(7));
  if (!(th.value > 0.0))
    throw degenerate_estimate("laplace_functional: theta <= 0");

  const bool simplified_valid = f.vanishing_radius >= 1.0;
  struct Acc {
    RatioAcc general;
    RatioAcc simplified;
    void merge(const Acc& o) {
      general.merge(o.general);
      simplified.merge(o.simplified);
    }
  };
  const double alpha = sampler.alpha();
  auto acc = mc_sharded<Acc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, Acc& a) {
        std::vector<SpectralWindowSample> windows;
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          const double pareto_w = sample_pareto(RadialLaw{alpha}, r);
          windows.clear();
          sampler.draw(r, 0, horizon, windows);
          double w_sum = 0.0, gen = 0.0, simp = 0.0;
          for (const auto& win : windows) {
            const auto norms = window_norms(win, sampler.norm(), 0, horizon);
            double s1 = 0.0;
            for (std::size_t j = 1; j < norms.size(); ++j) s1 = std::max(s1, norms[j]);
            const double s0 = std::max(norms[0], s1);
            w_sum += win.weight;
            if (s0 > 0.0) {
              // general spectral form, y = W/s0 with W Pareto(alpha)
              const double y = pareto_w / s0;
              double sum0 = 0.0, sum1 = 0.0;
              for (std::size_t j = 0; j < norms.size(); ++j) {
                const double fx = f.shape(y * norms[j]);
                sum0 += fx;
                if (j >= 1) sum1 += fx;
              }
              const double e0 = std::exp(-sum0);  // y * s0 = W > 1 always
              const double e1 = (y * s1 > 1.0) ? std::exp(-sum1) : 0.0;
              gen += win.weight * std::pow(s0, alpha) * (e0 - e1);
            }
            if (simplified_valid) {
              double sum0 = 0.0, sum1 = 0.0;
              for (std::size_t j = 0; j < norms.size(); ++j) {
                const double fx = f.shape(pareto_w * norms[j]);
                sum0 += fx;
                if (j >= 1) sum1 += fx;
              }
              simp += win.weight * (std::exp(-sum1) - std::exp(-sum0));
            }
          }
          a.general.add(gen, w_sum);
          if (simplified_valid) a.simplified.add(simp, w_sum);
        }
      });

  LaplaceResult out;
  out.theta = th.value;
  out.n_samples = acc.general.n;
  const double inv_theta = 1.0 / th.value;
  out.general = inv_theta * acc.general.ratio();
  out.general_se = inv_theta * acc.general.se();
  out.simplified_valid = simplified_valid;
  if (simplified_valid) {
    out.simplified = 1.0 - inv_theta * acc.simplified.ratio();
    out.simplified_se = inv_theta * acc.simplified.se();
    check_two_routes(out.general, out.general_se, out.simplified,
                     out.simplified_se, "laplace_functional");
  }
  return out;
}

TimeChangeResult time_change_check(const WindowSampler& sampler, int i, int s,
                                   int t, const WindowFunctional& f,
                                   const ExecPolicy& ep, const RngStream& rng) {
  if (s > 0 || t < 0)
    throw invalid_parameter("time_change_check: need s <= 0 <= t");
  if (!sampler.two_sided())
    throw invalid_parameter(
        "time_change_check: requires a two-sided spectral sampler");
  const int lo = std::min({s - i, s, i});
  const int hi = std::max({t - i, t, i});
  const double alpha = sampler.alpha();

  struct Acc {
    RatioAcc lhs;
    RatioAcc rhs;
    void merge(const Acc& o) {
      lhs.merge(o.lhs);
      rhs.merge(o.rhs);
    }
  };
  auto acc = mc_sharded<Acc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, Acc& a) {
        RngStream rl = r.substream(1);
        // At i = 0 the two sides coincide draw by draw (||Theta_0|| = 1), so
        // sharing the substream makes the reported difference exactly zero.
        RngStream rr = r.substream(i == 0 ? 1 : 2);
        std::vector<SpectralWindowSample> windows;
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          windows.clear();
          sampler.draw(rl, lo, hi, windows);
          double w_sum = 0.0, v = 0.0;
          for (const auto& win : windows) {
            WindowView view{&win, &sampler.norm(), -i, 1.0};
            w_sum += win.weight;
            v += win.weight * f(view);
          }
          a.lhs.add(v, w_sum);

          windows.clear();
          sampler.draw(rr, lo, hi, windows);
          w_sum = 0.0;
          v = 0.0;
          for (const auto& win : windows) {
            WindowView at_i{&win, &sampler.norm(), 0, 1.0};
            const double ni = at_i.norm_at(i);
            w_sum += win.weight;
            if (ni > 0.0) {
              WindowView view{&win, &sampler.norm(), 0, ni};
              v += win.weight * f(view) * std::pow(ni, alpha);
            }
          }
          a.rhs.add(v, w_sum);
        }
      });
  return {acc.lhs.ratio(), acc.rhs.ratio(), acc.lhs.se(), acc.rhs.se()};
}

LagReversalResult lag_reversal_check(const WindowSampler& sampler, int t,
                                     const ExecPolicy& ep, const RngStream& rng) {
  if (!sampler.two_sided())
    throw invalid_parameter("lag_reversal_check: requires a two-sided sampler");
  const int lo = std::min(-std::abs(t), 0);
  const int hi = std::max(std::abs(t), 0);
  const double alpha = sampler.alpha();
  struct Acc {
    RatioAcc lhs;
    RatioAcc rhs;
    void merge(const Acc& o) {
      lhs.merge(o.lhs);
      rhs.merge(o.rhs);
    }
  };
  auto acc = mc_sharded<Acc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, Acc& a) {
        RngStream rl = r.substream(1);
        RngStream rr = r.substream(2);
        std::vector<SpectralWindowSample> windows;
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          windows.clear();
          sampler.draw(rl, lo, hi, windows);
          double w_sum = 0.0, v = 0.0;
          for (const auto& win : windows) {
            WindowView view{&win, &sampler.norm(), 0, 1.0};
            w_sum += win.weight;
            v += win.weight * pow_alpha(view.norm_at(t), alpha);
          }
          a.lhs.add(v, w_sum);

          windows.clear();
          sampler.draw(rr, lo, hi, windows);
          w_sum = 0.0;
          v = 0.0;
          for (const auto& win : windows) {
            WindowView view{&win, &sampler.norm(), 0, 1.0};
            w_sum += win.weight;
            v += win.weight * ((view.norm_at(-t) > 0.0) ? 1.0 : 0.0);
          }
          a.rhs.add(v, w_sum);
        }
      });
  return {acc.lhs.ratio(), acc.rhs.ratio(), acc.lhs.se(), acc.rhs.se()};
}

ThetaEstimate linear_projection_theta(std::span<const double> a,
                                      const WindowSampler& sampler, int horizon,
                                      ProjectionSide side, const ExecPolicy& ep,
                                      const RngStream& rng) {
  if (static_cast<int>(a.size()) != sampler.dim())
    throw invalid_parameter("linear_projection_theta: projection dimension mismatch");
  const double alpha = sampler.alpha();
  auto g = [&](double z) {
    if (side == ProjectionSide::Abs) return pow_alpha(std::fabs(z), alpha);
    return pow_alpha(std::max(z, 0.0), alpha);
  };
  auto acc = mc_sharded<RatioAcc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, RatioAcc& ra) {
        std::vector<SpectralWindowSample> windows;
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          windows.clear();
          sampler.draw(r, 0, horizon, windows);
          double num = 0.0, den = 0.0;
          for (const auto& win : windows) {
            double sup1 = 0.0;
            double g0 = 0.0;
            for (int j = 0; j <= horizon; ++j) {
              const Vec* v = win.get(j);
              const double proj = v != nullptr ? dot(a, *v) : 0.0;
              const double gz = g(proj);
              if (j == 0)
                g0 = gz;
              else
                sup1 = std::max(sup1, gz);
            }
            const double sup0 = std::max(g0, sup1);
            num += win.weight * (sup0 - sup1);
            den += win.weight * g0;
          }
          ra.add(num, den);
        }
      });
  const double nn = static_cast<double>(acc.n);
  const double md = acc.den_mean();
  const double den_var =
      acc.n > 1 ? std::max((acc.sdd - nn * md * md) / (nn - 1.0), 0.0) : 0.0;
  const double den_se = std::sqrt(den_var / nn);
  if (!(md > 3.0 * den_se) || md <= 0.0)
    throw degenerate_estimate(
        "linear_projection_theta: projected denominator not significantly positive");
  return {acc.ratio(), acc.se(), "mc-forward", acc.n, sampler.truncation_note(),
          false};
}

BreimanResult breiman_constant(
    const std::function<void(RngStream&, Mat&)>& a_sampler,
    const SpectralMeasure& spectral, double alpha, const NormSpec& out_norm,
    const ExecPolicy& ep, const RngStream& rng) {
  auto acc = mc_sharded<MeanAcc>(
      ep, rng, [&](RngStream& r, std::uint64_t ndraws, MeanAcc& a) {
        RngStream ra = r.substream(1);  // A independent of Theta
        RngStream rt = r.substream(2);
        Mat A;
        Vec theta(static_cast<std::size_t>(spectral.dim()));
        for (std::uint64_t k = 0; k < ndraws; ++k) {
          a_sampler(ra, A);
          if (A.cols != spectral.dim())
            throw invalid_parameter("breiman_constant: dimension mismatch");
          spectral.sample(rt, theta);
          Vec out(static_cast<std::size_t>(A.rows));
          mat_vec(A, theta, out);
          a.add(pow_alpha(out_norm(out), alpha));
        }
      });
  return {acc.mean(), acc.se(), acc.n};
}

}  // namespace tailproc
