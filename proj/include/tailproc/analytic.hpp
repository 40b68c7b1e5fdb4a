#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailproc/linalg.hpp"
#include "tailproc/models.hpp"
#include "tailproc/norms.hpp"
#include "tailproc/parallel.hpp"
#include "tailproc/rng.hpp"
#include "tailproc/rv.hpp"

namespace tailproc {

// One importance-weighted window (Theta_s, ..., Theta_t) of the spectral
// process, normalized so ||Theta_0|| = 1. Values outside [s, s+size) are zero.
struct SpectralWindowSample {
  int s = 0;
  std::vector<Vec> values;
  double weight = 1.0;

  int t() const { return s + static_cast<int>(values.size()) - 1; }
  const Vec* get(int j) const {
    if (j < s || j > t()) return nullptr;
    return &values[static_cast<std::size_t>(j - s)];
  }
};

// Forward tail-process window Y_j = Y * Theta_j for j = 0..t; `truncation`
// records why emission stopped ("horizon" or "eps").
struct TailWindow {
  int s = 0;
  std::vector<Vec> values;
  double radius = 1.0;
  double weight = 1.0;
  std::string truncation;
};

// Source of spectral-process windows for a model. Samplers are pure given an
// RngStream, so Monte Carlo loops shard freely.
class WindowSampler {
 public:
  virtual ~WindowSampler() = default;
  virtual int dim() const = 0;
  virtual double alpha() const = 0;
  virtual const NormSpec& norm() const = 0;
  virtual bool two_sided() const = 0;
  // Append every weighted window for one draw, covering indices [s, t].
  // A draw may contribute zero windows (all branch weights zero).
  virtual void draw(RngStream& rng, int s, int t,
                    std::vector<SpectralWindowSample>& out) const = 0;
  virtual std::string truncation_note() const { return {}; }
};

// Trivial tail process: Theta_0 on the sphere, zero elsewhere.
class IidWindowSampler : public WindowSampler {
 public:
  IidWindowSampler(SpectralMeasure spectral, double alpha)
      : spectral_(std::move(spectral)), alpha_(alpha) {}
  int dim() const override { return spectral_.dim(); }
  double alpha() const override { return alpha_; }
  const NormSpec& norm() const override { return spectral_.norm(); }
  bool two_sided() const override { return true; }
  void draw(RngStream& rng, int s, int t,
            std::vector<SpectralWindowSample>& out) const override;

 private:
  SpectralMeasure spectral_;
  double alpha_;
};

// Mixture representation of the moving-average spectral process: per draw,
// one window per branch i with positive ||C_i(0) Theta||, window values
// C_{i+j}(j) Theta / ||C_i(0) Theta|| and weight ||C_i(0) Theta||^alpha.
// Expectations are weighted averages normalized by the mean total weight,
// which itself estimates the tail-equivalence constant c.
class MmaWindowSampler : public WindowSampler {
 public:
  explicit MmaWindowSampler(MMASpec spec) : spec_(std::move(spec)) {}
  int dim() const override { return spec_.d; }
  double alpha() const override { return spec_.alpha(); }
  const NormSpec& norm() const override { return spec_.ambient; }
  bool two_sided() const override { return true; }
  void draw(RngStream& rng, int s, int t,
            std::vector<SpectralWindowSample>& out) const override;
  const MMASpec& spec() const { return spec_; }

 private:
  MMASpec spec_;
};

// Forward spectral process of the autoregression: Theta_j = A_j ... A_1 Theta,
// emitted until the horizon or until the surviving product norm falls below
// eps (remaining values are zero; bias bounded by eps^alpha).
class RcarForwardWindowSampler : public WindowSampler {
 public:
  RcarForwardWindowSampler(RCARSpec spec, double eps = 1e-6)
      : spec_(std::move(spec)), eps_(eps) {}
  int dim() const override { return spec_.d; }
  double alpha() const override { return spec_.alpha; }
  const NormSpec& norm() const override { return spec_.ambient; }
  bool two_sided() const override { return false; }
  void draw(RngStream& rng, int s, int t,
            std::vector<SpectralWindowSample>& out) const override;
  std::string truncation_note() const override;
  const RCARSpec& spec() const { return spec_; }

 private:
  RCARSpec spec_;
  double eps_;
};

struct ThetaEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::string method;  // closed-form | mc-forward | mc-mma | runs | blocks
  std::uint64_t n_samples = 0;
  std::string truncation;
  bool clamped = false;
};

struct ClusterSizeLaw {
  std::vector<double> nu;     // nu[k] = Pr(nu = k), k = 0..K
  std::vector<double> kappa;  // kappa[k-1] = Pr(kappa = k), k = 1..K+1
  int K = 0;
  double tail_bound = 0.0;
  double theta = 0.0;
  double theta_se = 0.0;
  double nu0 = 0.0;
  double nu0_se = 0.0;
  double mean_kappa = 0.0;
  std::uint64_t n_samples = 0;
  std::string truncation;
};

// f(x) = shape(||x||), nonnegative, zero for ||x|| <= vanishing_radius.
struct RadialFunctional {
  std::string name;
  double vanishing_radius = 0.0;
  std::function<double(double)> shape;
};

struct LaplaceResult {
  double general = 0.0;
  double general_se = 0.0;
  double simplified = 0.0;
  double simplified_se = 0.0;
  bool simplified_valid = false;
  double theta = 0.0;
  std::uint64_t n_samples = 0;
  double pooled_se() const;
};

// Read-only view of a window under the index shift and scaling used by the
// time-change identity; norm_at(j) = ||Theta_{j+offset}|| / scale.
struct WindowView {
  const SpectralWindowSample* window = nullptr;
  const NormSpec* norm = nullptr;
  int offset = 0;
  double scale = 1.0;

  std::span<const double> at(int logical) const {
    const Vec* v = window->get(logical + offset);
    if (v == nullptr) return {};
    return {v->data(), v->size()};
  }
  double norm_at(int logical) const {
    const auto v = at(logical);
    if (v.empty()) return 0.0;
    return (*norm)(v) / scale;
  }
};

// Bounded functional of a window; must vanish whenever the anchor coordinate
// (logical index 0) is zero.
using WindowFunctional = std::function<double(const WindowView&)>;

struct TimeChangeResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double pooled_se() const;
};

struct LagReversalResult {
  double lhs = 0.0;  // E ||Theta_t||^alpha
  double rhs = 0.0;  // Pr(Theta_{-t} != 0)
  double lhs_se = 0.0;
  double rhs_se = 0.0;
  double pooled_se() const;
};

struct BreimanResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
};

// ---- operations ----

// One draw of the branch windows (public form of the mixture construction).
std::vector<SpectralWindowSample> mma_spectral_window(const MMASpec& spec, int s,
                                                      int t, RngStream& rng);

// Mean total branch weight, estimating c = sum_i E ||C_i(0) Theta||^alpha.
struct NormalizerEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::string method;
};
NormalizerEstimate mma_normalizer(const MMASpec& spec, const ExecPolicy& ep,
                                  const RngStream& rng);

// theta = E[max_i ||C_i(i) Theta||^alpha] / sum_i E ||C_i(0) Theta||^alpha,
// with the numerator sampled along the stationary diagonal. Deterministic
// coefficients with a finite-atom spectral measure short-circuit to the exact
// closed form (std_error 0).
ThetaEstimate mma_theta(const MMASpec& spec, const ExecPolicy& ep,
                        const RngStream& rng);

// theta = E[sup_{i>=0} ||Theta_i||^alpha - sup_{i>=1} ||Theta_i||^alpha],
// computed in both that form and E[max(1 - sup_{i>=1}, 0)]; the two are
// checked against each other before returning.
ThetaEstimate theta_forward(const WindowSampler& sampler, int horizon,
                            const ExecPolicy& ep, const RngStream& rng);

// Single forward tail window of the autoregression.
TailWindow rcar_forward_tail(const RCARSpec& spec, int horizon, double eps,
                             RngStream& rng);

// Law of nu = #{i >= 1 : ||Y_i|| > 1} and of the cluster size kappa via
// Pr(kappa = k) = theta^-1 {Pr(nu = k-1) - Pr(nu = k)}.
ClusterSizeLaw cluster_size_law(const WindowSampler& sampler, int horizon,
                                const ExecPolicy& ep, const RngStream& rng,
                                const ThetaEstimate* theta = nullptr);

// Laplace functional of the cluster point process, evaluated by Pareto
// importance sampling in the general spectral form and, when the functional
// vanishes on the unit ball, also in the simplified tail-process form.
LaplaceResult laplace_functional(const RadialFunctional& f,
                                 const WindowSampler& sampler, int horizon,
                                 const ExecPolicy& ep, const RngStream& rng,
                                 const ThetaEstimate* theta = nullptr);

// Monte Carlo check of the identity
// E f(Theta_{s-i},...,Theta_{t-i}) =
//   E[ f(Theta_s/||Theta_i||, ...) ||Theta_i||^alpha ].
TimeChangeResult time_change_check(const WindowSampler& sampler, int i, int s,
                                   int t, const WindowFunctional& f,
                                   const ExecPolicy& ep, const RngStream& rng);

// E ||Theta_t||^alpha vs Pr(Theta_{-t} != 0).
LagReversalResult lag_reversal_check(const WindowSampler& sampler, int t,
                                     const ExecPolicy& ep, const RngStream& rng);

enum class ProjectionSide { Abs, Positive };

// Extremal index of the projected series (a' X_t).
ThetaEstimate linear_projection_theta(std::span<const double> a,
                                      const WindowSampler& sampler, int horizon,
                                      ProjectionSide side, const ExecPolicy& ep,
                                      const RngStream& rng);

// E ||A Theta||^alpha for A independent of Theta.
BreimanResult breiman_constant(
    const std::function<void(RngStream&, Mat&)>& a_sampler,
    const SpectralMeasure& spectral, double alpha, const NormSpec& out_norm,
    const ExecPolicy& ep, const RngStream& rng);

}  // namespace tailproc
