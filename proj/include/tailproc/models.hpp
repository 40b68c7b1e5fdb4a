#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tailproc/linalg.hpp"
#include "tailproc/norms.hpp"
#include "tailproc/rng.hpp"
#include "tailproc/rv.hpp"

namespace tailproc {

// Stationary coefficient-array process {(C_0(t), ..., C_m(t))}. Modes:
// deterministic arrays, iid across t, or a user-supplied stationary rule.
// Random modes are keyed by (parent stream, t) so the same time index always
// yields the same arrays; this gives random access and keeps simulation and
// analytic windows consistent.
class CoeffProcess {
 public:
  enum class Mode { Deterministic, IidInT, UserStationary };

  using AtTime =
      std::function<void(const RngStream& parent, long long t, std::vector<Mat>& out)>;
  using DrawOne = std::function<void(RngStream&, std::vector<Mat>&)>;

  CoeffProcess() = default;

  static CoeffProcess deterministic(std::vector<Mat> arrays);
  static CoeffProcess iid_in_t(int m, int d, int q, DrawOne draw_one);
  // User rule: derive whatever per-time streams are needed from `parent`
  // (e.g. parent.substream(t), parent.substream(t+1)). Stationarity is the
  // caller's responsibility and is not validated.
  static CoeffProcess user_stationary(int m, int d, int q, AtTime at_time);

  Mode mode() const { return mode_; }
  int m() const { return m_; }
  int d() const { return d_; }
  int q() const { return q_; }
  bool is_deterministic() const { return mode_ == Mode::Deterministic; }
  const std::vector<Mat>& fixed() const { return fixed_; }

  void at_time(const RngStream& parent, long long t, std::vector<Mat>& out) const;

 private:
  Mode mode_ = Mode::Deterministic;
  int m_ = -1, d_ = 0, q_ = 0;
  std::vector<Mat> fixed_;
  AtTime at_;
};

// Recorded user attestations of the moment/nondegeneracy hypotheses; carried
// into reports so results state what was assumed rather than verified.
struct MMAAttest {
  bool m1_innovation_rv = true;
  bool m2_coeff_moment = true;
  bool m3_nondegenerate = true;
  std::string note;
};

// Finite-order moving average X_t = sum_{i=0}^m C_i(t) xi_{t-i}.
struct MMASpec {
  int m = 0;
  int d = 1;
  int q = 1;
  RVLaw innovation;                           // law of xi on R^q
  NormSpec ambient = NormSpec::euclidean();   // norm on R^d
  CoeffProcess coeffs;
  MMAAttest attest;
  std::string model_id = "mma";

  double alpha() const { return innovation.radial.alpha; }
};

// Random-coefficient autoregression X_t = A_t X_{t-1} + B_t. The stationary
// law's tail index and spectral measure are supplied by the caller (Kesten
// conditions attested, not verified).
struct RCARSpec {
  int d = 1;
  std::function<void(RngStream&, Mat& A, std::span<double> B)> ab_sampler;
  int burn_in = 1000;
  double alpha = 1.0;
  SpectralMeasure stationary_spectral;
  NormSpec ambient = NormSpec::euclidean();
  std::string model_id = "rcar";
};

struct PathMatrix {
  std::size_t n = 0;
  int d = 0;
  std::vector<double> data;  // row-major n x d, times 1..n
  std::string model_id;
  std::uint64_t seed_master = 0;
  std::uint64_t seed_stream = 0;

  std::span<const double> row(std::size_t t) const {
    return {data.data() + t * static_cast<std::size_t>(d),
            static_cast<std::size_t>(d)};
  }
};

// Test hooks: inject a deterministic innovation sequence ((n+m) x q,
// time-ascending xi_{1-m}..xi_n) and/or an RCAR initial state (skips burn-in).
struct SimHooks {
  const std::vector<double>* innovations = nullptr;
  const std::vector<double>* initial_state = nullptr;
};

PathMatrix simulate_mma(const MMASpec& spec, std::size_t n, const RngStream& rng,
                        const SimHooks* hooks = nullptr,
                        std::vector<double>* innovations_out = nullptr);

PathMatrix simulate_rcar(const RCARSpec& spec, std::size_t n, const RngStream& rng,
                         const SimHooks* hooks = nullptr);

PathMatrix simulate_iid(const RVLaw& law, std::size_t n, const RngStream& rng,
                        const std::string& model_id = "iid");

}  // namespace tailproc
