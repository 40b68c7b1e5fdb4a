#include "tailproc/models.hpp"

#include <cmath>
#include <cstddef>

#include "tailproc/errors.hpp"
#include "tailproc/kernels.hpp"

namespace tailproc {

namespace {

void check_arrays(const std::vector<Mat>& arrays, int m, int d, int q,
                  const char* who) {
  if (static_cast<int>(arrays.size()) != m + 1)
    throw invalid_parameter(std::string(who) + ": expected m+1 coefficient matrices");
  for (const Mat& c : arrays)
    if (c.rows != d || c.cols != q)
      throw invalid_parameter(std::string(who) +
                              ": coefficient/innovation dimension mismatch");
}

}  // namespace

CoeffProcess CoeffProcess::deterministic(std::vector<Mat> arrays) {
  if (arrays.empty())
    throw invalid_parameter("CoeffProcess: need at least C_0");
  CoeffProcess p;
  p.mode_ = Mode::Deterministic;
  p.m_ = static_cast<int>(arrays.size()) - 1;
  p.d_ = arrays.front().rows;
  p.q_ = arrays.front().cols;
  check_arrays(arrays, p.m_, p.d_, p.q_, "CoeffProcess::deterministic");
  p.fixed_ = std::move(arrays);
  return p;
}

CoeffProcess CoeffProcess::iid_in_t(int m, int d, int q, DrawOne draw_one) {
  CoeffProcess p;
  p.mode_ = Mode::IidInT;
  p.m_ = m;
  p.d_ = d;
  p.q_ = q;
  p.at_ = [draw = std::move(draw_one)](const RngStream& parent, long long t,
                                       std::vector<Mat>& out) {
    RngStream rng = parent.substream(static_cast<std::uint64_t>(t));
    draw(rng, out);
  };
  return p;
}

CoeffProcess CoeffProcess::user_stationary(int m, int d, int q, AtTime at_time) {
  CoeffProcess p;
  p.mode_ = Mode::UserStationary;
  p.m_ = m;
  p.d_ = d;
  p.q_ = q;
  p.at_ = std::move(at_time);
  return p;
}

void CoeffProcess::at_time(const RngStream& parent, long long t,
                           std::vector<Mat>& out) const {
  if (mode_ == Mode::Deterministic) {
    out = fixed_;
  } else {
    at_(parent, t, out);
    check_arrays(out, m_, d_, q_, "CoeffProcess::at_time");
  }
}

PathMatrix simulate_mma(const MMASpec& spec, std::size_t n, const RngStream& rng,
                        const SimHooks* hooks,
                        std::vector<double>* innovations_out) {
  if (n < 1) throw invalid_parameter("simulate_mma: n must be >= 1");
  if (spec.coeffs.m() != spec.m || spec.coeffs.d() != spec.d ||
      spec.coeffs.q() != spec.q)
    throw invalid_parameter("simulate_mma: coefficient process dimension mismatch");
  if (spec.innovation.dim() != spec.q)
    throw invalid_parameter("simulate_mma: innovation dimension mismatch");

  const std::size_t m = static_cast<std::size_t>(spec.m);
  const std::size_t q = static_cast<std::size_t>(spec.q);
  const std::size_t d = static_cast<std::size_t>(spec.d);

  // Innovations xi_{1-m} .. xi_n, drawn once and reused across overlapping
  // windows; exact, no truncation.
  std::vector<double> innov;
  if (hooks != nullptr && hooks->innovations != nullptr) {
    innov = *hooks->innovations;
    if (innov.size() != (n + m) * q)
      throw invalid_parameter("simulate_mma: injected innovations must be (n+m)*q");
  } else {
    innov.resize((n + m) * q);
    RngStream rng_innov = rng.substream(1);
    for (std::size_t t = 0; t < n + m; ++t)
      sample_rv_vector(spec.innovation, rng_innov,
                       std::span<double>(innov.data() + t * q, q));
  }

  PathMatrix path;
  path.n = n;
  path.d = spec.d;
  path.model_id = spec.model_id;
  path.seed_master = rng.master_seed();
  path.seed_stream = rng.stream_id();
  path.data.assign(n * d, 0.0);

  if (spec.d == 1 && spec.q == 1 && spec.coeffs.is_deterministic()) {
    std::vector<double> coefs(m + 1);
    for (std::size_t i = 0; i <= m; ++i) coefs[i] = spec.coeffs.fixed()[i](0, 0);
    kernels::active().ma_convolve(innov.data(), n, coefs.data(), m + 1,
                                  path.data.data());
  } else {
    const RngStream rng_coeff = rng.substream(2);
    std::vector<Mat> arrays;
    for (std::size_t t = 1; t <= n; ++t) {
      spec.coeffs.at_time(rng_coeff, static_cast<long long>(t), arrays);
      double* row = path.data.data() + (t - 1) * d;
      for (std::size_t i = 0; i <= m; ++i) {
        const Mat& c = arrays[i];
        const double* xi = innov.data() + (t - 1 - i + m) * q;
        for (std::size_t r = 0; r < d; ++r) {
          double s = row[r];
          for (std::size_t k = 0; k < q; ++k)
            s += c(static_cast<int>(r), static_cast<int>(k)) * xi[k];
          row[r] = s;
        }
      }
    }
  }

  for (std::size_t i = 0; i < path.data.size(); ++i)
    if (!std::isfinite(path.data[i]))
      throw divergence_error(static_cast<long long>(i / d + 1),
                             "simulate_mma: non-finite value at step " +
                                 std::to_string(i / d + 1));

  if (innovations_out != nullptr) *innovations_out = std::move(innov);
  return path;
}

PathMatrix simulate_rcar(const RCARSpec& spec, std::size_t n, const RngStream& rng,
                         const SimHooks* hooks) {
  if (n < 1) throw invalid_parameter("simulate_rcar: n must be >= 1");
  if (!spec.ab_sampler) throw invalid_parameter("simulate_rcar: missing ab_sampler");

  const std::size_t d = static_cast<std::size_t>(spec.d);
  Vec state(d, 0.0);
  std::size_t burn = static_cast<std::size_t>(spec.burn_in);
  if (hooks != nullptr && hooks->initial_state != nullptr) {
    if (hooks->initial_state->size() != d)
      throw invalid_parameter("simulate_rcar: initial state dimension mismatch");
    state = *hooks->initial_state;
    burn = 0;
  }

  PathMatrix path;
  path.n = n;
  path.d = spec.d;
  path.model_id = spec.model_id;
  path.seed_master = rng.master_seed();
  path.seed_stream = rng.stream_id();
  path.data.assign(n * d, 0.0);

  RngStream r = rng.substream(1);
  Mat A(spec.d, spec.d);
  Vec B(d, 0.0), next(d, 0.0);
  const long long total = static_cast<long long>(burn + n);
  for (long long step = 1; step <= total; ++step) {
    spec.ab_sampler(r, A, B);
    mat_vec(A, state, next);
    for (std::size_t i = 0; i < d; ++i) {
      next[i] += B[i];
      if (!std::isfinite(next[i])) {
        const long long t = step - static_cast<long long>(burn);
        throw divergence_error(
            t, "simulate_rcar: non-finite state at step " + std::to_string(t) +
                   " (stationarity conditions violated?)");
      }
    }
    state = next;
    if (step > static_cast<long long>(burn)) {
      double* row = path.data.data() + static_cast<std::size_t>(step - burn - 1) * d;
      for (std::size_t i = 0; i < d; ++i) row[i] = state[i];
    }
  }
  return path;
}

PathMatrix simulate_iid(const RVLaw& law, std::size_t n, const RngStream& rng,
                        const std::string& model_id) {
  if (n < 1) throw invalid_parameter("simulate_iid: n must be >= 1");
  const std::size_t d = static_cast<std::size_t>(law.dim());
  PathMatrix path;
  path.n = n;
  path.d = law.dim();
  path.model_id = model_id;
  path.seed_master = rng.master_seed();
  path.seed_stream = rng.stream_id();
  path.data.assign(n * d, 0.0);
  RngStream r = rng.substream(1);
  for (std::size_t t = 0; t < n; ++t)
    sample_rv_vector(law, r, std::span<double>(path.data.data() + t * d, d));
  return path;
}

}  // namespace tailproc
