#include "tailproc/rv.hpp"

#include <cmath>
#include <cstddef>

#include "tailproc/errors.hpp"

namespace tailproc {

double sample_pareto(const RadialLaw& law, RngStream& rng) {
  if (!(law.alpha > 0.0) || !std::isfinite(law.alpha))
    throw invalid_parameter("sample_pareto: alpha must be finite and positive");
  return std::pow(rng.uniform_oc(), -1.0 / law.alpha);
}

SpectralMeasure SpectralMeasure::point_masses(std::vector<Vec> atoms,
                                              std::vector<double> weights,
                                              NormSpec norm) {
  if (atoms.empty() || atoms.size() != weights.size())
    throw invalid_parameter("point_masses: need matching, nonempty atoms/weights");
  const int dim = static_cast<int>(atoms.front().size());
  double total = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (static_cast<int>(atoms[i].size()) != dim)
      throw invalid_parameter("point_masses: inconsistent atom dimensions");
    if (!(weights[i] > 0.0))
      throw invalid_parameter("point_masses: weights must be positive");
    const double nv = norm(atoms[i]);
    if (!(nv > 0.0)) throw invalid_parameter("point_masses: zero atom");
    for (double& x : atoms[i]) x /= nv;
    total += weights[i];
  }
  for (double& w : weights) w /= total;

  SpectralMeasure m(dim, std::move(norm));
  m.atoms_ = std::move(atoms);
  m.weights_ = std::move(weights);
  std::vector<double> cum(m.weights_.size());
  double run = 0.0;
  for (std::size_t i = 0; i < m.weights_.size(); ++i) {
    run += m.weights_[i];
    cum[i] = run;
  }
  cum.back() = 1.0;
  m.sampler_ = [atoms = m.atoms_, cum](RngStream& rng, std::span<double> out) {
    const double u = rng.uniform_co();
    std::size_t idx = 0;
    while (idx + 1 < cum.size() && u >= cum[idx]) ++idx;
    const Vec& a = atoms[idx];
    for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j];
  };
  m.desc_ = "point-masses(" + std::to_string(m.atoms_.size()) + ")";
  return m;
}

SpectralMeasure SpectralMeasure::uniform_sphere(int dim) {
  if (dim < 1) throw invalid_parameter("uniform_sphere: dim must be >= 1");
  SpectralMeasure m(dim, NormSpec::euclidean());
  m.sampler_ = [dim](RngStream& rng, std::span<double> out) {
    while (true) {
      double s = 0.0;
      for (int j = 0; j < dim; ++j) {
        out[static_cast<std::size_t>(j)] = rng.gaussian();
        s += out[static_cast<std::size_t>(j)] * out[static_cast<std::size_t>(j)];
      }
      const double r = std::sqrt(s);
      if (r > 1e-150) {
        for (int j = 0; j < dim; ++j) out[static_cast<std::size_t>(j)] /= r;
        return;
      }
    }
  };
  m.desc_ = "uniform-sphere";
  return m;
}

SpectralMeasure SpectralMeasure::pushforward(
    int dim, NormSpec norm,
    std::function<void(RngStream&, std::span<double>)> raw_sampler) {
  if (dim < 1) throw invalid_parameter("pushforward: dim must be >= 1");
  SpectralMeasure m(dim, norm);
  m.sampler_ = [raw = std::move(raw_sampler), norm = m.norm_](
                   RngStream& rng, std::span<double> out) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      raw(rng, out);
      const double nv = norm(out);
      if (nv > 0.0) {
        for (double& x : out) x /= nv;
        return;
      }
    }
    throw degenerate_estimate("pushforward: sampler kept producing zero vectors");
  };
  m.desc_ = "pushforward";
  return m;
}

void SpectralMeasure::sample(RngStream& rng, std::span<double> out) const {
  if (!sampler_) throw invalid_parameter("SpectralMeasure: unset measure");
  if (static_cast<int>(out.size()) != dim_)
    throw invalid_parameter("SpectralMeasure::sample: dimension mismatch");
  sampler_(rng, out);
}

void sample_rv_vector(const RVLaw& law, RngStream& rng, std::span<double> out) {
  if (static_cast<int>(out.size()) != law.spectral.dim())
    throw invalid_parameter("sample_rv_vector: dimension mismatch");
  const double r = sample_pareto(law.radial, rng);
  law.spectral.sample(rng, out);
  for (double& x : out) x *= r;
}

}  // namespace tailproc
