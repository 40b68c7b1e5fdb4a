#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tailproc/linalg.hpp"
#include "tailproc/norms.hpp"
#include "tailproc/rng.hpp"

namespace tailproc {

// Pareto radial law on [1, inf): Pr(R > y) = y^-alpha.
struct RadialLaw {
  double alpha;
};

// Exact inverse transform, R = U^(-1/alpha) with U uniform on (0,1].
double sample_pareto(const RadialLaw& law, RngStream& rng);

// Distribution on the unit sphere of `norm`; samples are unit vectors up to
// 1e-12. Built-ins: weighted point masses, uniform on the euclidean sphere,
// and the pushforward v/||v|| of an arbitrary vector sampler.
class SpectralMeasure {
 public:
  // Unset measure; sampling throws until one of the factories is used.
  SpectralMeasure() : dim_(0) {}

  int dim() const { return dim_; }
  const NormSpec& norm() const { return norm_; }
  void sample(RngStream& rng, std::span<double> out) const;

  // Atoms are normalized at construction; weights must be positive and are
  // normalized to sum to 1.
  static SpectralMeasure point_masses(std::vector<Vec> atoms,
                                      std::vector<double> weights, NormSpec norm);
  static SpectralMeasure uniform_sphere(int dim);
  static SpectralMeasure pushforward(
      int dim, NormSpec norm,
      std::function<void(RngStream&, std::span<double>)> raw_sampler);

  // Exposed when the measure is a finite atom list (closed-form evaluation
  // paths); empty otherwise.
  const std::vector<Vec>& atoms() const { return atoms_; }
  const std::vector<double>& weights() const { return weights_; }
  bool is_finite_atomic() const { return !atoms_.empty(); }

  std::string describe() const { return desc_; }

 private:
  SpectralMeasure(int dim, NormSpec norm) : dim_(dim), norm_(std::move(norm)) {}

  int dim_;
  NormSpec norm_ = NormSpec::euclidean();
  std::function<void(RngStream&, std::span<double>)> sampler_;
  std::vector<Vec> atoms_;
  std::vector<double> weights_;        // cumulative in sampler_, raw here
  std::string desc_;
};

// Regularly varying law: V = R * Theta with independent Pareto radius and
// spherical angle.
struct RVLaw {
  RadialLaw radial;
  SpectralMeasure spectral;

  int dim() const { return spectral.dim(); }
};

void sample_rv_vector(const RVLaw& law, RngStream& rng, std::span<double> out);

}  // namespace tailproc
