#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tailproc/analytic.hpp"
#include "tailproc/estimators.hpp"
#include "tailproc/models.hpp"

namespace tailproc {

// Flat sectioned key=value config (INI-style). Unknown sections or keys are
// rejected with the offending key named; '#' starts a comment.
struct ModelConfig {
  std::string id;
  std::string family = "iid";  // mma | rcar | iid
  int d = 1;
  int q = 1;
  int m = 0;
  double alpha = 1.0;
  std::string spectral = "point:1@1";
  std::string norm = "euclidean";
  std::string coeff_mode = "deterministic";  // deterministic | iid-uniform
  std::vector<std::vector<double>> coeff;    // coeff[i]: d*q entries row-major
  double coeff_jitter = 0.5;                 // iid-uniform: scale U(1-j, 1+j)
  std::vector<double> a;                     // rcar: d*d entries
  double b_alpha = 1.0;
  std::string b_spectral = "point:1@1";
  int burn_in = 1000;
};

struct AnalysisConfig {
  std::vector<std::string> ops;
  std::size_t k = 0;
  double p = 0.0;
  bool use_quantile = false;
  std::string r_rule = "power:0.6";  // explicit:<r> | power:<gamma>
  std::vector<double> u_levels{1.0, 2.0, 4.0};
  int horizon = 64;
  double eps = 1e-6;
  std::uint64_t n_mc = 100000;
  int window_s = -2;
  int window_t = 2;
  std::vector<std::size_t> m_list{1, 2, 3, 5, 10};
  std::string functionals;            // manifest path; empty = built-in battery
  std::vector<double> projection;     // linear-projection vector (optional)
};

struct RunConfig {
  std::size_t n = 10000;
  int replicates = 1;
  std::uint64_t master_seed = 1;
  int shards = 64;
  int workers = 0;  // 0 = env/auto
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "jsonl"};
  bool write_path = false;
};

struct ExperimentConfig {
  ModelConfig model;
  AnalysisConfig analysis;
  RunConfig run;
  OutputConfig output;
  std::string raw;
  std::string hash_hex;

  static ExperimentConfig parse_string(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);

  BlockSpec block_spec() const;
  ThresholdSpec threshold_spec() const;
};

// Materialized model: exactly one of the three specs is set.
struct BuiltModel {
  std::string family;
  std::string id;
  double alpha = 1.0;
  NormSpec ambient = NormSpec::euclidean();
  std::optional<MMASpec> mma;
  std::optional<RCARSpec> rcar;
  std::optional<RVLaw> iid;

  std::unique_ptr<WindowSampler> make_sampler(double eps) const;
};

NormSpec parse_norm(const std::string& text, const std::string& key);
SpectralMeasure parse_spectral(const std::string& text, int dim, NormSpec norm,
                               const std::string& key);

BuiltModel build_model(const ModelConfig& mc);
PathMatrix simulate_model(const BuiltModel& model, std::size_t n,
                          const RngStream& rng,
                          std::vector<double>* innovations_out = nullptr);

}  // namespace tailproc
