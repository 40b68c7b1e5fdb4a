#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tailproc/config.hpp"

namespace tailproc {

struct CliOptions {
  std::optional<std::uint64_t> seed;  // overrides run.master_seed
  int workers = 0;                    // 0 = config, then env, then hardware
  std::string out_dir;                // overrides output.dir
  std::string format;                 // "csv" | "jsonl" | "" (config)
};

// One reported statistic. Context columns (model_id, seed, n, k, r) are added
// at serialization; `u` carries the op parameter (level multiplier, lag,
// shift i, or m) and is 0 when not applicable.
struct ResultRecord {
  int rep = 0;  // 0 = path-independent (analytic)
  std::string op;
  std::string metric;
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::string method;
  double u = 0.0;
  std::string extra;
};

struct ExperimentResult {
  std::vector<ResultRecord> records;
  std::vector<std::string> jsonl_extra;  // distribution records (JSON lines)
  std::size_t resolved_k = 0;
  std::size_t resolved_r = 0;
  double wall_ms = 0.0;
};

enum class OpsFilter { All, AnalyticOnly, EstimateOnly };

// Execute the configured operations (no file output).
ExperimentResult execute_experiment(const ExperimentConfig& cfg,
                                    const CliOptions& opt, OpsFilter filter);

std::string records_to_csv(const ExperimentConfig& cfg,
                           const ExperimentResult& result);
std::string records_to_jsonl(const ExperimentConfig& cfg,
                             const ExperimentResult& result);

// Subcommand bodies; return process exit codes (0 ok; callers map exceptions
// to 2 / 3).
int run_command(const ExperimentConfig& cfg, const CliOptions& opt);
int simulate_command(const ExperimentConfig& cfg, const CliOptions& opt);
int analytic_command(const ExperimentConfig& cfg, const CliOptions& opt);
int estimate_command(const ExperimentConfig& cfg, const CliOptions& opt);

struct VerifyRow {
  std::string name;
  double statistic = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<VerifyRow> verify_battery(const ExperimentConfig& cfg,
                                      const CliOptions& opt, bool corrupt_split);
int verify_command(const ExperimentConfig& cfg, const CliOptions& opt,
                   bool corrupt_split);

int sweep_command(const ExperimentConfig& cfg, const CliOptions& opt,
                  const std::string& ladder_spec);

}  // namespace tailproc
