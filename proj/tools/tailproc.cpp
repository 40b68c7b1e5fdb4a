// tailproc: simulate heavy-tailed multivariate time series and analyze their
// extremal clustering, both analytically (tail/spectral process) and
// empirically (threshold exceedances on simulated paths).

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tailproc/errors.hpp"
#include "tailproc/runner.hpp"
#include "tailproc/version.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string out_dir;
  std::string format;
};

void add_global_flags(CLI::App* cmd, GlobalArgs& args) {
  cmd->add_option("--config", args.config_path, "Experiment config file")
      ->required();
  cmd->add_option("--seed", args.seed, "Master seed (overrides config)");
  cmd->add_option("--workers", args.workers,
                  "Worker threads (0 = config, then TAILPROC_WORKERS, then all cores)");
  cmd->add_option("--out", args.out_dir, "Output directory (overrides config)");
  cmd->add_option("--format", args.format, "Output format: csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

tailproc::CliOptions to_options(const GlobalArgs& args) {
  tailproc::CliOptions opt;
  opt.seed = args.seed;
  opt.workers = args.workers;
  opt.out_dir = args.out_dir;
  opt.format = args.format;
  return opt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tailproc: extremal structure of regularly varying time series"};
  app.set_version_flag("--version", tailproc::kVersion);
  app.require_subcommand(1);

  GlobalArgs sim_args, run_args, analytic_args, estimate_args, verify_args,
      sweep_args;
  std::string ladder;
  bool corrupt_split = false;

  auto* sim = app.add_subcommand("simulate", "Simulate sample paths to CSV");
  add_global_flags(sim, sim_args);
  auto* run = app.add_subcommand("run", "Run all configured operations");
  add_global_flags(run, run_args);
  auto* analytic =
      app.add_subcommand("analytic", "Tail-process analytics (no paths)");
  add_global_flags(analytic, analytic_args);
  auto* estimate =
      app.add_subcommand("estimate", "Path estimators (simulates internally)");
  add_global_flags(estimate, estimate_args);
  auto* verify = app.add_subcommand("verify", "Run the invariant battery");
  add_global_flags(verify, verify_args);
  verify
      ->add_flag("--corrupt-seed-split", corrupt_split,
                 "Test fixture: corrupt stream splitting (negative control)")
      ->group("");  // hidden
  auto* sweep = app.add_subcommand("sweep", "Parameter ladder, long-format CSV");
  add_global_flags(sweep, sweep_args);
  sweep->add_option("--ladder", ladder, "param=v1,v2,... over n, k, r, u, n_mc");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return tailproc::simulate_command(
          tailproc::ExperimentConfig::parse_file(sim_args.config_path),
          to_options(sim_args));
    if (run->parsed())
      return tailproc::run_command(
          tailproc::ExperimentConfig::parse_file(run_args.config_path),
          to_options(run_args));
    if (analytic->parsed())
      return tailproc::analytic_command(
          tailproc::ExperimentConfig::parse_file(analytic_args.config_path),
          to_options(analytic_args));
    if (estimate->parsed())
      return tailproc::estimate_command(
          tailproc::ExperimentConfig::parse_file(estimate_args.config_path),
          to_options(estimate_args));
    if (verify->parsed())
      return tailproc::verify_command(
          tailproc::ExperimentConfig::parse_file(verify_args.config_path),
          to_options(verify_args), corrupt_split);
    if (sweep->parsed())
      return tailproc::sweep_command(
          tailproc::ExperimentConfig::parse_file(sweep_args.config_path),
          to_options(sweep_args), ladder);
  } catch (const tailproc::invalid_parameter& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const tailproc::degenerate_estimate& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const tailproc::empty_estimate& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const tailproc::divergence_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}
