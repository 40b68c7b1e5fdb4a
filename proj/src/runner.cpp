#include "tailproc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tailproc/errors.hpp"
#include "tailproc/functionals.hpp"
#include "tailproc/io.hpp"
#include "tailproc/kernels.hpp"
#include "tailproc/stats.hpp"
#include "tailproc/version.hpp"

namespace tailproc {

namespace {

using nlohmann::json;

constexpr double kFpGuard = 1e-9;

std::uint64_t op_tag(const std::string& op) { return fnv1a64(op); }

bool contains(const std::vector<std::string>& ops, const std::string& op) {
  return std::find(ops.begin(), ops.end(), op) != ops.end();
}

const std::set<std::string> kAnalyticOps = {
    "theta-forward", "mma-theta",    "normalizer",   "cluster-law",
    "laplace",       "timechange",   "lag-reversal", "linproj-theta"};
const std::set<std::string> kEstimatorOps = {
    "threshold",  "tailprocess", "runs",        "blocks",         "clusters",
    "pointprocess", "anticluster", "tail-equivalence"};

std::vector<std::string> default_ops(const BuiltModel& model) {
  std::vector<std::string> ops = {"threshold",   "tailprocess",  "runs",
                                  "blocks",      "clusters",     "pointprocess",
                                  "anticluster", "theta-forward", "cluster-law",
                                  "laplace"};
  if (model.family == "mma") {
    ops.push_back("mma-theta");
    ops.push_back("normalizer");
    ops.push_back("timechange");
    ops.push_back("lag-reversal");
    ops.push_back("tail-equivalence");
  } else if (model.family == "iid") {
    ops.push_back("timechange");
    ops.push_back("lag-reversal");
  }
  return ops;
}

struct Ctx {
  const ExperimentConfig& cfg;
  const BuiltModel& model;
  ExecPolicy ep;
  std::uint64_t seed = 0;
  RngStream root;
  FunctionalBattery battery;
};

void push(ExperimentResult& res, ResultRecord rec) {
  res.records.push_back(std::move(rec));
}

void run_analytic_ops(const Ctx& ctx, const std::vector<std::string>& ops,
                      ExperimentResult& res) {
  const auto& cfg = ctx.cfg;
  const auto sampler = ctx.model.make_sampler(cfg.analysis.eps);
  const int horizon = cfg.analysis.horizon;

  if (contains(ops, "theta-forward")) {
    const auto th = theta_forward(*sampler, horizon, ctx.ep,
                                  ctx.root.substream(op_tag("theta-forward")));
    push(res, {0, "theta-forward", "theta", th.value, th.std_error, th.n_samples,
               th.method, 0.0, th.truncation});
  }

  if (contains(ops, "mma-theta")) {
    if (!ctx.model.mma)
      throw config_error("analysis.ops", "mma-theta requires model.family = mma");
    const auto th = mma_theta(*ctx.model.mma, ctx.ep,
                              ctx.root.substream(op_tag("mma-theta")));
    push(res, {0, "mma-theta", "theta", th.value, th.std_error, th.n_samples,
               th.method, 0.0, ""});
  }

  if (contains(ops, "normalizer")) {
    if (!ctx.model.mma)
      throw config_error("analysis.ops", "normalizer requires model.family = mma");
    const auto c = mma_normalizer(*ctx.model.mma, ctx.ep,
                                  ctx.root.substream(op_tag("normalizer")));
    push(res, {0, "normalizer", "c", c.value, c.std_error, c.n_samples, c.method,
               0.0, ""});
  }

  if (contains(ops, "cluster-law")) {
    const auto law = cluster_size_law(*sampler, horizon, ctx.ep,
                                      ctx.root.substream(op_tag("cluster-law")));
    push(res, {0, "cluster-law", "theta", law.theta, law.theta_se, law.n_samples,
               "mc-forward", 0.0, law.truncation});
    push(res, {0, "cluster-law", "nu0", law.nu0, law.nu0_se, law.n_samples,
               "mc-forward", 0.0, ""});
    push(res, {0, "cluster-law", "mean_kappa", law.mean_kappa, 0.0, law.n_samples,
               "mc-forward", 0.0, ""});
    push(res, {0, "cluster-law", "tail_bound", law.tail_bound, 0.0, law.n_samples,
               "mc-forward", 0.0, ""});
    for (std::size_t k = 1; k <= law.kappa.size() && k <= 8; ++k)
      push(res, {0, "cluster-law", "kappa_prob", law.kappa[k - 1], 0.0,
                 law.n_samples, "mc-forward", static_cast<double>(k), ""});
    json dist;
    dist["record"] = "cluster-law";
    dist["model_id"] = ctx.model.id;
    dist["seed"] = ctx.seed;
    dist["nu"] = law.nu;
    dist["kappa"] = law.kappa;
    dist["K"] = law.K;
    dist["tail_bound"] = law.tail_bound;
    dist["theta"] = law.theta;
    dist["n_samples"] = law.n_samples;
    dist["truncation"] = law.truncation;
    res.jsonl_extra.push_back(dist.dump());
  }

  if (contains(ops, "laplace")) {
    int idx = 0;
    for (const auto& f : ctx.battery.laplace) {
      const auto lr = laplace_functional(
          f, *sampler, horizon, ctx.ep,
          ctx.root.substream(op_tag("laplace") + static_cast<std::uint64_t>(idx)));
      push(res, {0, "laplace", "general", lr.general, lr.general_se, lr.n_samples,
                 "mc-forward", 0.0, f.name});
      if (lr.simplified_valid)
        push(res, {0, "laplace", "simplified", lr.simplified, lr.simplified_se,
                   lr.n_samples, "mc-forward", 0.0, f.name});
      ++idx;
    }
  }

  if (contains(ops, "timechange")) {
    if (!sampler->two_sided())
      throw config_error("analysis.ops",
                         "timechange requires a two-sided model (mma or iid)");
    int idx = 0;
    for (int i = -2; i <= 2; ++i) {
      for (const auto& nf : ctx.battery.time_change) {
        const auto tc = time_change_check(
            *sampler, i, cfg.analysis.window_s, cfg.analysis.window_t, nf.fn,
            ctx.ep,
            ctx.root.substream(op_tag("timechange") + static_cast<std::uint64_t>(idx)));
        std::ostringstream extra;
        extra << nf.name << " lhs=" << format_double(tc.lhs)
              << " rhs=" << format_double(tc.rhs);
        push(res, {0, "timechange", "gap", tc.lhs - tc.rhs, tc.pooled_se(),
                   ctx.ep.n_mc, "mc", static_cast<double>(i), extra.str()});
        ++idx;
      }
    }
  }

  if (contains(ops, "lag-reversal")) {
    if (!sampler->two_sided())
      throw config_error("analysis.ops",
                         "lag-reversal requires a two-sided model (mma or iid)");
    const auto lr = lag_reversal_check(*sampler, 1, ctx.ep,
                                       ctx.root.substream(op_tag("lag-reversal")));
    std::ostringstream extra;
    extra << "lhs=E|Theta_1|^a=" << format_double(lr.lhs)
          << " rhs=P(Theta_-1!=0)=" << format_double(lr.rhs);
    push(res, {0, "lag-reversal", "gap", lr.lhs - lr.rhs, lr.pooled_se(),
               ctx.ep.n_mc, "mc", 1.0, extra.str()});
  }

  if (contains(ops, "linproj-theta")) {
    if (cfg.analysis.projection.empty())
      throw config_error("analysis.projection",
                         "linproj-theta requires a projection vector");
    const auto th_abs = linear_projection_theta(
        cfg.analysis.projection, *sampler, horizon, ProjectionSide::Abs, ctx.ep,
        ctx.root.substream(op_tag("linproj-abs")));
    push(res, {0, "linproj-theta", "theta_abs", th_abs.value, th_abs.std_error,
               th_abs.n_samples, th_abs.method, 0.0, ""});
    const auto th_pos = linear_projection_theta(
        cfg.analysis.projection, *sampler, horizon, ProjectionSide::Positive,
        ctx.ep, ctx.root.substream(op_tag("linproj-pos")));
    push(res, {0, "linproj-theta", "theta_pos", th_pos.value, th_pos.std_error,
               th_pos.n_samples, th_pos.method, 0.0, ""});
  }
}

void run_estimator_ops(const Ctx& ctx, const std::vector<std::string>& ops, int rep,
                       ExperimentResult& res) {
  const auto& cfg = ctx.cfg;
  const bool need_innovations = contains(ops, "tail-equivalence");
  std::vector<double> innovations;
  const RngStream path_rng = ctx.root.substream(1000 + static_cast<std::uint64_t>(rep));
  const PathMatrix path =
      simulate_model(ctx.model, cfg.run.n, path_rng,
                     need_innovations && ctx.model.mma ? &innovations : nullptr);
  const PathNorms norms = path_norms(path, ctx.model.ambient);
  const ThresholdSpec threshold = select_threshold(norms, cfg.threshold_spec());
  const std::size_t r = cfg.block_spec().resolve(cfg.run.n);
  res.resolved_k = threshold.k;
  res.resolved_r = r;

  if (contains(ops, "threshold")) {
    std::string warn;
    for (const auto& w : threshold.warnings) warn += (warn.empty() ? "" : "; ") + w;
    push(res, {rep, "threshold", "level", threshold.level, 0.0, threshold.n, "",
               0.0, warn});
    push(res, {rep, "threshold", "n_exceed",
               static_cast<double>(threshold.n_exceed), 0.0, threshold.n, "", 0.0,
               ""});
  }

  if (contains(ops, "tailprocess")) {
    const auto etp =
        empirical_tail_process(path, norms, threshold, cfg.analysis.window_s,
                               cfg.analysis.window_t, /*spectral=*/true);
    push(res, {rep, "tailprocess", "anchor_count",
               static_cast<double>(etp.anchors.size()), 0.0, etp.anchors.size(),
               "", 0.0, ""});
    std::vector<double> ratios = etp.anchor_ratios;
    const double ks = ks_statistic_pareto(ratios, ctx.model.alpha);
    push(res, {rep, "tailprocess", "anchor_ks", ks, 0.0, etp.anchors.size(), "",
               0.0, "crit1pct=" +
                        format_double(ks_critical(
                            0.01, static_cast<double>(etp.anchors.size())))});
    for (int j = cfg.analysis.window_s; j <= cfg.analysis.window_t; ++j) {
      if (j == 0) continue;
      MeanAcc acc;
      MeanAcc near1;
      for (const auto& w : etp.windows) {
        const double nv =
            ctx.model.ambient(w[static_cast<std::size_t>(j - cfg.analysis.window_s)]);
        acc.add(nv);
        near1.add(nv > 0.9 && nv < 1.1 ? 1.0 : 0.0);
      }
      push(res, {rep, "tailprocess", "mean_specnorm", acc.mean(), acc.se(), acc.n,
                 "", static_cast<double>(j), ""});
      push(res, {rep, "tailprocess", "specnorm_near_one", near1.mean(), near1.se(),
                 near1.n, "", static_cast<double>(j), ""});
    }
  }

  if (contains(ops, "runs")) {
    const auto th = runs_estimator(norms, threshold, r);
    push(res, {rep, "runs", "theta", th.value, th.std_error, th.n_samples,
               th.method, 0.0, "se-approx-binomial"});
  }

  if (contains(ops, "blocks")) {
    const auto th = blocks_estimator(norms, threshold, r);
    push(res, {rep, "blocks", "theta", th.value, th.std_error, th.n_samples,
               th.method, 0.0, th.clamped ? "clamped" : ""});
  }

  if (contains(ops, "clusters")) {
    const auto part = extract_clusters(path, norms, threshold, r);
    push(res, {rep, "clusters", "cluster_count",
               static_cast<double>(part.clusters.size()), 0.0,
               part.clusters.size(), "", 0.0, ""});
    push(res, {rep, "clusters", "mean_size", part.mean_size(), 0.0,
               part.clusters.size(), "", 0.0, ""});
    const auto law = part.size_law();
    for (std::size_t k = 1; k <= law.size() && k <= 8; ++k)
      push(res, {rep, "clusters", "kappa_prob", law[k - 1],
                 binomial_se(law[k - 1], part.clusters.size()),
                 part.clusters.size(), "", static_cast<double>(k), ""});
    json dist;
    dist["record"] = "cluster-sizes";
    dist["model_id"] = ctx.model.id;
    dist["seed"] = ctx.seed;
    dist["rep"] = rep;
    dist["r"] = r;
    dist["level"] = part.level;
    dist["law"] = law;
    res.jsonl_extra.push_back(dist.dump());
  }

  if (contains(ops, "pointprocess")) {
    const auto summary = point_process_summary(norms, threshold, r,
                                               cfg.analysis.u_levels,
                                               ctx.model.alpha);
    for (const auto& ls : summary.levels) {
      push(res, {rep, "pointprocess", "cluster_count",
                 static_cast<double>(ls.cluster_count), 0.0, 0, "", ls.u, ""});
      push(res, {rep, "pointprocess", "exceed_count",
                 static_cast<double>(ls.exceed_count), 0.0, 0, "", ls.u, ""});
      push(res, {rep, "pointprocess", "dispersion_quarters", ls.dispersion_quarters,
                 0.0, 0, "", ls.u, ""});
      push(res, {rep, "pointprocess", "dispersion_halves", ls.dispersion_halves,
                 0.0, 0, "", ls.u, ""});
      push(res, {rep, "pointprocess", "implied_theta", ls.implied_theta, 0.0, 0,
                 "", ls.u, ""});
      push(res, {rep, "pointprocess", "mean_cluster_size", ls.mean_cluster_size,
                 0.0, 0, "", ls.u, ""});
      push(res, {rep, "pointprocess", "mean_mark", ls.mean_mark, 0.0, 0, "", ls.u,
                 ""});
    }
  }

  if (contains(ops, "anticluster")) {
    const auto rows =
        anticluster_diagnostic(norms, threshold, cfg.analysis.m_list, r);
    for (const auto& row : rows)
      push(res, {rep, "anticluster", "prob", row.prob, row.se, row.n_anchors, "",
                 static_cast<double>(row.m), ""});
  }

  if (contains(ops, "tail-equivalence")) {
    if (!ctx.model.mma)
      throw config_error("analysis.ops",
                         "tail-equivalence requires model.family = mma");
    const auto& spec = *ctx.model.mma;
    const std::size_t m = static_cast<std::size_t>(spec.m);
    const std::size_t q = static_cast<std::size_t>(spec.q);
    const std::size_t n = cfg.run.n;
    // Innovation norms for times 1..n (skip the m pre-window rows).
    std::vector<double> xi_norms(n);
    const NormSpec xi_norm = spec.innovation.spectral.norm();
    if (xi_norm.kind() == NormSpec::Kind::Euclidean)
      kernels::active().row_norms_euclidean(innovations.data() + m * q, n, q,
                                            xi_norms.data());
    else
      for (std::size_t t = 0; t < n; ++t)
        xi_norms[t] = xi_norm(
            std::span<const double>(innovations.data() + (t + m) * q, q));
    PathNorms xi_pn{std::move(xi_norms)};
    const auto xi_threshold = select_threshold(
        xi_pn, ThresholdSpec::order_statistic(threshold.k));
    const std::size_t count_x = kernels::active().count_greater(
        norms.values.data(), n, xi_threshold.level);
    const double ratio = static_cast<double>(count_x) /
                         static_cast<double>(xi_threshold.n_exceed);
    const double se = ratio / std::sqrt(static_cast<double>(count_x));
    push(res, {rep, "tail-equivalence", "tail_ratio", ratio, se, count_x, "",
               0.0, "xi_level=" + format_double(xi_threshold.level)});
  }
}

Ctx make_ctx(const ExperimentConfig& cfg, const BuiltModel& model,
             const CliOptions& opt) {
  const std::uint64_t seed = opt.seed.value_or(cfg.run.master_seed);
  const int workers = opt.workers > 0 ? opt.workers : cfg.run.workers;
  Ctx ctx{cfg,
          model,
          ExecPolicy{cfg.analysis.n_mc, cfg.run.shards, workers},
          seed,
          RngStream(seed, 0),
          cfg.analysis.functionals.empty()
              ? default_functional_battery()
              : load_functional_manifest(cfg.analysis.functionals)};
  return ctx;
}

}  // namespace

ExperimentResult execute_experiment(const ExperimentConfig& cfg,
                                    const CliOptions& opt, OpsFilter filter) {
  const auto start = std::chrono::steady_clock::now();
  const BuiltModel model = build_model(cfg.model);
  const Ctx ctx = make_ctx(cfg, model, opt);

  std::vector<std::string> ops =
      cfg.analysis.ops.empty() ? default_ops(model) : cfg.analysis.ops;
  std::vector<std::string> analytic, estimator;
  for (const auto& op : ops) {
    if (kAnalyticOps.count(op) &&
        (filter == OpsFilter::All || filter == OpsFilter::AnalyticOnly))
      analytic.push_back(op);
    if (kEstimatorOps.count(op) &&
        (filter == OpsFilter::All || filter == OpsFilter::EstimateOnly))
      estimator.push_back(op);
  }

  ExperimentResult res;
  if (!analytic.empty()) run_analytic_ops(ctx, analytic, res);
  if (!estimator.empty())
    for (int rep = 1; rep <= cfg.run.replicates; ++rep)
      run_estimator_ops(ctx, estimator, rep, res);

  res.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  return res;
}

namespace {

json record_to_json(const ExperimentConfig& cfg, const ExperimentResult& res,
                    std::uint64_t seed, const ResultRecord& r) {
  json j;
  j["model_id"] = cfg.model.id;
  j["seed"] = seed;
  j["rep"] = r.rep;
  j["n"] = cfg.run.n;
  j["k"] = res.resolved_k;
  j["r"] = res.resolved_r;
  j["u"] = r.u;
  j["op"] = r.op;
  j["metric"] = r.metric;
  j["value"] = r.value;
  j["std_error"] = r.std_error;
  j["n_samples"] = r.n_samples;
  j["method"] = r.method;
  j["extra"] = r.extra;
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

}  // namespace

std::string records_to_csv(const ExperimentConfig& cfg,
                           const ExperimentResult& result) {
  std::ostringstream out;
  out << "model_id,seed,rep,n,k,r,u,op,metric,value,std_error,n_samples,method,"
         "extra\n";
  const std::uint64_t seed = cfg.run.master_seed;
  for (const auto& r : result.records) {
    out << csv_escape(cfg.model.id) << "," << seed << "," << r.rep << ","
        << cfg.run.n << "," << result.resolved_k << "," << result.resolved_r << ","
        << format_double(r.u) << "," << r.op << "," << r.metric << ","
        << format_double(r.value) << "," << format_double(r.std_error) << ","
        << r.n_samples << "," << r.method << "," << csv_escape(r.extra) << "\n";
  }
  return out.str();
}

std::string records_to_jsonl(const ExperimentConfig& cfg,
                             const ExperimentResult& result) {
  std::ostringstream out;
  for (const auto& r : result.records)
    out << record_to_json(cfg, result, cfg.run.master_seed, r).dump() << "\n";
  for (const auto& line : result.jsonl_extra) out << line << "\n";
  return out.str();
}

namespace {

struct OutputPlan {
  std::string dir;
  bool csv = false;
  bool jsonl = false;
};

OutputPlan make_plan(const ExperimentConfig& cfg, const CliOptions& opt) {
  OutputPlan plan;
  plan.dir = opt.out_dir.empty() ? cfg.output.dir : opt.out_dir;
  if (!opt.format.empty()) {
    plan.csv = opt.format == "csv";
    plan.jsonl = opt.format == "jsonl";
  } else {
    for (const auto& f : cfg.output.formats) {
      if (f == "csv") plan.csv = true;
      if (f == "jsonl") plan.jsonl = true;
    }
  }
  return plan;
}

ExperimentConfig with_seed(const ExperimentConfig& cfg, const CliOptions& opt) {
  ExperimentConfig out = cfg;
  if (opt.seed) out.run.master_seed = *opt.seed;
  return out;
}

void write_report(const ExperimentConfig& cfg, const ExperimentResult& res,
                  const OutputPlan& plan, const std::string& results_payload) {
  json report;
  report["config_hash"] = cfg.hash_hex;
  report["library_version"] = kVersion;
  report["wall_clock_ms"] = res.wall_ms;  // timing only; excluded from byte checks
  report["n_records"] = res.records.size();
  report["results_hash"] = [&] {
    char hex[24];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(results_payload)));
    return std::string(hex);
  }();
  report["simd"] = kernels::active().name;
  atomic_write_file(plan.dir + "/report.json", report.dump(2) + "\n");
}

}  // namespace

int run_command(const ExperimentConfig& cfg_in, const CliOptions& opt) {
  const ExperimentConfig cfg = with_seed(cfg_in, opt);
  const OutputPlan plan = make_plan(cfg, opt);
  ensure_directory(plan.dir);
  const auto res = execute_experiment(cfg, opt, OpsFilter::All);
  std::string payload;
  if (plan.csv) {
    payload = records_to_csv(cfg, res);
    atomic_write_file(plan.dir + "/results.csv", payload);
  }
  if (plan.jsonl) {
    const std::string jl = records_to_jsonl(cfg, res);
    if (payload.empty()) payload = jl;
    atomic_write_file(plan.dir + "/estimates.jsonl", jl);
  }
  if (cfg.output.write_path) {
    const BuiltModel model = build_model(cfg.model);
    for (int rep = 1; rep <= cfg.run.replicates; ++rep) {
      const RngStream path_rng =
          RngStream(cfg.run.master_seed, 0).substream(1000 + static_cast<std::uint64_t>(rep));
      const PathMatrix path = simulate_model(model, cfg.run.n, path_rng);
      const std::string stem = plan.dir + "/path_rep" + std::to_string(rep);
      atomic_write_file(stem + ".csv", path_to_csv(path));
      atomic_write_file(stem + ".meta", path_metadata(path, model.alpha));
    }
  }
  write_report(cfg, res, plan, payload);
  std::printf("run: %zu records -> %s (wall %.0f ms)\n", res.records.size(),
              plan.dir.c_str(), res.wall_ms);
  return 0;
}

int simulate_command(const ExperimentConfig& cfg_in, const CliOptions& opt) {
  const ExperimentConfig cfg = with_seed(cfg_in, opt);
  const OutputPlan plan = make_plan(cfg, opt);
  ensure_directory(plan.dir);
  const BuiltModel model = build_model(cfg.model);
  for (int rep = 1; rep <= cfg.run.replicates; ++rep) {
    const RngStream path_rng =
        RngStream(cfg.run.master_seed, 0).substream(1000 + static_cast<std::uint64_t>(rep));
    const PathMatrix path = simulate_model(model, cfg.run.n, path_rng);
    const std::string stem = plan.dir + "/path_rep" + std::to_string(rep);
    atomic_write_file(stem + ".csv", path_to_csv(path));
    atomic_write_file(stem + ".meta", path_metadata(path, model.alpha));
    std::printf("simulate: wrote %s.csv (n=%zu, d=%d)\n", stem.c_str(), path.n,
                path.d);
  }
  return 0;
}

namespace {

int filtered_command(const ExperimentConfig& cfg_in, const CliOptions& opt,
                     OpsFilter filter, const char* label) {
  const ExperimentConfig cfg = with_seed(cfg_in, opt);
  const OutputPlan plan = make_plan(cfg, opt);
  ensure_directory(plan.dir);
  const auto res = execute_experiment(cfg, opt, filter);
  std::string payload;
  if (plan.csv) {
    payload = records_to_csv(cfg, res);
    atomic_write_file(plan.dir + "/results.csv", payload);
  }
  if (plan.jsonl) {
    const std::string jl = records_to_jsonl(cfg, res);
    if (payload.empty()) payload = jl;
    atomic_write_file(plan.dir + "/estimates.jsonl", jl);
  }
  write_report(cfg, res, plan, payload);
  std::printf("%s: %zu records -> %s\n", label, res.records.size(),
              plan.dir.c_str());
  return 0;
}

}  // namespace

int analytic_command(const ExperimentConfig& cfg, const CliOptions& opt) {
  return filtered_command(cfg, opt, OpsFilter::AnalyticOnly, "analytic");
}

int estimate_command(const ExperimentConfig& cfg, const CliOptions& opt) {
  return filtered_command(cfg, opt, OpsFilter::EstimateOnly, "estimate");
}

// ---- verify ----

std::vector<VerifyRow> verify_battery(const ExperimentConfig& cfg_in,
                                      const CliOptions& opt, bool corrupt_split) {
  const ExperimentConfig cfg = with_seed(cfg_in, opt);
  const BuiltModel model = build_model(cfg.model);
  const Ctx ctx = make_ctx(cfg, model, opt);
  const auto sampler = model.make_sampler(cfg.analysis.eps);
  const int horizon = cfg.analysis.horizon;
  std::vector<VerifyRow> rows;
  auto add = [&](const std::string& name, double stat, double tol) {
    rows.push_back({name, stat, tol, std::fabs(stat) <= tol});
  };

  // theta coherence: forward formula vs closed/diagonal form (mma only)
  const auto th_fwd = theta_forward(*sampler, horizon, ctx.ep,
                                    ctx.root.substream(op_tag("v-theta-fwd")));
  if (model.mma) {
    const auto th_mma =
        mma_theta(*model.mma, ctx.ep, ctx.root.substream(op_tag("v-theta-mma")));
    add("theta_forward_vs_mma",
        th_fwd.value - th_mma.value,
        3.0 * std::sqrt(th_fwd.std_error * th_fwd.std_error +
                        th_mma.std_error * th_mma.std_error) +
            kFpGuard);
  }

  // cluster-law coherence
  const auto law = cluster_size_law(*sampler, horizon, ctx.ep,
                                    ctx.root.substream(op_tag("v-cluster-law")));
  add("cluster_nu0_vs_theta", law.nu0 - law.theta,
      3.0 * std::sqrt(law.nu0_se * law.nu0_se + law.theta_se * law.theta_se) +
          kFpGuard);
  add("mean_kappa_vs_inv_theta", law.mean_kappa - 1.0 / law.theta,
      3.0 *
              std::sqrt(law.theta_se * law.theta_se +
                        4.0 * law.nu0_se * law.nu0_se) /
              (law.theta * law.theta) +
          kFpGuard);

  // Laplace coherence for every battery functional vanishing on the unit ball
  {
    int idx = 0;
    for (const auto& f : ctx.battery.laplace) {
      const auto lr = laplace_functional(
          f, *sampler, horizon, ctx.ep,
          ctx.root.substream(op_tag("v-laplace") + static_cast<std::uint64_t>(idx)));
      if (lr.simplified_valid)
        add("laplace_coherence/" + f.name, lr.general - lr.simplified,
            3.0 * lr.pooled_se() + kFpGuard);
      ++idx;
    }
  }

  // time-change identity and lag reversal (two-sided models)
  if (sampler->two_sided()) {
    int idx = 0;
    for (int i = -2; i <= 2; ++i)
      for (const auto& nf : ctx.battery.time_change) {
        const auto tc = time_change_check(
            *sampler, i, cfg.analysis.window_s, cfg.analysis.window_t, nf.fn,
            ctx.ep,
            ctx.root.substream(op_tag("v-timechange") + static_cast<std::uint64_t>(idx)));
        add("timechange/i=" + std::to_string(i) + "/" + nf.name, tc.lhs - tc.rhs,
            3.0 * tc.pooled_se() + kFpGuard);
        ++idx;
      }
    const auto lrv = lag_reversal_check(*sampler, 1, ctx.ep,
                                        ctx.root.substream(op_tag("v-lagrev")));
    add("lag_reversal_t1", lrv.lhs - lrv.rhs, 3.0 * lrv.pooled_se() + kFpGuard);
  }

  // runs vs blocks vs analytic theta on one simulated path
  {
    const RngStream path_rng = ctx.root.substream(1000 + 1);
    const PathMatrix path = simulate_model(model, cfg.run.n, path_rng);
    const PathNorms norms = path_norms(path, model.ambient);
    const ThresholdSpec threshold = select_threshold(norms, cfg.threshold_spec());
    const std::size_t r = cfg.block_spec().resolve(cfg.run.n);
    const auto runs = runs_estimator(norms, threshold, r);
    const auto blocks = blocks_estimator(norms, threshold, r);
    add("runs_vs_blocks", runs.value - blocks.value, 0.05);
    double theta_ref = th_fwd.value;
    if (model.mma) {
      const auto th_mma =
          mma_theta(*model.mma, ctx.ep, ctx.root.substream(op_tag("v-theta-mma2")));
      theta_ref = th_mma.value;
    }
    add("runs_vs_analytic", runs.value - theta_ref, 0.05);
    add("blocks_vs_analytic", blocks.value - theta_ref, 0.05);
  }

  // normalizer: Monte Carlo mixture weight total vs closed form (mma,
  // deterministic coefficients)
  if (model.mma && model.mma->coeffs.is_deterministic() &&
      model.mma->innovation.spectral.is_finite_atomic()) {
    const auto closed = mma_normalizer(*model.mma, ctx.ep, ctx.root);
    MmaWindowSampler mma_sampler(*model.mma);
    auto acc = mc_sharded<MeanAcc>(
        ctx.ep, ctx.root.substream(op_tag("v-normalizer")),
        [&](RngStream& r, std::uint64_t ndraws, MeanAcc& a) {
          std::vector<SpectralWindowSample> windows;
          for (std::uint64_t k = 0; k < ndraws; ++k) {
            windows.clear();
            mma_sampler.draw(r, 0, 0, windows);
            double w = 0.0;
            for (const auto& win : windows) w += win.weight;
            a.add(w);
          }
        });
    add("normalizer_mc_vs_closed", acc.mean() - closed.value,
        3.0 * acc.se() + kFpGuard);
  }

  // seed-splitting independence (negative control: reuse the same stream)
  {
    const std::size_t n_pairs = 100000;
    RngStream s1 = ctx.root.substream(op_tag("v-split-a"));
    RngStream s2 = corrupt_split ? s1 : ctx.root.substream(op_tag("v-split-b"));
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < n_pairs; ++i) {
      const double x = s1.uniform_co();
      const double y = s2.uniform_co();
      sx += x;
      sy += y;
      sxx += x * x;
      syy += y * y;
      sxy += x * y;
    }
    const double nn = static_cast<double>(n_pairs);
    const double cov = sxy / nn - (sx / nn) * (sy / nn);
    const double vx = sxx / nn - (sx / nn) * (sx / nn);
    const double vy = syy / nn - (sy / nn) * (sy / nn);
    const double corr = cov / std::sqrt(vx * vy);
    add("seed_split_independence", corr, 4.0 / std::sqrt(nn));
  }

  // SIMD kernel equivalence against the scalar reference
  {
    RngStream r = ctx.root.substream(op_tag("v-kernels"));
    std::vector<double> data(4099);
    for (double& x : data) x = r.gaussian() * 10.0;
    double max_diff = 0.0;
    const auto& ref = kernels::scalar_impl();
    std::vector<double> out_ref(data.size()), out(data.size());
    for (const auto* impl : kernels::available()) {
      ref.row_norms_euclidean(data.data(), data.size(), 1, out_ref.data());
      impl->row_norms_euclidean(data.data(), data.size(), 1, out.data());
      for (std::size_t i = 0; i < data.size(); ++i)
        max_diff = std::max(max_diff, std::fabs(out[i] - out_ref[i]));
      const double m1 = ref.max_value(data.data(), data.size());
      const double m2 = impl->max_value(data.data(), data.size());
      max_diff = std::max(max_diff, std::fabs(m1 - m2));
      const auto c1 = ref.count_greater(data.data(), data.size(), 0.5);
      const auto c2 = impl->count_greater(data.data(), data.size(), 0.5);
      max_diff = std::max(
          max_diff, std::fabs(static_cast<double>(c1) - static_cast<double>(c2)));
    }
    add("kernel_equivalence", max_diff, 0.0);
  }

  return rows;
}

int verify_command(const ExperimentConfig& cfg, const CliOptions& opt,
                   bool corrupt_split) {
  const auto rows = verify_battery(cfg, opt, corrupt_split);
  const OutputPlan plan = make_plan(with_seed(cfg, opt), opt);
  ensure_directory(plan.dir);
  std::ostringstream csv;
  csv << "name,statistic,tolerance,pass\n";
  bool all_pass = true;
  for (const auto& row : rows) {
    std::printf("[%s] %-40s statistic=%- .6g tolerance=%.6g\n",
                row.pass ? "PASS" : "FAIL", row.name.c_str(), row.statistic,
                row.tolerance);
    csv << csv_escape(row.name) << "," << format_double(row.statistic) << ","
        << format_double(row.tolerance) << "," << (row.pass ? "1" : "0") << "\n";
    all_pass = all_pass && row.pass;
  }
  atomic_write_file(plan.dir + "/verify.csv", csv.str());
  std::printf("verify: %zu checks, %s\n", rows.size(),
              all_pass ? "all passed" : "FAILURES present");
  return all_pass ? 0 : 1;
}

// ---- sweep ----

int sweep_command(const ExperimentConfig& cfg_in, const CliOptions& opt,
                  const std::string& ladder_spec) {
  const ExperimentConfig base = with_seed(cfg_in, opt);
  const OutputPlan plan = make_plan(base, opt);
  ensure_directory(plan.dir);

  std::string param;
  std::vector<std::string> values;
  if (!ladder_spec.empty()) {
    const auto eq = ladder_spec.find('=');
    if (eq == std::string::npos)
      throw config_error("sweep.ladder", "expected param=v1,v2,...");
    param = ladder_spec.substr(0, eq);
    std::istringstream vs(ladder_spec.substr(eq + 1));
    std::string tok;
    while (std::getline(vs, tok, ','))
      if (!tok.empty()) values.push_back(tok);
    if (values.empty()) throw config_error("sweep.ladder", "no ladder values");
    static const std::set<std::string> kParams = {"n", "k", "r", "u", "n_mc"};
    if (!kParams.count(param))
      throw config_error("sweep.ladder", "unknown parameter '" + param + "'");
  }

  std::ostringstream out;
  out << "param,param_value,model_id,seed,rep,n,k,r,u,op,metric,value,std_error,"
         "n_samples,method,extra\n";
  auto run_one = [&](const std::string& pname, const std::string& pvalue,
                     const ExperimentConfig& cfg) {
    const auto res = execute_experiment(cfg, opt, OpsFilter::All);
    for (const auto& r : res.records) {
      out << pname << "," << pvalue << "," << csv_escape(cfg.model.id) << ","
          << cfg.run.master_seed << "," << r.rep << "," << cfg.run.n << ","
          << res.resolved_k << "," << res.resolved_r << "," << format_double(r.u)
          << "," << r.op << "," << r.metric << "," << format_double(r.value) << ","
          << format_double(r.std_error) << "," << r.n_samples << "," << r.method
          << "," << csv_escape(r.extra) << "\n";
    }
  };

  if (param.empty()) {
    run_one("", "", base);
  } else {
    for (const auto& v : values) {
      ExperimentConfig cfg = base;
      if (param == "n")
        cfg.run.n = static_cast<std::size_t>(std::stoull(v));
      else if (param == "k")
        cfg.analysis.k = static_cast<std::size_t>(std::stoull(v));
      else if (param == "r")
        cfg.analysis.r_rule = "explicit:" + v;
      else if (param == "u")
        cfg.analysis.u_levels = {std::stod(v)};
      else if (param == "n_mc")
        cfg.analysis.n_mc = std::stoull(v);
      if (!cfg.analysis.use_quantile && cfg.analysis.k >= cfg.run.n)
        throw config_error("analysis.k", "must satisfy k < run.n");
      run_one(param, v, cfg);
    }
  }
  atomic_write_file(plan.dir + "/sweep.csv", out.str());
  std::printf("sweep: wrote %s/sweep.csv\n", plan.dir.c_str());
  return 0;
}

}  // namespace tailproc
