// End-to-end tests of the tailproc executable: subcommands, exit codes,
// output files, reproducibility across runs and worker counts.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;

void check(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
  if (!ok) ++failures;
}

int run_cli(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = std::string("\"") + TAILPROC_CLI_PATH + "\" " + args;
  if (!stderr_file.empty()) cmd += " 2> " + stderr_file;
  cmd += " > cli_stdout.txt";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

const char* kQuickIid = R"(
[model]
id = iid-quick
family = iid
d = 1
alpha = 1.0
spectral = point:1@1
[analysis]
ops = threshold,runs,blocks,theta-forward,cluster-law
k = 100
r = explicit:16
horizon = 16
n_mc = 20000
[run]
n = 10000
master_seed = 11
shards = 16
[output]
dir = cli_tmp/out_iid
)";

const char* kQuickMa1 = R"(
[model]
id = ma1-quick
family = mma
d = 1
q = 1
m = 1
alpha = 1.0
spectral = point:1@1
coeff_0 = 1.0
coeff_1 = 1.0
[analysis]
ops = threshold,runs,blocks,theta-forward,mma-theta,normalizer,cluster-law,laplace,timechange,lag-reversal,tail-equivalence
k = 100
r = explicit:16
horizon = 16
n_mc = 20000
[run]
n = 20000
master_seed = 12
shards = 16
[output]
dir = cli_tmp/out_ma1
)";

}  // namespace

int main() {
  fs::remove_all("cli_tmp");
  fs::create_directories("cli_tmp");
  write("cli_tmp/iid.ini", kQuickIid);
  write("cli_tmp/ma1.ini", kQuickMa1);

  // run: exit 0, outputs present, theta fields present
  {
    const int rc = run_cli("run --config cli_tmp/iid.ini");
    check(rc == 0, "run exits 0 on a minimal iid config");
    check(fs::exists("cli_tmp/out_iid/results.csv"), "results.csv written");
    check(fs::exists("cli_tmp/out_iid/estimates.jsonl"), "estimates.jsonl written");
    check(fs::exists("cli_tmp/out_iid/report.json"), "report.json written");
    const std::string csv = slurp("cli_tmp/out_iid/results.csv");
    check(csv.find(",runs,theta,") != std::string::npos,
          "runs theta record present");
    check(csv.find(",blocks,theta,") != std::string::npos,
          "blocks theta record present");
    check(csv.find("theta-forward") != std::string::npos,
          "theta-forward record present");
    const std::string report = slurp("cli_tmp/out_iid/report.json");
    check(report.find("config_hash") != std::string::npos, "report has config hash");
  }

  // validation error: k >= n names analysis.k, exit 2
  {
    std::string bad(kQuickIid);
    bad.replace(bad.find("k = 100"), 7, "k = 10000");
    write("cli_tmp/bad.ini", bad);
    const int rc = run_cli("run --config cli_tmp/bad.ini", "cli_tmp/bad_err.txt");
    check(rc == 2, "k >= n exits 2");
    const std::string err = slurp("cli_tmp/bad_err.txt");
    check(err.find("analysis.k") != std::string::npos, "error names analysis.k");
  }

  // degenerate model: exit 3
  {
    std::string degen(kQuickMa1);
    degen.replace(degen.find("coeff_0 = 1.0"), 13, "coeff_0 = 0.0");
    degen.replace(degen.find("coeff_1 = 1.0"), 13, "coeff_1 = 0.0");
    write("cli_tmp/degen.ini", degen);
    const int rc =
        run_cli("analytic --config cli_tmp/degen.ini", "cli_tmp/degen_err.txt");
    check(rc == 3, "degenerate model exits 3");
  }

  // simulate: path files with correct header and row count
  {
    const int rc = run_cli("simulate --config cli_tmp/iid.ini --out cli_tmp/sim");
    check(rc == 0, "simulate exits 0");
    const std::string csv = slurp("cli_tmp/sim/path_rep1.csv");
    check(csv.rfind("t,x1\n", 0) == 0, "path csv header");
    std::size_t rows = 0;
    for (char c : csv)
      if (c == '\n') ++rows;
    check(rows == 10001, "path csv has n+1 lines");
    const std::string meta = slurp("cli_tmp/sim/path_rep1.meta");
    check(meta.find("model=iid-quick") != std::string::npos, "meta model id");
    check(meta.find("alpha=1") != std::string::npos, "meta alpha");
  }

  // analytic on MA(1): closed-form theta 0.5 present
  {
    const int rc = run_cli("analytic --config cli_tmp/ma1.ini --out cli_tmp/an");
    check(rc == 0, "analytic exits 0");
    const std::string csv = slurp("cli_tmp/an/results.csv");
    check(csv.find("mma-theta,theta,0.5,0,") != std::string::npos,
          "mma-theta closed form 0.5 with zero SE");
    check(csv.find("normalizer,c,2,0,") != std::string::npos,
          "normalizer closed form c=2");
  }

  // verify: all pass on the quick MA(1); corrupted splitting must fail
  {
    const int rc = run_cli("verify --config cli_tmp/ma1.ini --out cli_tmp/v1");
    check(rc == 0, "verify passes on ma1");
    check(fs::exists("cli_tmp/v1/verify.csv"), "verify.csv written");
    const int rc_bad = run_cli(
        "verify --config cli_tmp/ma1.ini --out cli_tmp/v2 --corrupt-seed-split");
    check(rc_bad != 0, "corrupted seed splitting fails verify");
    const std::string csv = slurp("cli_tmp/v2/verify.csv");
    check(csv.find("seed_split_independence") != std::string::npos,
          "independence check present");
  }

  // sweep: ladder in n, and unknown parameter -> exit 2
  {
    const int rc = run_cli(
        "sweep --config cli_tmp/iid.ini --out cli_tmp/sw --ladder n=2000,4000");
    check(rc == 0, "sweep exits 0");
    const std::string csv = slurp("cli_tmp/sw/sweep.csv");
    check(csv.find("\nn,2000,") != std::string::npos, "sweep rows for n=2000");
    check(csv.find("\nn,4000,") != std::string::npos, "sweep rows for n=4000");
    const int rc_bad = run_cli(
        "sweep --config cli_tmp/iid.ini --out cli_tmp/sw2 --ladder warp=1,2",
        "cli_tmp/sw_err.txt");
    check(rc_bad == 2, "unknown ladder parameter exits 2");
    // empty ladder behaves like a single run
    const int rc_empty =
        run_cli("sweep --config cli_tmp/iid.ini --out cli_tmp/sw3");
    check(rc_empty == 0, "empty ladder sweep exits 0");
    const std::string single = slurp("cli_tmp/sw3/sweep.csv");
    check(single.find(",runs,theta,") != std::string::npos,
          "empty ladder contains the single run");
  }

  // byte-identical reruns; worker count changes nothing but wall clock
  {
    run_cli("run --config cli_tmp/ma1.ini --out cli_tmp/r1 --workers 1");
    run_cli("run --config cli_tmp/ma1.ini --out cli_tmp/r2 --workers 1");
    run_cli("run --config cli_tmp/ma1.ini --out cli_tmp/r4 --workers 4");
    check(slurp("cli_tmp/r1/results.csv") == slurp("cli_tmp/r2/results.csv"),
          "same seed/workers: results.csv byte-identical");
    check(slurp("cli_tmp/r1/estimates.jsonl") == slurp("cli_tmp/r2/estimates.jsonl"),
          "same seed/workers: estimates.jsonl byte-identical");
    check(slurp("cli_tmp/r1/results.csv") == slurp("cli_tmp/r4/results.csv"),
          "worker count does not change any statistic");
    // seed override changes results
    run_cli("run --config cli_tmp/ma1.ini --out cli_tmp/r5 --seed 999");
    check(slurp("cli_tmp/r1/results.csv") != slurp("cli_tmp/r5/results.csv"),
          "different seed changes results");
  }

  std::printf("cli_tests: %s\n", failures == 0 ? "all passed" : "FAILURES");
  return failures == 0 ? 0 : 1;
}
