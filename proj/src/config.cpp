#include "tailproc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "tailproc/errors.hpp"
#include "tailproc/io.hpp"
#include "tailproc/stats.hpp"

namespace tailproc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw config_error(key, "expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw config_error(key, "expected an integer, got '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (...) {
    throw config_error(key, "expected an unsigned integer, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw config_error(key, "expected a boolean, got '" + v + "'");
}

std::vector<double> to_doubles(const std::string& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split(v, ','))
    if (!tok.empty()) out.push_back(to_double(tok, key));
  if (out.empty()) throw config_error(key, "expected a comma-separated list");
  return out;
}

const std::set<std::string> kKnownOps = {
    "threshold",     "tailprocess", "runs",        "blocks",
    "clusters",      "pointprocess", "anticluster", "theta-forward",
    "mma-theta",     "normalizer",  "cluster-law", "laplace",
    "timechange",    "lag-reversal", "linproj-theta"};

}  // namespace

NormSpec parse_norm(const std::string& text, const std::string& key) {
  if (text == "euclidean") return NormSpec::euclidean();
  if (text == "max") return NormSpec::max();
  if (text.rfind("block-max:", 0) == 0) {
    const std::string rest = text.substr(10);
    const auto last = rest.rfind(':');
    if (last == std::string::npos)
      throw config_error(key, "block-max needs block-max:<inner>:<blocks>");
    const int blocks = static_cast<int>(to_int(rest.substr(last + 1), key));
    return NormSpec::block_max(parse_norm(rest.substr(0, last), key), blocks);
  }
  throw config_error(key, "unknown norm '" + text + "'");
}

SpectralMeasure parse_spectral(const std::string& text, int dim, NormSpec norm,
                               const std::string& key) {
  if (text == "uniform-sphere") {
    if (norm.kind() != NormSpec::Kind::Euclidean)
      throw config_error(key, "uniform-sphere requires the euclidean norm");
    return SpectralMeasure::uniform_sphere(dim);
  }
  if (text.rfind("point:", 0) == 0) {
    std::vector<Vec> atoms;
    std::vector<double> weights;
    for (const auto& atom_tok : split(text.substr(6), ';')) {
      if (atom_tok.empty()) continue;
      std::string vec_part = atom_tok;
      double weight = 1.0;
      const auto at = atom_tok.rfind('@');
      if (at != std::string::npos) {
        vec_part = trim(atom_tok.substr(0, at));
        weight = to_double(trim(atom_tok.substr(at + 1)), key);
      }
      if (!vec_part.empty() && vec_part.front() == '(') {
        if (vec_part.back() != ')') throw config_error(key, "unbalanced parentheses");
        vec_part = vec_part.substr(1, vec_part.size() - 2);
      }
      Vec v;
      std::istringstream vs(vec_part);
      double x;
      while (vs >> x) v.push_back(x);
      if (static_cast<int>(v.size()) != dim)
        throw config_error(key, "atom dimension mismatch (expected " +
                                    std::to_string(dim) + ")");
      atoms.push_back(std::move(v));
      weights.push_back(weight);
    }
    if (atoms.empty()) throw config_error(key, "point: needs at least one atom");
    return SpectralMeasure::point_masses(std::move(atoms), std::move(weights),
                                         std::move(norm));
  }
  throw config_error(key, "unknown spectral measure '" + text + "'");
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  cfg.raw = text;
  char hex[24];
  std::snprintf(hex, sizeof(hex), "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  cfg.hash_hex = hex;

  std::istringstream in(text);
  std::string line, section;
  std::set<std::string> coeff_seen;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw config_error("line " + std::to_string(lineno), "malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "model" && section != "analysis" && section != "run" &&
          section != "output")
        throw config_error(section, "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string full = section + "." + key;
    if (section.empty()) throw config_error(key, "key outside of any section");

    if (section == "model") {
      auto& m = cfg.model;
      if (key == "id") m.id = value;
      else if (key == "family") m.family = value;
      else if (key == "d") m.d = static_cast<int>(to_int(value, full));
      else if (key == "q") m.q = static_cast<int>(to_int(value, full));
      else if (key == "m") m.m = static_cast<int>(to_int(value, full));
      else if (key == "alpha") m.alpha = to_double(value, full);
      else if (key == "spectral") m.spectral = value;
      else if (key == "norm") m.norm = value;
      else if (key == "coeff_mode") m.coeff_mode = value;
      else if (key == "coeff_jitter") m.coeff_jitter = to_double(value, full);
      else if (key.rfind("coeff_", 0) == 0) {
        const long long i = to_int(key.substr(6), full);
        if (i < 0 || i > 128) throw config_error(full, "coefficient index out of range");
        if (static_cast<std::size_t>(i + 1) > m.coeff.size())
          m.coeff.resize(static_cast<std::size_t>(i + 1));
        m.coeff[static_cast<std::size_t>(i)] = to_doubles(value, full);
        coeff_seen.insert(key);
      }
      else if (key == "a") m.a = to_doubles(value, full);
      else if (key == "b_alpha") m.b_alpha = to_double(value, full);
      else if (key == "b_spectral") m.b_spectral = value;
      else if (key == "burn_in") m.burn_in = static_cast<int>(to_int(value, full));
      else throw config_error(full, "unknown key");
    } else if (section == "analysis") {
      auto& a = cfg.analysis;
      if (key == "ops") {
        a.ops.clear();
        for (const auto& op : split(value, ','))
          if (!op.empty()) a.ops.push_back(op);
      }
      else if (key == "k") a.k = static_cast<std::size_t>(to_u64(value, full));
      else if (key == "p") {
        a.p = to_double(value, full);
        a.use_quantile = true;
      }
      else if (key == "r") a.r_rule = value;
      else if (key == "u_levels") a.u_levels = to_doubles(value, full);
      else if (key == "horizon") a.horizon = static_cast<int>(to_int(value, full));
      else if (key == "eps") a.eps = to_double(value, full);
      else if (key == "n_mc") a.n_mc = to_u64(value, full);
      else if (key == "window_s") a.window_s = static_cast<int>(to_int(value, full));
      else if (key == "window_t") a.window_t = static_cast<int>(to_int(value, full));
      else if (key == "m_list") {
        a.m_list.clear();
        for (double v : to_doubles(value, full))
          a.m_list.push_back(static_cast<std::size_t>(v));
      }
      else if (key == "functionals") a.functionals = value;
      else if (key == "projection") a.projection = to_doubles(value, full);
      else throw config_error(full, "unknown key");
    } else if (section == "run") {
      auto& r = cfg.run;
      if (key == "n") r.n = static_cast<std::size_t>(to_u64(value, full));
      else if (key == "replicates") r.replicates = static_cast<int>(to_int(value, full));
      else if (key == "master_seed") r.master_seed = to_u64(value, full);
      else if (key == "shards") r.shards = static_cast<int>(to_int(value, full));
      else if (key == "workers") r.workers = static_cast<int>(to_int(value, full));
      else throw config_error(full, "unknown key");
    } else {  // output
      auto& o = cfg.output;
      if (key == "dir") o.dir = value;
      else if (key == "formats") {
        o.formats.clear();
        for (const auto& f : split(value, ','))
          if (!f.empty()) o.formats.push_back(f);
      }
      else if (key == "write_path") o.write_path = to_bool(value, full);
      else throw config_error(full, "unknown key");
    }
  }

  // ---- validation ----
  const auto& m = cfg.model;
  if (m.family != "mma" && m.family != "rcar" && m.family != "iid")
    throw config_error("model.family", "must be one of mma, rcar, iid");
  if (m.d < 1) throw config_error("model.d", "must be >= 1");
  if (m.q < 1) throw config_error("model.q", "must be >= 1");
  if (m.m < 0) throw config_error("model.m", "must be >= 0");
  if (!(m.alpha > 0.0) || !std::isfinite(m.alpha))
    throw config_error("model.alpha", "must be finite and positive");
  if (m.family == "mma") {
    if (static_cast<int>(m.coeff.size()) != m.m + 1)
      throw config_error("model.coeff_0",
                         "need coefficient matrices coeff_0..coeff_" +
                             std::to_string(m.m));
    for (std::size_t i = 0; i < m.coeff.size(); ++i)
      if (static_cast<int>(m.coeff[i].size()) != m.d * m.q)
        throw config_error("model.coeff_" + std::to_string(i),
                           "expected d*q = " + std::to_string(m.d * m.q) + " entries");
    if (m.coeff_mode != "deterministic" && m.coeff_mode != "iid-uniform")
      throw config_error("model.coeff_mode", "must be deterministic or iid-uniform");
    if (m.coeff_mode == "iid-uniform" && !(m.coeff_jitter > 0.0 && m.coeff_jitter < 1.0))
      throw config_error("model.coeff_jitter", "must be in (0,1)");
  }
  if (m.family == "rcar") {
    if (static_cast<int>(m.a.size()) != m.d * m.d)
      throw config_error("model.a", "expected d*d entries");
    if (m.burn_in < 0) throw config_error("model.burn_in", "must be >= 0");
    if (!(m.b_alpha > 0.0)) throw config_error("model.b_alpha", "must be positive");
  }

  const auto& a = cfg.analysis;
  for (const auto& op : a.ops)
    if (kKnownOps.find(op) == kKnownOps.end())
      throw config_error("analysis.ops", "unknown operation '" + op + "'");
  if (a.use_quantile && !(a.p > 0.0 && a.p < 1.0))
    throw config_error("analysis.p", "must be in (0,1)");
  if (!a.use_quantile && a.k >= 1 && a.k >= cfg.run.n)
    throw config_error("analysis.k", "must satisfy k < run.n");
  cfg.block_spec();  // validates analysis.r
  for (double u : a.u_levels)
    if (!(u >= 1.0)) throw config_error("analysis.u_levels", "levels must be >= 1");
  if (a.horizon < 1) throw config_error("analysis.horizon", "must be >= 1");
  if (!(a.eps > 0.0)) throw config_error("analysis.eps", "must be positive");
  if (a.n_mc < 1) throw config_error("analysis.n_mc", "must be >= 1");
  if (a.window_s > 0 || a.window_t < 0)
    throw config_error("analysis.window_s", "need window_s <= 0 <= window_t");

  if (cfg.run.n < 1) throw config_error("run.n", "must be >= 1");
  if (cfg.run.replicates < 1) throw config_error("run.replicates", "must be >= 1");
  if (cfg.run.shards < 1) throw config_error("run.shards", "must be >= 1");
  if (cfg.run.workers < 0) throw config_error("run.workers", "must be >= 0");

  for (const auto& f : cfg.output.formats)
    if (f != "csv" && f != "jsonl")
      throw config_error("output.formats", "unknown format '" + f + "'");

  if (cfg.model.id.empty()) {
    std::ostringstream id;
    id << m.family;
    if (m.family == "mma") id << "-m" << m.m;
    id << "-a" << m.alpha;
    cfg.model.id = id.str();
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  return parse_string(read_file(path));
}

BlockSpec ExperimentConfig::block_spec() const {
  const std::string& rule = analysis.r_rule;
  if (rule.rfind("explicit:", 0) == 0) {
    const long long r = to_int(rule.substr(9), "analysis.r");
    if (r < 1) throw config_error("analysis.r", "explicit r must be >= 1");
    return BlockSpec::explicit_r(static_cast<std::size_t>(r));
  }
  if (rule.rfind("power:", 0) == 0) {
    const double gamma = to_double(rule.substr(6), "analysis.r");
    if (!(gamma > 0.0 && gamma < 1.0))
      throw config_error("analysis.r", "power gamma must be in (0,1)");
    return BlockSpec::power(gamma);
  }
  throw config_error("analysis.r", "expected explicit:<r> or power:<gamma>");
}

ThresholdSpec ExperimentConfig::threshold_spec() const {
  if (analysis.use_quantile) return ThresholdSpec::quantile(analysis.p);
  if (analysis.k < 1)
    throw config_error("analysis.k", "threshold requires k >= 1 (or a quantile p)");
  return ThresholdSpec::order_statistic(analysis.k);
}

BuiltModel build_model(const ModelConfig& mc) {
  BuiltModel out;
  out.family = mc.family;
  out.id = mc.id.empty() ? mc.family : mc.id;
  out.alpha = mc.alpha;
  out.ambient = parse_norm(mc.norm, "model.norm");

  if (mc.family == "mma") {
    MMASpec spec;
    spec.m = mc.m;
    spec.d = mc.d;
    spec.q = mc.q;
    spec.ambient = out.ambient;
    spec.model_id = out.id;
    spec.innovation = RVLaw{
        RadialLaw{mc.alpha},
        parse_spectral(mc.spectral, mc.q, NormSpec::euclidean(), "model.spectral")};
    std::vector<Mat> base;
    for (int i = 0; i <= mc.m; ++i)
      base.emplace_back(mc.d, mc.q, mc.coeff[static_cast<std::size_t>(i)]);
    if (mc.coeff_mode == "deterministic") {
      spec.coeffs = CoeffProcess::deterministic(std::move(base));
    } else {
      const double j = mc.coeff_jitter;
      spec.coeffs = CoeffProcess::iid_in_t(
          mc.m, mc.d, mc.q,
          [base, j](RngStream& rng, std::vector<Mat>& arrays) {
            arrays = base;
            for (auto& c : arrays) {
              const double scale = 1.0 - j + 2.0 * j * rng.uniform_co();
              for (double& x : c.a) x *= scale;
            }
          });
      spec.attest.note = "iid-in-t coefficients: results conditional on mixing";
    }
    out.mma = std::move(spec);
  } else if (mc.family == "rcar") {
    Mat A(mc.d, mc.d, mc.a);
    RVLaw b_law{RadialLaw{mc.b_alpha},
                parse_spectral(mc.b_spectral, mc.d, NormSpec::euclidean(),
                               "model.b_spectral")};
    RCARSpec spec{
        mc.d,
        [A, b_law](RngStream& rng, Mat& a_out, std::span<double> b_out) {
          a_out = A;
          sample_rv_vector(b_law, rng, b_out);
        },
        mc.burn_in,
        mc.alpha,
        parse_spectral(mc.spectral, mc.d, out.ambient, "model.spectral"),
        out.ambient,
        out.id};
    out.rcar = std::move(spec);
  } else {
    out.iid = RVLaw{RadialLaw{mc.alpha},
                    parse_spectral(mc.spectral, mc.d, out.ambient, "model.spectral")};
  }
  return out;
}

std::unique_ptr<WindowSampler> BuiltModel::make_sampler(double eps) const {
  if (mma) return std::make_unique<MmaWindowSampler>(*mma);
  if (rcar) return std::make_unique<RcarForwardWindowSampler>(*rcar, eps);
  return std::make_unique<IidWindowSampler>(iid->spectral, iid->radial.alpha);
}

PathMatrix simulate_model(const BuiltModel& model, std::size_t n,
                          const RngStream& rng,
                          std::vector<double>* innovations_out) {
  if (model.mma) return simulate_mma(*model.mma, n, rng, nullptr, innovations_out);
  if (model.rcar) return simulate_rcar(*model.rcar, n, rng);
  return simulate_iid(*model.iid, n, rng, model.id);
}

}  // namespace tailproc
