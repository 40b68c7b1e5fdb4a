#include "tailproc/functionals.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tailproc/errors.hpp"

namespace tailproc {

namespace {

using Params = std::map<std::string, double>;

double get(const Params& p, const std::string& key, const std::string& name) {
  auto it = p.find(key);
  if (it == p.end())
    throw invalid_parameter("functional '" + name + "': missing parameter " + key);
  return it->second;
}

double get_or(const Params& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

RadialFunctional make_radial(const std::string& name, const std::string& kind,
                             const Params& p) {
  RadialFunctional f;
  f.name = name;
  f.vanishing_radius = get(p, "v", name);
  const double v = f.vanishing_radius;
  if (kind == "step") {
    const double s = get(p, "s", name);
    f.shape = [s, v](double r) { return r > v ? s : 0.0; };
  } else if (kind == "ramp") {
    const double s = get(p, "s", name);
    const double w = get_or(p, "w", 1.0);
    f.shape = [s, v, w](double r) {
      return s * std::min(std::max((r - v) / w, 0.0), 1.0);
    };
  } else if (kind == "logcap") {
    const double s = get(p, "s", name);
    const double cap = get_or(p, "cap", 3.0);
    f.shape = [s, v, cap](double r) {
      if (r <= v) return 0.0;
      return s * std::min(std::log(r / v), cap);
    };
  } else {
    throw invalid_parameter("functional '" + name + "': unknown radial kind " + kind);
  }
  return f;
}

NamedWindowFunctional make_window(const std::string& name, const std::string& kind,
                                  const Params& p) {
  WindowFunctional fn;
  if (kind == "anchor_cap") {
    fn = [](const WindowView& w) { return std::min(w.norm_at(0), 1.0); };
  } else if (kind == "anchor_step") {
    const double thresh = get_or(p, "thresh", 0.5);
    fn = [thresh](const WindowView& w) {
      return std::min(w.norm_at(0), 1.0) * (w.norm_at(1) > thresh ? 1.0 : 0.0);
    };
  } else if (kind == "anchor_exp") {
    fn = [](const WindowView& w) {
      return std::min(w.norm_at(0), 1.0) * std::exp(-w.norm_at(1));
    };
  } else if (kind == "anchor_back") {
    const double cap = get_or(p, "cap", 2.0);
    fn = [cap](const WindowView& w) {
      return std::min(w.norm_at(0), 1.0) * std::min(w.norm_at(-1), cap);
    };
  } else if (kind == "prod_cap") {
    const double cap = get_or(p, "cap", 3.0);
    fn = [cap](const WindowView& w) {
      return std::min(w.norm_at(0) * w.norm_at(1), cap);
    };
  } else {
    throw invalid_parameter("functional '" + name + "': unknown window kind " + kind);
  }
  return {name, std::move(fn)};
}

}  // namespace

FunctionalBattery parse_functional_manifest(const std::string& text) {
  FunctionalBattery battery;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string name, kind;
    if (!(ls >> name >> kind)) continue;
    Params params;
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw invalid_parameter("functional '" + name + "': bad token " + tok);
      params[tok.substr(0, eq)] = std::stod(tok.substr(eq + 1));
    }
    if (kind == "step" || kind == "ramp" || kind == "logcap")
      battery.laplace.push_back(make_radial(name, kind, params));
    else
      battery.time_change.push_back(make_window(name, kind, params));
  }
  return battery;
}

FunctionalBattery load_functional_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_parameter("functional manifest not readable: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_functional_manifest(ss.str());
}

FunctionalBattery default_functional_battery() {
  // Mirrors configs/functionals.txt.
  return parse_functional_manifest(R"(
step1     step        v=1.0 s=1.0
step_half step        v=1.0 s=0.5
ramp1     ramp        v=1.0 s=1.0 w=1.0
step_hi   step        v=2.0 s=1.0
logcap1   logcap      v=1.0 s=0.7 cap=3.0
tc_cap    anchor_cap  v=0
tc_step   anchor_step v=0 thresh=0.5
tc_exp    anchor_exp  v=0
tc_back   anchor_back v=0 cap=2.0
tc_prod   prod_cap    v=0 cap=3.0
)");
}

}  // namespace tailproc
