#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tailproc/analytic.hpp"

namespace tailproc {

struct NamedWindowFunctional {
  std::string name;
  WindowFunctional fn;
};

// Test-functional battery: radial functionals (Laplace checks) and window
// functionals (time-change checks). Loaded from a text manifest with lines
//   name  kind  v=<vanishing radius>  key=value ...
// Radial kinds: step(v,s), ramp(v,s,w), logcap(v,s,cap).
// Window kinds: anchor_cap, anchor_step(thresh), anchor_exp, anchor_back(cap),
// prod_cap(cap); all vanish when the anchor coordinate is zero.
struct FunctionalBattery {
  std::vector<RadialFunctional> laplace;
  std::vector<NamedWindowFunctional> time_change;
};

FunctionalBattery parse_functional_manifest(const std::string& text);
FunctionalBattery load_functional_manifest(const std::string& path);
// The battery shipped in configs/functionals.txt, compiled in as a fallback.
FunctionalBattery default_functional_battery();

}  // namespace tailproc
