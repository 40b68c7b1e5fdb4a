#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailproc/linalg.hpp"

namespace tailproc {

// Norm on R^d: euclidean, max (sup of absolute values), or a block-max of an
// inner norm over a fixed number of consecutive equal blocks. Every such
// composition flattens to "max over groups of coordinates, euclidean within
// each group", which is what operator_norm exploits.
class NormSpec {
 public:
  enum class Kind { Euclidean, Max, BlockMax };

  static NormSpec euclidean() { return NormSpec(Kind::Euclidean); }
  static NormSpec max() { return NormSpec(Kind::Max); }
  static NormSpec block_max(NormSpec inner, int blocks);

  Kind kind() const { return kind_; }
  int blocks() const { return blocks_; }
  const NormSpec& inner() const { return *inner_; }

  double operator()(std::span<const double> v) const;

  // Consecutive [begin, end) coordinate groups of the flattened form.
  std::vector<std::pair<int, int>> groups(int dim) const;

  std::string to_string() const;

 private:
  explicit NormSpec(Kind k) : kind_(k) {}

  Kind kind_;
  int blocks_ = 0;
  std::shared_ptr<const NormSpec> inner_;
};

// Operator norm sup{ out(A x) : in(x) = 1 }.
//
// Exact routes: euclidean -> anything (largest singular value per out-group),
// and polytope in-norms (max, or block-max of max) via sign-vertex
// enumeration. The remaining case (euclidean blocks inside the in-norm) is
// solved by deterministic multi-start alternating ascent, relative error
// <= 1e-6.
double operator_norm(const Mat& A, const NormSpec& in, const NormSpec& out);

// Largest singular value of a small dense matrix (cyclic Jacobi on the Gram
// matrix).
double sigma_max(const Mat& A);

}  // namespace tailproc
