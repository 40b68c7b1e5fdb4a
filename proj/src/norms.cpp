#include "tailproc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "tailproc/errors.hpp"

namespace tailproc {

NormSpec NormSpec::block_max(NormSpec inner, int blocks) {
  if (blocks < 1) throw invalid_parameter("block_max: blocks must be >= 1");
  NormSpec n(Kind::BlockMax);
  n.blocks_ = blocks;
  n.inner_ = std::make_shared<const NormSpec>(std::move(inner));
  return n;
}

double NormSpec::operator()(std::span<const double> v) const {
  switch (kind_) {
    case Kind::Euclidean: {
      if (v.size() == 1) return std::fabs(v[0]);
      double s = 0.0;
      for (double x : v) s += x * x;
      return std::sqrt(s);
    }
    case Kind::Max: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::fabs(x));
      return m;
    }
    case Kind::BlockMax: {
      if (v.size() % static_cast<std::size_t>(blocks_) != 0)
        throw invalid_parameter("block_max: dimension not divisible by block count");
      const std::size_t sub = v.size() / static_cast<std::size_t>(blocks_);
      double m = 0.0;
      for (int b = 0; b < blocks_; ++b)
        m = std::max(m, (*inner_)(v.subspan(static_cast<std::size_t>(b) * sub, sub)));
      return m;
    }
  }
  return 0.0;
}

std::vector<std::pair<int, int>> NormSpec::groups(int dim) const {
  switch (kind_) {
    case Kind::Euclidean:
      return {{0, dim}};
    case Kind::Max: {
      std::vector<std::pair<int, int>> g;
      g.reserve(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) g.emplace_back(i, i + 1);
      return g;
    }
    case Kind::BlockMax: {
      if (dim % blocks_ != 0)
        throw invalid_parameter("block_max: dimension not divisible by block count");
      const int sub = dim / blocks_;
      const auto inner_groups = inner_->groups(sub);
      std::vector<std::pair<int, int>> g;
      for (int b = 0; b < blocks_; ++b)
        for (const auto& [lo, hi] : inner_groups)
          g.emplace_back(b * sub + lo, b * sub + hi);
      return g;
    }
  }
  return {};
}

std::string NormSpec::to_string() const {
  switch (kind_) {
    case Kind::Euclidean:
      return "euclidean";
    case Kind::Max:
      return "max";
    case Kind::BlockMax:
      return "block-max(" + inner_->to_string() + "," + std::to_string(blocks_) + ")";
  }
  return "";
}

double sigma_max(const Mat& A) {
  if (A.rows == 0 || A.cols == 0) return 0.0;
  const bool tall = A.rows >= A.cols;
  const int k = tall ? A.cols : A.rows;
  Mat G(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      double s = 0.0;
      if (tall)
        for (int r = 0; r < A.rows; ++r) s += A(r, i) * A(r, j);
      else
        for (int c = 0; c < A.cols; ++c) s += A(i, c) * A(j, c);
      G(i, j) = s;
      G(j, i) = s;
    }

  double scale = 0.0;
  for (int i = 0; i < k; ++i) scale = std::max(scale, std::fabs(G(i, i)));
  if (scale == 0.0) return 0.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k - 1; ++p)
      for (int q = p + 1; q < k; ++q) off = std::max(off, std::fabs(G(p, q)));
    if (off <= 1e-14 * scale) break;
    for (int p = 0; p < k - 1; ++p)
      for (int q = p + 1; q < k; ++q) {
        const double gpq = G(p, q);
        if (std::fabs(gpq) <= 1e-300) continue;
        const double tau = (G(q, q) - G(p, p)) / (2.0 * gpq);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int r = 0; r < k; ++r) {
          const double grp = G(r, p), grq = G(r, q);
          G(r, p) = c * grp - s * grq;
          G(r, q) = s * grp + c * grq;
        }
        for (int r = 0; r < k; ++r) {
          const double gpr = G(p, r), gqr = G(q, r);
          G(p, r) = c * gpr - s * gqr;
          G(q, r) = s * gpr + c * gqr;
        }
      }
  }
  double lam = 0.0;
  for (int i = 0; i < k; ++i) lam = std::max(lam, G(i, i));
  return std::sqrt(std::max(lam, 0.0));
}

namespace {

// Submatrix of rows [lo, hi).
Mat row_slice(const Mat& A, int lo, int hi) {
  Mat S(hi - lo, A.cols);
  for (int i = lo; i < hi; ++i)
    for (int j = 0; j < A.cols; ++j) S(i - lo, j) = A(i, j);
  return S;
}

double euclidean_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// sup over sign vertices of the max-norm ball (exact for polytope in-norms).
double vertex_enumerate(const Mat& A) {
  const int k = A.cols;
  Vec y(static_cast<std::size_t>(A.rows));
  Vec x(static_cast<std::size_t>(k), 1.0);
  double best = 0.0;
  const std::uint64_t count = 1ull << (k - 1);  // x[0] fixed at +1 by symmetry
  for (std::uint64_t bits = 0; bits < count; ++bits) {
    for (int j = 1; j < k; ++j) x[static_cast<std::size_t>(j)] = (bits >> (j - 1)) & 1 ? -1.0 : 1.0;
    mat_vec(A, x, y);
    best = std::max(best, euclidean_norm(y));
  }
  return best;
}

// sup{ ||sum_b A_b x_b||_2 : ||x_b||_2 <= 1 } over the product of unit
// euclidean balls given by in-groups, via alternating ascent from a
// deterministic set of starting directions.
double alternating_ascent(const Mat& A,
                          const std::vector<std::pair<int, int>>& in_groups) {
  const int rows = A.rows;

  std::vector<Vec> starts;
  for (int i = 0; i < rows; ++i) {
    Vec u(static_cast<std::size_t>(rows), 0.0);
    u[static_cast<std::size_t>(i)] = 1.0;
    starts.push_back(std::move(u));
  }
  {
    Vec u(static_cast<std::size_t>(rows), 1.0 / std::sqrt(static_cast<double>(rows)));
    starts.push_back(std::move(u));
  }

  double best = 0.0;
  Vec g, w(static_cast<std::size_t>(rows));
  Vec x(static_cast<std::size_t>(A.cols), 0.0);
  for (Vec u : starts) {
    double val = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
      // Optimal block directions for the current u.
      for (const auto& [lo, hi] : in_groups) {
        g.assign(static_cast<std::size_t>(hi - lo), 0.0);
        for (int j = lo; j < hi; ++j) {
          double s = 0.0;
          for (int i = 0; i < rows; ++i) s += A(i, j) * u[static_cast<std::size_t>(i)];
          g[static_cast<std::size_t>(j - lo)] = s;
        }
        const double gn = euclidean_norm(g);
        for (int j = lo; j < hi; ++j)
          x[static_cast<std::size_t>(j)] =
              gn > 0.0 ? g[static_cast<std::size_t>(j - lo)] / gn : 0.0;
      }
      mat_vec(A, x, w);
      const double nw = euclidean_norm(w);
      if (nw <= 0.0) break;
      for (int i = 0; i < rows; ++i) u[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(i)] / nw;
      if (nw <= val * (1.0 + 1e-13)) {
        val = std::max(val, nw);
        break;
      }
      val = nw;
    }
    best = std::max(best, val);
  }
  return best;
}

double opnorm_euclid_out(const Mat& A, const NormSpec& in) {
  const auto in_groups = in.groups(A.cols);
  if (in_groups.size() == 1) return sigma_max(A);
  bool all_singleton = true;
  for (const auto& [lo, hi] : in_groups)
    if (hi - lo != 1) {
      all_singleton = false;
      break;
    }
  if (all_singleton && A.cols <= 16) return vertex_enumerate(A);
  return alternating_ascent(A, in_groups);
}

}  // namespace

double operator_norm(const Mat& A, const NormSpec& in, const NormSpec& out) {
  if (A.rows < 1 || A.cols < 1)
    throw invalid_parameter("operator_norm: matrix must be nonempty");
  const auto out_groups = out.groups(A.rows);
  double best = 0.0;
  for (const auto& [lo, hi] : out_groups)
    best = std::max(best, opnorm_euclid_out(row_slice(A, lo, hi), in));
  return best;
}

}  // namespace tailproc
