// Core numeric vocabulary: dense vectors/matrices, p-norms, simplex
// helpers, multiset-indexed uniform combinations, seeded randomness.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace carath {

using Vec = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroTol = 1e-12;   // |v_i| <= kZeroTol counts as zero for l0
constexpr double kFeasTol = 1e-9;
constexpr double kOptTol = 1e-9;
constexpr double kSolveTol = 1e-7;   // first-order / acceptance folding

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void validate_vector(const Vec& v, const char* name = "vector") {
  require(!v.empty(), std::string(name) + ": dimension must be >= 1");
  require(all_finite(v), std::string(name) + ": entries must be finite");
}

// Row-major dense matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {
    require(r >= 1 && c >= 1, "matrix: dimensions must be >= 1");
  }

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  Vec col(int j) const {
    Vec out(rows);
    for (int i = 0; i < rows; ++i) out[i] = (*this)(i, j);
    return out;
  }
  Vec row(int i) const {
    Vec out(cols);
    for (int j = 0; j < cols; ++j) out[j] = (*this)(i, j);
    return out;
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
};

inline void validate_matrix(const Matrix& m, const char* name = "matrix") {
  require(m.rows >= 1 && m.cols >= 1, std::string(name) + ": dimensions must be >= 1");
  require(m.data.size() == static_cast<size_t>(m.rows) * m.cols, std::string(name) + ": shape mismatch");
  for (double x : m.data)
    require(std::isfinite(x), std::string(name) + ": entries must be finite");
}

inline Vec mat_vec(const Matrix& m, const Vec& v) {
  require(static_cast<int>(v.size()) == m.cols, "mat_vec: dimension mismatch");
  Vec out(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

// v^T M, returned as a vector of length M.cols.
inline Vec vec_mat(const Vec& v, const Matrix& m) {
  require(static_cast<int>(v.size()) == m.rows, "vec_mat: dimension mismatch");
  Vec out(m.cols, 0.0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) out[j] += v[i] * m(i, j);
  return out;
}

inline double dot(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "dot: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "sub: dimension mismatch");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec add(const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "add: dimension mismatch");
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec scale(const Vec& a, double c) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

// Norm specification: p in [2, inf]. q is the Holder conjugate p/(p-1),
// with q = 1 for p = inf.
struct NormSpec {
  double p = 2.0;
  bool is_inf = false;

  static NormSpec finite(double p) {
    require(std::isfinite(p) && p >= 2.0, "NormSpec: p must be finite and >= 2");
    NormSpec n;
    n.p = p;
    return n;
  }
  static NormSpec inf() {
    NormSpec n;
    n.p = std::numeric_limits<double>::infinity();
    n.is_inf = true;
    return n;
  }

  double q() const { return is_inf ? 1.0 : p / (p - 1.0); }
};

// p-norm with rescaling by the max entry so that large p does not overflow.
inline double p_norm(const Vec& v, const NormSpec& n) {
  validate_vector(v, "p_norm input");
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::fabs(x));
  if (n.is_inf || mx == 0.0) return mx;
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / mx, n.p);
  return mx * std::pow(s, 1.0 / n.p);
}

inline double p_norm(const Vec& v, double p) { return p_norm(v, NormSpec::finite(p)); }

inline int l0_count(const Vec& v, double zero_tol = kZeroTol) {
  int c = 0;
  for (double x : v)
    if (std::fabs(x) > zero_tol) ++c;
  return c;
}

// q-norm of a vector for q in [1, 2] (Holder conjugates of p >= 2).
inline double q_norm(const Vec& v, double q) {
  require(q >= 1.0, "q_norm: q must be >= 1");
  double mx = 0.0;
  for (double x : v) mx = std::max(mx, std::fabs(x));
  if (mx == 0.0) return 0.0;
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x) / mx, q);
  return mx * std::pow(s, 1.0 / q);
}

// Size-k multiset of indices into a point set; implied weight 1/k each.
// Stored sorted ascending (canonical form).
struct UniformCombination {
  std::vector<int> multiset;

  explicit UniformCombination(std::vector<int> idx = {}) : multiset(std::move(idx)) {
    std::sort(multiset.begin(), multiset.end());
  }
  int size() const { return static_cast<int>(multiset.size()); }
};

struct PointSet {
  std::vector<Vec> points;

  PointSet() = default;
  explicit PointSet(std::vector<Vec> pts) : points(std::move(pts)) {
    require(!points.empty(), "PointSet: must be nonempty");
    size_t d = points[0].size();
    for (const Vec& v : points) {
      validate_vector(v, "PointSet point");
      require(v.size() == d, "PointSet: all dimensions must be equal");
    }
  }

  int size() const { return static_cast<int>(points.size()); }
  int dim() const { return static_cast<int>(points[0].size()); }

  // max p-norm over the set
  double gamma(const NormSpec& n) const {
    double g = 0.0;
    for (const Vec& v : points) g = std::max(g, p_norm(v, n));
    return g;
  }
};

inline Vec combination_vector(const UniformCombination& c, const PointSet& X) {
  require(!c.multiset.empty(), "combination_vector: empty multiset");
  Vec out(X.dim(), 0.0);
  for (int idx : c.multiset) {
    require(idx >= 0 && idx < X.size(), "combination_vector: index out of range");
    const Vec& p = X.points[idx];
    for (size_t j = 0; j < out.size(); ++j) out[j] += p[j];
  }
  double inv = 1.0 / static_cast<double>(c.multiset.size());
  for (double& x : out) x *= inv;
  return out;
}

inline bool in_simplex(const Vec& x, double tol = kFeasTol) {
  double s = 0.0;
  for (double v : x) {
    if (v < -tol) return false;
    s += v;
  }
  return std::fabs(s - 1.0) <= tol;
}

}  // namespace carath
