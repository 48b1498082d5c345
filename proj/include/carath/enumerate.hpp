// Lazy enumeration of all multisets of {0,...,n-1} of cardinality 1..k,
// sizes ascending, lexicographic within a size. Canonical form is the
// sorted (nondecreasing) index list.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "carath/core.hpp"

namespace carath {

class UniformEnumerator {
 public:
  // max_size may be astronomically large; enumeration is lazy.
  UniformEnumerator(int n, std::uint64_t max_size) : n_(n), max_size_(max_size) {
    require(n >= 1, "UniformEnumerator: n must be >= 1");
    require(max_size >= 1, "UniformEnumerator: k must be >= 1");
  }

  std::optional<UniformCombination> next() {
    if (current_.empty()) {
      current_.assign(1, 0);
      return UniformCombination(current_);
    }
    // advance within current size: rightmost index that can still grow
    int len = static_cast<int>(current_.size());
    int i = len - 1;
    while (i >= 0 && current_[i] == n_ - 1) --i;
    if (i >= 0) {
      int v = current_[i] + 1;
      for (int j = i; j < len; ++j) current_[j] = v;
      return UniformCombination(current_);
    }
    if (static_cast<std::uint64_t>(len) >= max_size_) return std::nullopt;
    current_.assign(static_cast<size_t>(len) + 1, 0);
    return UniformCombination(current_);
  }

 private:
  int n_;
  std::uint64_t max_size_;
  std::vector<int> current_;
};

inline std::uint64_t binomial(int n, int k) {
  require(n >= 0 && k >= 0, "binomial: n, k must be nonnegative");
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int j = 1; j <= k; ++j) {
    std::uint64_t num = static_cast<std::uint64_t>(n - k + j);
    require(c <= UINT64_MAX / num, "binomial: overflow");
    c = c * num / j;
  }
  return c;
}

// Total count of multisets of cardinality 1..k over n symbols:
// sum_{j=1..k} C(n+j-1, j). Throws on overflow.
inline std::uint64_t count_multisets(int n, int k) {
  require(n >= 1 && k >= 1, "count_multisets: n, k must be >= 1");
  std::uint64_t total = 0;
  // C(n, j) built incrementally: C(n+j-1, j) = C(n+j-2, j-1) * (n+j-1) / j
  std::uint64_t c = 1;  // j = 0 term
  for (int j = 1; j <= k; ++j) {
    std::uint64_t num = static_cast<std::uint64_t>(n) + j - 1;
    require(c <= UINT64_MAX / num, "count_multisets: overflow");
    c = c * num / j;
    require(total <= UINT64_MAX - c, "count_multisets: overflow");
    total += c;
  }
  return total;
}

}  // namespace carath
