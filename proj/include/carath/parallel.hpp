// Deterministic fan-out over an enumeration: candidates are evaluated in
// blocks, possibly on several threads, and the accepted candidate with the
// lowest enumeration index wins. Worker count is capped by the
// SPARSE_CARATH_THREADS environment variable (default: machine parallelism).
#pragma once

#include <cstdlib>
#include <functional>
#include <optional>
#include <thread>
#include <vector>

namespace carath {

inline int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  int n = hw == 0 ? 1 : static_cast<int>(hw);
  if (const char* env = std::getenv("SPARSE_CARATH_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n < 1 ? 1 : n;
}

// next(): pulls the next candidate or nullopt when exhausted.
// eval(): pure; returns a result when the candidate is accepted.
template <class Candidate, class Result>
std::optional<Result> first_accept(const std::function<std::optional<Candidate>()>& next,
                                   const std::function<std::optional<Result>(const Candidate&)>& eval) {
  const int workers = worker_count();
  if (workers == 1) {
    while (auto cand = next()) {
      if (auto res = eval(*cand)) return res;
    }
    return std::nullopt;
  }

  const size_t block = static_cast<size_t>(workers) * 4;
  while (true) {
    std::vector<Candidate> batch;
    batch.reserve(block);
    while (batch.size() < block) {
      auto cand = next();
      if (!cand) break;
      batch.push_back(std::move(*cand));
    }
    if (batch.empty()) return std::nullopt;

    std::vector<std::optional<Result>> results(batch.size());
    std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
    std::vector<std::thread> pool;
    std::size_t stride = (batch.size() + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::size_t lo = w * stride, hi = std::min(batch.size(), lo + stride);
      if (lo >= hi) break;
      pool.emplace_back([&, lo, hi, w] {
        try {
          for (std::size_t i = lo; i < hi; ++i) results[i] = eval(batch[i]);
        } catch (...) {
          errors[static_cast<size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& err : errors)
      if (err) std::rethrow_exception(err);
    for (std::size_t i = 0; i < batch.size(); ++i)
      if (results[i]) return results[i];
    if (batch.size() < block) return std::nullopt;  // enumeration exhausted
  }
}

}  // namespace carath
