#pragma once

// Deterministic parallel helpers. Work is cut into fixed blocks whose boundaries do
// not depend on the worker count, each block is reduced sequentially, and block
// partials are combined by a fixed pairwise tree. Results are therefore bitwise
// identical for any number of workers.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <thread>
#include <vector>

namespace rnlab {

inline unsigned default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1U : hw;
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. fn must write only to slot i.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& fn) {
  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

/// Neumaier-compensated running sum.
template <typename T>
class CompensatedSum {
 public:
  void add(const T& x) {
    const T t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <typename T>
T pairwise_combine(std::vector<T> parts) {
  if (parts.empty()) return T{};
  while (parts.size() > 1) {
    std::vector<T> next((parts.size() + 1) / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = 2 * i + 1 < parts.size() ? parts[2 * i] + parts[2 * i + 1] : parts[2 * i];
    }
    parts = std::move(next);
  }
  return parts.front();
}

/// sum_{i < n} term(i) with fixed blocks of `block` indices, compensated inside a
/// block and pairwise across blocks.
template <typename T, typename F>
T blocked_sum(std::size_t n, F&& term, unsigned workers = 1, std::size_t block = 256) {
  const std::size_t blocks = (n + block - 1) / block;
  std::vector<T> partial(blocks);
  parallel_for(blocks, workers, [&](std::size_t b) {
    CompensatedSum<T> acc;
    const std::size_t end = std::min(n, (b + 1) * block);
    for (std::size_t i = b * block; i < end; ++i) acc.add(term(i));
    partial[b] = acc.value();
  });
  return pairwise_combine(std::move(partial));
}

}  // namespace rnlab
