#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

namespace epsmatch {

/// Running count/mean/sum-of-squared-deviations (Welford), mergeable with
/// Chan's update.
struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) noexcept {
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }

  [[nodiscard]] double variance() const noexcept {
    return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0;
  }
  [[nodiscard]] double stderr_of_mean() const noexcept {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }

  static Moments merge(const Moments& a, const Moments& b) noexcept {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    Moments r;
    r.count = a.count + b.count;
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double delta = b.mean - a.mean;
    r.mean = a.mean + delta * nb / static_cast<double>(r.count);
    r.m2 = a.m2 + b.m2 + delta * delta * na * nb / static_cast<double>(r.count);
    return r;
  }
};

inline constexpr std::size_t kReplicateBlock = 4096;

inline unsigned resolve_threads(unsigned requested) noexcept {
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

/// Runs `task(b)` for every b in [0, count) on up to `threads` threads.
template <class Task>
void parallel_for(std::size_t count, unsigned threads, Task&& task) {
  threads = std::min<unsigned>(resolve_threads(threads),
                               static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (std::size_t b; (b = next.fetch_add(1, std::memory_order_relaxed)) < count;) task(b);
  };
  if (threads <= 1) {
    drain();
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(drain);
}

/// Moments of `value(r)` over replicates r = 0..count-1. Replicates are
/// grouped in fixed blocks and blocks merged along a fixed pairwise tree, so
/// the result is bit-identical for any thread count.
template <class Value>
Moments reduce_replicates(std::size_t count, unsigned threads, Value&& value) {
  const std::size_t blocks = (count + kReplicateBlock - 1) / kReplicateBlock;
  std::vector<Moments> partial(blocks);
  parallel_for(blocks, threads, [&](std::size_t b) {
    Moments m;
    const std::size_t end = std::min(count, (b + 1) * kReplicateBlock);
    for (std::size_t r = b * kReplicateBlock; r < end; ++r) m.add(value(r));
    partial[b] = m;
  });
  for (std::size_t width = 1; width < blocks; width *= 2) {
    for (std::size_t i = 0; i + width < blocks; i += 2 * width) {
      partial[i] = Moments::merge(partial[i], partial[i + width]);
    }
  }
  return blocks ? partial[0] : Moments{};
}

}  // namespace epsmatch
