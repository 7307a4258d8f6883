#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace ilo::detail {

/// out[k] = fn(k) for k in [0, count), run in batches of `threads` async
/// tasks. Results land by index, so the output never depends on scheduling.
template <class Fn>
auto parallel_map(std::size_t count, int threads, Fn&& fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out(count);
  if (threads <= 1 || count <= 1) {
    for (std::size_t k = 0; k < count; ++k) out[k] = fn(k);
    return out;
  }
  const auto width = static_cast<std::size_t>(threads);
  for (std::size_t base = 0; base < count; base += width) {
    const std::size_t end = std::min(count, base + width);
    std::vector<std::future<R>> jobs;
    jobs.reserve(end - base);
    for (std::size_t k = base; k < end; ++k)
      jobs.push_back(std::async(std::launch::async, [&fn, k] { return fn(k); }));
    for (std::size_t k = base; k < end; ++k) out[k] = jobs[k - base].get();
  }
  return out;
}

}  // namespace ilo::detail
