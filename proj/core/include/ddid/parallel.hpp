#ifndef DDID_PARALLEL_HPP
#define DDID_PARALLEL_HPP

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace ddid {

/// Global cap on worker threads (the CLI's --threads flag lands here).
inline std::atomic<unsigned>& max_threads_slot() {
  static std::atomic<unsigned> v{0};  // 0 = hardware concurrency
  return v;
}
inline void set_max_threads(unsigned n) { max_threads_slot().store(n); }
inline unsigned effective_threads(std::size_t work_items) {
  unsigned cap = max_threads_slot().load();
  if (cap == 0) cap = std::thread::hardware_concurrency();
  if (cap == 0) cap = 1;
  if (work_items < cap) cap = static_cast<unsigned>(work_items);
  return cap == 0 ? 1 : cap;
}

/// Contiguous-chunk parallel map. Each index is visited exactly once and the
/// body must only write to per-index slots; reductions are for the caller,
/// in index order, so results do not depend on the thread count.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  const unsigned nt = effective_threads(n);
  if (nt <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace ddid

#endif
