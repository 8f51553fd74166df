#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace polygaf {

// Worker count actually used: `requested` if positive, else the
// POLYGAF_WORKERS environment override, else the hardware concurrency.
int resolve_worker_count(int requested);

// Runs fn(0..trials-1), each result landing in its own slot of `out`.
// Scheduling moves between threads freely; because every reduction the callers
// perform walks the slots in trial order, the final numbers are identical for
// any worker count. The first per-trial exception (in trial order) is
// rethrown after all workers finish.
template <typename T>
void run_indexed(std::uint64_t trials, int workers, const std::function<T(std::uint64_t)>& fn,
                 std::vector<T>& out) {
  out.resize(trials);
  std::vector<std::exception_ptr> errors(trials);
  const int count = resolve_worker_count(workers);
  const std::uint64_t chunk =
      std::max<std::uint64_t>(1, trials / (static_cast<std::uint64_t>(count) * 64));
  std::atomic<std::uint64_t> next{0};
  const auto work = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= trials) return;
      const std::uint64_t end = std::min(trials, begin + chunk);
      for (std::uint64_t t = begin; t < end; ++t) {
        try {
          out[t] = fn(t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      }
    }
  };
  if (count <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::uint64_t t = 0; t < trials; ++t)
    if (errors[t]) std::rethrow_exception(errors[t]);
}

}  // namespace polygaf
