#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zwm {

// Global worker cap; 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

// Calls body(i) for i in [0, n). Work is handed out in chunks; the first
// exception thrown by any worker is rethrown on the calling thread.
template <class F>
void parallel_for(std::size_t n, F&& body, std::size_t grain = 1) {
  unsigned workers = max_threads();
  if (grain == 0) grain = 1;
  std::size_t chunks = (n + grain - 1) / grain;
  if (workers <= 1 || chunks <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (chunks < workers) workers = static_cast<unsigned>(chunks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto run = [&] {
    for (;;) {
      std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        std::size_t end = (c + 1) * grain < n ? (c + 1) * grain : n;
        for (std::size_t i = c * grain; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lk(failure_mu);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace zwm
