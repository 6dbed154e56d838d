#pragma once

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace berryosc {

// Worker count: hardware concurrency, capped by the BERRY_THREADS
// environment variable when set to a positive integer.
inline unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BERRY_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1 && (unsigned long)cap < n) n = (unsigned)cap;
    } catch (const std::exception&) {
      // unparsable value: ignore the cap
    }
  }
  return n;
}

// Run fn(i) for i in [0, count) across the thread budget.  Jobs must write
// only to their own output slots; the first exception is rethrown after all
// threads join, so results are deterministic regardless of the budget.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const unsigned workers = std::min<std::size_t>(thread_budget(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace berryosc
