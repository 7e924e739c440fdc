#pragma once

// Index-ordered parallel map: results land at their input index, so output
// is identical for any worker count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace marchsim {

template <class F>
auto parallel_map(std::size_t n, unsigned workers, F &&fn) -> std::vector<std::invoke_result_t<F &, std::size_t>> {
  using R = std::invoke_result_t<F &, std::size_t>;
  std::vector<R> out(n);
  const unsigned threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto body = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body);
  for (auto &t : pool) t.join();
  // Rethrow the lowest-index failure so errors are deterministic too.
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace marchsim
