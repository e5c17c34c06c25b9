// Index-parallel loop over independent work items.
#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace qwasser {

/// Thread count hint from QWASSER_THREADS; 1 when unset or invalid.
inline unsigned thread_count_hint() {
  const char* env = std::getenv("QWASSER_THREADS");
  if (env == nullptr) return 1;
  try {
    const long v = std::stol(env);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  } catch (const std::exception&) {
  }
  return 1;
}

/// Calls fn(i) for i in [0, n). fn must only write to slot i of its outputs.
/// The exception raised by the lowest failing index is rethrown after all
/// workers have joined.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned threads = thread_count_hint()) {
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < n; i += stride) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    run(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t, threads);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace qwasser
