#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace cvwork::parallel {

inline unsigned worker_count(unsigned requested, std::size_t tasks) {
  const unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(tasks, 1)));
}

/// Calls body(k) for k in [0, tasks), striding task indices over the workers.
/// Passing workers = 0 uses the hardware concurrency. `body` must only touch
/// state owned by task k.
template <typename Body>
void for_each_task(std::size_t tasks, unsigned workers, Body&& body) {
  workers = worker_count(workers, tasks);
  if (workers <= 1) {
    for (std::size_t k = 0; k < tasks; ++k) body(k);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&body, w, workers, tasks] {
      for (std::size_t k = w; k < tasks; k += workers) body(k);
    });
}

}  // namespace cvwork::parallel
