#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace tropikam::detail {

/// Worker count: hardware concurrency, capped by TROPIKAM_THREADS when set.
inline std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TROPIKAM_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
    } catch (...) {
      // unparsable cap: ignore
    }
  }
  return n;
}

/// Runs body(begin, end) over contiguous row blocks. Each row is owned by one
/// block, so results do not depend on scheduling.
template <class Body>
void parallel_rows(std::size_t rows, std::size_t work_per_row, Body&& body) {
  const std::size_t workers = worker_count();
  if (workers <= 1 || rows < 2 || rows * work_per_row < (1u << 16)) {
    body(std::size_t{0}, rows);
    return;
  }
  const std::size_t blocks = std::min(workers, rows);
  const std::size_t chunk = (rows + blocks - 1) / blocks;
  std::vector<std::thread> pool;
  for (std::size_t b = 1; b < blocks; ++b) {
    const std::size_t begin = b * chunk;
    const std::size_t end = std::min(rows, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(rows, chunk));
  for (auto& t : pool) t.join();
}

}  // namespace tropikam::detail
