#include "stylescope/core/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "stylescope/core/error.hpp"
#include "stylescope/core/text.hpp"

namespace stylescope {

std::size_t resolve_threads(std::optional<std::size_t> requested) {
  if (requested) return std::max<std::size_t>(1, *requested);
  if (const char* env = std::getenv("STYLESCOPE_THREADS"); env && *env) {
    const auto n = parse_uint(env, "STYLESCOPE_THREADS");
    return std::max<std::uint64_t>(1, n);
  }
  return 1;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void for_each_chunk(std::size_t n, std::size_t chunk_size, std::size_t threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (chunk_size == 0) throw UsageError("for_each_chunk: chunk_size must be > 0");
  parallel_for(chunk_count(n, chunk_size), threads,
               [&](std::size_t c) { fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size)); });
}

}  // namespace stylescope
