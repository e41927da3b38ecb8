#pragma once

#include <cstddef>
#include <functional>
#include <optional>

namespace stylescope {

/// Worker count: explicit value if given, else STYLESCOPE_THREADS, else 1.
std::size_t resolve_threads(std::optional<std::size_t> requested);

/// Calls `fn(i)` for every i in [0, count) on up to `threads` workers.
/// The first exception thrown by any call is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn);

/// Calls `fn(chunk, begin, end)` for every fixed-size chunk of [0, n).
/// Chunk boundaries depend only on `n` and `chunk_size`, never on `threads`,
/// so callers that reduce per-chunk partials in chunk order get results that
/// are bit-identical for any worker count.
void for_each_chunk(std::size_t n, std::size_t chunk_size, std::size_t threads,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

inline std::size_t chunk_count(std::size_t n, std::size_t chunk_size) {
  return (n + chunk_size - 1) / chunk_size;
}

}  // namespace stylescope
