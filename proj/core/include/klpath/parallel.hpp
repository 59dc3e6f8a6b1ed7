#pragma once

#include <cstddef>
#include <functional>

namespace klpath {

/// Runs body(chunk) for every chunk in [0, chunks) on up to `threads` workers
/// (0 means the hardware concurrency). Chunks are claimed dynamically, so a
/// body must write only to storage owned by its chunk; callers then reduce the
/// per-chunk results in chunk order, which keeps every result independent of
/// the thread count. The first exception thrown by a body is rethrown.
void parallel_chunks(std::size_t chunks, unsigned threads, const std::function<void(std::size_t)>& body);

/// Number of fixed-size chunks covering `count` items.
constexpr std::size_t chunk_count(std::size_t count, std::size_t chunk_size) noexcept {
  return (count + chunk_size - 1) / chunk_size;
}

/// Thread count from the KLPATH_THREADS environment variable, or 1.
unsigned default_thread_count() noexcept;

}  // namespace klpath
