#pragma once

#include <cstdint>
#include <functional>

namespace esym {

/// Runs fn(chunk_index, begin, end) over [0, n_items) split into fixed-size
/// chunks. Chunk boundaries depend only on n_items and chunk_size, never on
/// the worker count, so per-chunk results reduced in chunk order are
/// identical for any n_threads.
void parallel_chunks(std::uint64_t n_items, std::uint64_t chunk_size, int n_threads,
                     const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn);

}  // namespace esym
