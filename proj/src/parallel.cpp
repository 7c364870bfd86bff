#include "esym/parallel.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

namespace esym {

void parallel_chunks(std::uint64_t n_items, std::uint64_t chunk_size, int n_threads,
                     const std::function<void(std::size_t, std::uint64_t, std::uint64_t)>& fn) {
  if (chunk_size == 0) throw std::invalid_argument("parallel_chunks: chunk_size == 0");
  if (n_items == 0) return;
  const std::size_t n_chunks =
      static_cast<std::size_t>((n_items + chunk_size - 1) / chunk_size);

  auto run_chunk = [&](std::size_t ci) {
    const std::uint64_t begin = ci * chunk_size;
    const std::uint64_t end = std::min(n_items, begin + chunk_size);
    fn(ci, begin, end);
  };

  if (n_threads <= 1 || n_chunks == 1) {
    for (std::size_t ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex err_mutex;

  auto worker = [&]() {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t ci = next.fetch_add(1, std::memory_order_relaxed);
      if (ci >= n_chunks) return;
      try {
        run_chunk(ci);
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!error) error = std::current_exception();
        }
        failed.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  const int workers = std::min<int>(n_threads, static_cast<int>(n_chunks));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace esym
