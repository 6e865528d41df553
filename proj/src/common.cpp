#include "hlsv/common.hpp"

#include <algorithm>
#include <atomic>

namespace hlsv {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = use hardware concurrency
}

int hardware_threads() {
  int cap = g_max_threads.load();
  if (cap > 0) return cap;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_max_threads(int n) { g_max_threads.store(n); }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& chunk_fn) {
  if (n <= 0) return;
  int nt = std::min<std::int64_t>(hardware_threads(), n);
  if (nt <= 1) {
    chunk_fn(0, n);
    return;
  }
  // fixed chunking, independent of the worker count
  const std::int64_t chunks = std::min<std::int64_t>(n, 64);
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::int64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      std::int64_t lo = n * c / chunks, hi = n * (c + 1) / chunks;
      if (lo < hi) chunk_fn(lo, hi);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nt - 1);
  for (int i = 1; i < nt; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

}  // namespace hlsv
