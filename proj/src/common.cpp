#include "flowembed/common.hpp"

#include <cstdlib>

namespace flowembed {

int thread_cap() {
  static int cap = [] {
    if (const char* env = std::getenv("FLOWEMBED_THREADS")) {
      int v = std::atoi(env);
      if (v >= 1) return v;
    }
    return 1;
  }();
  return cap;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  const int workers = thread_cap();
  if (workers <= 1 || n < 2) {
    fn(0, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  for (std::size_t b = 0; b < n; b += chunk)
    pool.emplace_back(fn, b, std::min(n, b + chunk));
  for (auto& t : pool) t.join();
}

}  // namespace flowembed
