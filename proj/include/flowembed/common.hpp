#pragma once
// Shared basics: constants, deterministic RNG, bounded thread helper.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace flowembed {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
using cplx = std::complex<double>;

// splitmix64: tiny, portable, identical on every platform.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next_u64() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0,1) with 53-bit resolution
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // integer in [lo, hi] inclusive
  long long int_in(long long lo, long long hi) {
    return lo + (long long)(next_u64() % (std::uint64_t)(hi - lo + 1));
  }
};

// Worker cap from FLOWEMBED_THREADS (default 1: fully deterministic order
// regardless; chunk results are merged in index order when threads > 1).
int thread_cap();

// parallel_for over [0, n): fn(chunk_begin, chunk_end). Deterministic chunking.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace flowembed
