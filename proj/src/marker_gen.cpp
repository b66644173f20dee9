#include "flowembed/marker_gen.hpp"

#include <stdexcept>

#include "flowembed/common.hpp"

namespace flowembed {

double gen_value_min() {
  const double inv_c = 1.0 / kGenPinchC;
  return inv_c + 0.05 * (1.0 - inv_c);
}

MarkerSequence random_marker(std::uint64_t seed, int lo, int hi, int M,
                             int M1) {
  if (M < 1 || M1 <= M) throw ParamError("random_marker: need 1 <= M < M1");
  if (hi - lo + 1 < 6 * M1)
    throw ParamError("random_marker: window shorter than 6*M1");
  Rng rng(seed);
  MarkerSequence m;
  m.lo = lo;
  m.hi = hi;
  m.M = M;
  m.M1 = M1;
  const double vmin = gen_value_min();
  int prev = lo + rng.int_in(0, M - 1);
  m.values[prev] = 1.0;
  while (true) {
    const int next = prev + rng.int_in(M, 2 * M1 - 1);
    if (next > hi) break;
    m.values[next] = 1.0;
    // sub-markers strictly between the two 1-sites, >= M from both and from
    // each other
    int pos = prev + M;
    while (pos <= next - M) {
      if (rng.uniform() < 0.6) {
        m.values[pos] = vmin + (1.0 - vmin) * rng.uniform();
        pos += M;
      } else {
        pos += 1;
      }
    }
    prev = next;
  }
  return m;
}

MarkerSequence periodic_marker(std::uint64_t seed, int period, int lo, int hi,
                               int M, int M1) {
  if (M < 1 || M1 <= M) throw ParamError("periodic_marker: need 1 <= M < M1");
  if (period < M) throw ParamError("periodic_marker: period < M");
  if (period > 2 * M1 - 1)
    throw ParamError("periodic_marker: period exceeds 2*M1-1 coverage bound");
  if (hi - lo + 1 < 6 * M1)
    throw ParamError("periodic_marker: window shorter than 6*M1");
  Rng rng(seed);
  MarkerSequence m;
  m.lo = lo;
  m.hi = hi;
  m.M = M;
  m.M1 = M1;
  const int phase = rng.int_in(0, period - 1);
  const bool with_sub = period >= 2 * M;
  int sub_off = 0;
  double sub_val = 0.0;
  if (with_sub) {
    sub_off = rng.int_in(M, period - M);
    const double vmin = gen_value_min();
    sub_val = vmin + (1.0 - vmin) * rng.uniform();
  }
  // first 1-site at the smallest n >= lo with n = phase (mod period)
  long long start = lo + (((long long)phase - lo) % period + period) % period;
  for (long long n = start; n <= hi; n += period) {
    m.values[(int)n] = 1.0;
    if (with_sub && n + sub_off <= hi) m.values[(int)(n + sub_off)] = sub_val;
  }
  // a sub-marker belonging to the period right before the window start
  if (with_sub && start - period + sub_off >= lo)
    m.values[(int)(start - period + sub_off)] = sub_val;
  return m;
}

}  // namespace flowembed
