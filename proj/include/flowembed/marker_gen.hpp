#pragma once
// Random and periodic marker sequence generators.
//
// random_marker places 1-valued sites with consecutive gaps drawn uniformly
// from [M, 2*M1-1], so every window of 2*M1 consecutive integers contains a
// 1-site.  Between consecutive 1-sites it sprinkles sub-markers (density 0.6,
// pairwise separation >= M) whose values are pinched into (1/c_gen, 1) with
// c_gen = 1.02.  Keeping positive values above 1/c_gen makes every reciprocal
// height land in [1, c_gen), which is what guarantees the minimum Voronoi cell
// length 2*M2 downstream; (1/c_gen, 1) is a subset of the contractual value
// range (1/2, 1).
//
// periodic_marker emits an exactly period-P pattern (one 1-site per period at
// a random phase, optionally one pinched sub-marker per period), used for
// suspension fibers where shift-equivariance must wrap around a cycle.

#include <cstdint>

#include "flowembed/tiling.hpp"

namespace flowembed {

inline constexpr double kGenPinchC = 1.02;

// Pinched sub-marker value range (vmin(), 1.0).
double gen_value_min();

MarkerSequence random_marker(std::uint64_t seed, int lo, int hi, int M = 10,
                             int M1 = 25);

MarkerSequence periodic_marker(std::uint64_t seed, int period, int lo, int hi,
                               int M = 10, int M1 = 25);

}  // namespace flowembed
