#pragma once
// Locked reference values for the regression suite.  A non-positive margin
// means "not locked yet": the suite records the measured value instead of
// comparing.  Values are tied to kGoldenSeed.

namespace flowembed {

inline constexpr unsigned long long kGoldenSeed = 7;

// Rigidity margins min_r sup_t |Phi_y(t+r) - Phi_x(t)| for the three
// marker pairs at kGoldenSeed (r_step 1e-3, window [-20, 20]).
inline constexpr double kGoldenRigidityMargin[3] = {
    0.8784479160776056, 0.9940401884750802, 1.0306220178593741};

// Relative tolerance when locked.
inline constexpr double kGoldenRelTol = 0.01;

}  // namespace flowembed
