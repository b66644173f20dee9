#pragma once
// The spectral kernel chi1: smooth bump profile in frequency, entire in time.
//
// Frequency profile: ghat(xi) = exp(1 - 1/(1-(xi/h)^2)) for |xi| < h = delta/8,
// zero outside, ghat(0) = 1, so  ∫ chi1 = 1.  All kernels are rescalings of the
// unit-half-width profile G(u) = exp(1 - 1/(1-u^2)):
//   chi1(x) = h * CG(h x),   CG(z) = ∫_{-1}^{1} G(u) e^{2πi u z} du,
// hence K1 = ∫|chi1| = ∫|CG| is independent of delta, and tail integrals scale
// as tail(E, y) = TailG(hE, hy).

#include <utility>

#include "flowembed/common.hpp"

namespace flowembed {

struct SpectralKernel {
  double delta = 0.8;
  double half_width = 0.1;  // = delta/8
  double tol = 1e-9;        // quadrature tolerance for time-domain evaluation
};

SpectralKernel make_chi1(double delta, double tol = 1e-9);

// frequency profile value at xi (0 outside the open support)
double chi1_profile(const SpectralKernel& k, double xi);

// time-domain values; complex overload requires |Im z| <= 1
double eval_chi1(const SpectralKernel& k, double x);
cplx eval_chi1_c(const SpectralKernel& k, cplx z);

struct K1Result {
  double value;         // ∫ |chi1|
  double trunc_radius;  // quadrature truncated at |u| <= trunc_radius (profile units)
  double err_bound;     // tail estimate beyond the truncation + quadrature budget
};
K1Result k1_detailed(const SpectralKernel& k);
double k1(const SpectralKernel& k);
// oracle: same computation with doubled panel order
double k1_refined(const SpectralKernel& k);

// tail(E, y) = ∫_{|t|>E} |chi1(t + i y)| dt from a cached FFT tabulation.
// `refined` recomputes with 4x frequency resolution (independent oracle).
double kernel_tail(const SpectralKernel& k, double E, double y, bool refined = false);

}  // namespace flowembed
