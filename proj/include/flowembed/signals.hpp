#pragma once
// Windowed, Nyquist-sampled band-limited signals: the translation action,
// the weighted-sup metric, spectral-leakage measurement, and realification.

#include <functional>
#include <utility>
#include <vector>

#include "flowembed/common.hpp"

namespace flowembed {

struct BandLimitedSignal {
  double T = 0.0;    // window radius; samples at x_i = -T + i*dt
  double dt = 0.0;   // sample step (must respect the declared band's Nyquist)
  std::vector<cplx> samples;
  double band_lo = 0.0, band_hi = 0.0;  // declared Fourier support
  bool real_kind = false;

  std::size_t size() const { return samples.size(); }
  double x_of(std::size_t i) const { return -T + (double)i * dt; }
  double sup_abs() const;
};

// Sample f on the standard grid; sizes per floor(2T/dt)+1.
BandLimitedSignal make_signal(double T, double dt, double band_lo, double band_hi,
                              bool real_kind, const std::function<cplx(double)>& f);

// Closed-form tone bundles (evaluable anywhere; used as oracle inputs).
struct Tone {
  double freq, amp, phase;
};
struct ToneRep {
  std::vector<Tone> tones;
  bool real_kind = true;  // real: sum of amp*cos(2π f x + φ); else complex exps
  cplx eval(double x) const;
};
// Seeded real tone bundle with frequencies inside (-a/2, a/2), sup ~ 0.9.
ToneRep random_tones(std::uint64_t seed, double a, int n_tones = 12);
BandLimitedSignal sample_tones(const ToneRep& rep, double T, double dt,
                               double band_lo, double band_hi);

// Translation (tau_r f)(x) = f(x + r) by Kaiser-windowed sinc interpolation.
// The output window shrinks by |r| plus a fixed interpolation guard band
// (taps * dt); integer multiples of dt shift exactly.
inline constexpr int kSincTaps = 32;
inline constexpr double kKaiserBeta = 26.0;
double translate_guard(const BandLimitedSignal& f);  // = kSincTaps * dt
BandLimitedSignal translate(const BandLimitedSignal& f, double r);

struct MetricResult {
  double value;       // sum_{n=1..depth} 2^{-n} * sup_{[-n,n]} |f-g|
  double tail_bound;  // (sup|f| + sup|g|) * 2^{-depth}
};
MetricResult metric_d(const BandLimitedSignal& f, const BandLimitedSignal& g, int depth);

// Tapered-DFT energy fraction outside [lo, hi] widened by the taper's spectral
// width (3/T per side).  Zero signal reports 0.
double fourier_leakage(const BandLimitedSignal& f, double lo, double hi);

// f in B1(V[a,b]) (declared band [a,b], 0<a<b) -> (f + conj f)/2 in B(2b).
BandLimitedSignal b1_to_real(const BandLimitedSignal& f);

// Restrict f to [-T_new, T_new] (T_new <= f.T), keeping dt and bands.
BandLimitedSignal crop_signal(const BandLimitedSignal& f, double T_new);

// Blackman-tapered DFT magnitudes as (frequency, |F|) pairs sorted by
// frequency; used for spectrum plots and leakage checks.
std::vector<std::pair<double, double>> spectrum_magnitudes(const BandLimitedSignal& f);

}  // namespace flowembed
