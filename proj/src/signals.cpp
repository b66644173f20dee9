#include "flowembed/signals.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>

namespace flowembed {

namespace {

double bessel_i0(double x) {
  // power series; converges quickly for the beta range used here
  double term = 1.0, sum = 1.0;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 120; ++k) {
    term *= q / ((double)k * (double)k);
    sum += term;
    if (term < sum * 1e-18) break;
  }
  return sum;
}

double kaiser(double t, int W, double beta) {
  const double u = t / (double)W;
  const double arg = 1.0 - u * u;
  if (arg <= 0.0) return 0.0;
  return bessel_i0(beta * std::sqrt(arg)) / bessel_i0(beta);
}

double sinc(double t) {
  if (std::abs(t) < 1e-12) return 1.0;
  const double p = kPi * t;
  return std::sin(p) / p;
}

std::size_t expected_count(double T, double dt) {
  return (std::size_t)std::floor(2.0 * T / dt + 1e-9) + 1;
}

}  // namespace

double BandLimitedSignal::sup_abs() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s));
  return m;
}

BandLimitedSignal make_signal(double T, double dt, double band_lo, double band_hi,
                              bool real_kind, const std::function<cplx(double)>& f) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ParamError("make_signal: T, dt must be positive");
  const double nyq = 0.5 / dt;
  if (std::max(std::abs(band_lo), std::abs(band_hi)) > nyq + 1e-12)
    throw ParamError("make_signal: sample_step violates the declared band's Nyquist rate");
  BandLimitedSignal s;
  s.T = T;
  s.dt = dt;
  s.band_lo = band_lo;
  s.band_hi = band_hi;
  s.real_kind = real_kind;
  const std::size_t n = expected_count(T, dt);
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx v = f(s.x_of(i));
    s.samples[i] = real_kind ? cplx(v.real(), 0.0) : v;
  }
  return s;
}

cplx ToneRep::eval(double x) const {
  cplx acc(0.0, 0.0);
  for (const auto& t : tones) {
    const double ph = 2.0 * kPi * t.freq * x + t.phase;
    if (real_kind)
      acc += cplx(t.amp * std::cos(ph), 0.0);
    else
      acc += t.amp * std::exp(cplx(0.0, ph));
  }
  return acc;
}

ToneRep random_tones(std::uint64_t seed, double a, int n_tones) {
  Rng rng(seed);
  ToneRep rep;
  rep.real_kind = true;
  for (int i = 0; i < n_tones; ++i) {
    Tone t;
    t.freq = rng.uniform(-0.47 * a, 0.47 * a);
    t.amp = rng.uniform(0.2, 1.0);
    t.phase = rng.uniform(0.0, 2.0 * kPi);
    rep.tones.push_back(t);
  }
  // normalize so sup over a dense probe grid is 0.9
  double sup = 0.0;
  for (double x = -50.0; x <= 50.0; x += 0.01)
    sup = std::max(sup, std::abs(rep.eval(x)));
  if (sup > 0.0)
    for (auto& t : rep.tones) t.amp *= 0.9 / sup;
  return rep;
}

BandLimitedSignal sample_tones(const ToneRep& rep, double T, double dt,
                               double band_lo, double band_hi) {
  return make_signal(T, dt, band_lo, band_hi, rep.real_kind,
                     [&](double x) { return rep.eval(x); });
}

double translate_guard(const BandLimitedSignal& f) { return kSincTaps * f.dt; }

BandLimitedSignal translate(const BandLimitedSignal& f, double r) {
  if (std::abs(r) > f.T / 4.0 + 1e-12)
    throw DomainError("translate: |r| exceeds window_radius/4");
  const double guard = translate_guard(f);
  const double T_target = f.T - std::abs(r) - guard;
  if (!(T_target > 0.0)) throw DomainError("translate: window too small for guard band");
  // snap the output radius onto the sample lattice
  const double T_out = std::floor(T_target / f.dt - 1e-9) * f.dt;
  const double s = r / f.dt;
  const long long k = (long long)std::llround(s);
  const double frac = s - (double)k;  // |frac| <= 1/2
  const bool exact = std::abs(frac) < 1e-12;

  BandLimitedSignal out;
  out.T = T_out;
  out.dt = f.dt;
  out.band_lo = f.band_lo;
  out.band_hi = f.band_hi;
  out.real_kind = f.real_kind;
  const std::size_t n = expected_count(T_out, f.dt);
  out.samples.resize(n);

  std::array<double, 2 * kSincTaps + 1> w{};
  if (!exact) {
    for (int m = -kSincTaps; m <= kSincTaps; ++m)
      w[m + kSincTaps] = sinc((double)m - frac) * kaiser((double)m - frac, kSincTaps, kKaiserBeta);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double x = out.x_of(i);
    const long long j0 = (long long)std::llround((x + f.T) / f.dt) + k;
    if (exact) {
      out.samples[i] = f.samples.at((std::size_t)j0);
      continue;
    }
    cplx acc(0.0, 0.0);
    for (int m = -kSincTaps; m <= kSincTaps; ++m)
      acc += f.samples.at((std::size_t)(j0 + m)) * w[m + kSincTaps];
    out.samples[i] = out.real_kind ? cplx(acc.real(), 0.0) : acc;
  }
  return out;
}

MetricResult metric_d(const BandLimitedSignal& f, const BandLimitedSignal& g, int depth) {
  if (std::abs(f.T - g.T) > 1e-12 || std::abs(f.dt - g.dt) > 1e-12 ||
      f.size() != g.size())
    throw DomainError("metric_d: sample grids differ");
  if ((double)depth > f.T + 1e-12)
    throw DomainError("metric_d: window_radius smaller than requested depth");
  MetricResult r{0.0, 0.0};
  for (int n = 1; n <= depth; ++n) {
    double sup = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (std::abs(f.x_of(i)) > (double)n + 1e-12) continue;
      sup = std::max(sup, std::abs(f.samples[i] - g.samples[i]));
    }
    r.value += std::ldexp(sup, -n);
  }
  r.tail_bound = std::ldexp(f.sup_abs() + g.sup_abs(), -depth);
  return r;
}

std::vector<std::pair<double, double>> spectrum_magnitudes(const BandLimitedSignal& f) {
  const std::size_t n = f.size();
  if (n < 8) throw DomainError("spectrum: too few samples");
  fftw_complex* buf = fftw_alloc_complex(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (double)i / (double)(n - 1);
    const double taper =
        0.42 - 0.5 * std::cos(2.0 * kPi * u) + 0.08 * std::cos(4.0 * kPi * u);
    buf[i][0] = f.samples[i].real() * taper;
    buf[i][1] = f.samples[i].imag() * taper;
  }
  fftw_plan plan = fftw_plan_dft_1d((int)n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  std::vector<std::pair<double, double>> out(n);
  for (std::size_t kk = 0; kk < n; ++kk) {
    double nu = (double)kk / ((double)n * f.dt);
    if (nu >= 0.5 / f.dt) nu -= 1.0 / f.dt;
    out[kk] = {nu, std::hypot(buf[kk][0], buf[kk][1])};
  }
  fftw_free(buf);
  std::sort(out.begin(), out.end());
  return out;
}

double fourier_leakage(const BandLimitedSignal& f, double lo, double hi) {
  bool all_zero = true;
  for (const auto& s : f.samples)
    if (s != cplx(0.0, 0.0)) { all_zero = false; break; }
  if (all_zero) return 0.0;

  const auto spec = spectrum_magnitudes(f);
  const double widen = 3.0 / f.T;
  const double wlo = lo - widen, whi = hi + widen;
  double total = 0.0, outside = 0.0;
  for (const auto& [nu, mag] : spec) {
    const double e = mag * mag;
    total += e;
    if (nu < wlo || nu > whi) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

BandLimitedSignal crop_signal(const BandLimitedSignal& f, double T_new) {
  if (!(T_new > 0.0) || T_new > f.T + 1e-12)
    throw ParamError("crop: new half-window must lie in (0, T]");
  BandLimitedSignal out;
  out.dt = f.dt;
  out.band_lo = f.band_lo;
  out.band_hi = f.band_hi;
  out.real_kind = f.real_kind;
  const long long half = (long long)std::floor(T_new / f.dt + 1e-9);
  out.T = (double)half * f.dt;
  const long long mid = (long long)std::llround(f.T / f.dt);
  for (long long i = mid - half; i <= mid + half; ++i)
    out.samples.push_back(f.samples[(std::size_t)i]);
  return out;
}

BandLimitedSignal b1_to_real(const BandLimitedSignal& f) {
  if (!(0.0 < f.band_lo && f.band_lo < f.band_hi))
    throw ParamError("b1_to_real: declared band must satisfy 0 < lo < hi");
  BandLimitedSignal out = f;
  for (auto& s : out.samples) s = cplx(s.real(), 0.0);  // (f + conj f)/2
  out.real_kind = true;
  out.band_lo = -f.band_hi;
  out.band_hi = f.band_hi;
  return out;
}

}  // namespace flowembed
