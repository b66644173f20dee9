#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "flowembed/common.hpp"
#include "flowembed/signals.hpp"

using namespace flowembed;

namespace {

// sup |f - g| over the sample positions both grids share (same dt, windows
// both multiples of dt)
double sup_diff_common(const BandLimitedSignal& f, const BandLimitedSignal& g) {
  REQUIRE(std::abs(f.dt - g.dt) < 1e-15);
  const BandLimitedSignal& small = f.T <= g.T ? f : g;
  const BandLimitedSignal& big = f.T <= g.T ? g : f;
  const long long off = (long long)std::llround((big.T - small.T) / big.dt);
  REQUIRE(std::abs((double)off * big.dt - (big.T - small.T)) < 1e-9);
  double sup = 0.0;
  for (std::size_t i = 0; i < small.size(); ++i)
    sup = std::max(sup,
                   std::abs(small.samples[i] - big.samples[(std::size_t)off + i]));
  return sup;
}

}  // namespace

TEST_CASE("make_signal grid layout") {
  auto f = make_signal(2.0, 0.5, -1.0, 1.0, true,
                       [](double x) { return cplx(x, 0.0); });
  CHECK(f.size() == 9);
  CHECK(f.x_of(0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(f.x_of(8) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(f.samples[4] == cplx(0.0, 0.0));
  CHECK_THROWS_AS(make_signal(-1.0, 0.5, -1.0, 1.0, true,
                              [](double) { return cplx(0.0, 0.0); }),
                  ParamError);
  // dt = 1 puts Nyquist at 0.5 < band edge 1
  CHECK_THROWS_AS(make_signal(2.0, 1.0, -1.0, 1.0, true,
                              [](double) { return cplx(0.0, 0.0); }),
                  ParamError);
}

TEST_CASE("random_tones determinism and bounds") {
  auto r1 = random_tones(42, 2.0);
  auto r2 = random_tones(42, 2.0);
  REQUIRE(r1.tones.size() == r2.tones.size());
  for (std::size_t i = 0; i < r1.tones.size(); ++i) {
    CHECK(r1.tones[i].freq == r2.tones[i].freq);
    CHECK(r1.tones[i].amp == r2.tones[i].amp);
    CHECK(r1.tones[i].phase == r2.tones[i].phase);
    CHECK(std::abs(r1.tones[i].freq) <= 0.47 * 2.0);
  }
  auto r3 = random_tones(43, 2.0);
  bool differs = false;
  for (std::size_t i = 0; i < r1.tones.size(); ++i)
    if (r1.tones[i].freq != r3.tones[i].freq) differs = true;
  CHECK(differs);
  double sup = 0.0;
  for (double x = -40.0; x <= 40.0; x += 0.01)
    sup = std::max(sup, std::abs(r1.eval(x)));
  CHECK(sup <= 0.9 + 1e-12);
}

TEST_CASE("translate: exact branch matches closed form") {
  auto rep = random_tones(7, 2.0);
  auto f = sample_tones(rep, 36.0, 0.125, -1.0, 1.0);
  const double r = 0.5;  // 4 * dt: exact sample-copy branch
  auto g = translate(f, r);
  CHECK(g.T < f.T);
  CHECK(std::fmod(g.T, g.dt) == doctest::Approx(0.0).epsilon(1e-12));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(g.samples[i] - rep.eval(g.x_of(i) + r)));
  CHECK(worst < 1e-13);
}

TEST_CASE("translate: fractional shift via windowed sinc") {
  auto rep = random_tones(11, 2.0);
  auto f = sample_tones(rep, 36.0, 0.125, -1.0, 1.0);
  const double r = 0.3;  // not a multiple of dt
  auto g = translate(f, r);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(g.samples[i] - rep.eval(g.x_of(i) + r)));
  CHECK(worst < 1e-8);

  CHECK_THROWS_AS(translate(f, f.T / 4.0 + 0.5), DomainError);
  CHECK_THROWS_AS(translate(f, -(f.T / 4.0 + 0.5)), DomainError);
}

TEST_CASE("translate flow law") {
  auto rep = random_tones(5, 2.0);
  auto f = sample_tones(rep, 36.0, 0.125, -1.0, 1.0);
  auto direct = translate(f, 0.75);
  auto composed = translate(translate(f, 0.45), 0.3);
  CHECK(sup_diff_common(direct, composed) < 1e-6);
}

TEST_CASE("metric_d: identity, symmetry, constant-difference oracle") {
  auto rep = random_tones(3, 2.0);
  auto f = sample_tones(rep, 36.0, 0.125, -1.0, 1.0);
  auto same = metric_d(f, f, 20);
  CHECK(same.value == 0.0);

  const double cst = 0.01;
  auto zero = make_signal(36.0, 0.125, -1.0, 1.0, true,
                          [](double) { return cplx(0.0, 0.0); });
  auto off = make_signal(36.0, 0.125, -1.0, 1.0, true,
                         [&](double) { return cplx(cst, 0.0); });
  const int depth = 10;
  auto m = metric_d(zero, off, depth);
  // sum_{n=1..depth} 2^{-n} * cst
  CHECK(m.value == doctest::Approx(cst * (1.0 - std::ldexp(1.0, -depth)))
                       .epsilon(1e-13));
  CHECK(m.tail_bound == doctest::Approx(std::ldexp(cst, -depth)).epsilon(1e-13));
  auto rev = metric_d(off, zero, depth);
  CHECK(rev.value == m.value);

  auto g = sample_tones(random_tones(4, 2.0), 36.0, 0.125, -1.0, 1.0);
  auto ab = metric_d(f, g, 12), ba = metric_d(g, f, 12);
  CHECK(ab.value == ba.value);
  CHECK(ab.value > 0.0);
  // triangle inequality through the zero signal
  auto az = metric_d(f, zero, 12), zb = metric_d(zero, g, 12);
  CHECK(ab.value <= az.value + zb.value + 1e-12);

  CHECK_THROWS_AS(metric_d(f, crop_signal(f, 20.0), 12), DomainError);
  CHECK_THROWS_AS(metric_d(f, g, 40), DomainError);  // depth > T
}

TEST_CASE("fourier_leakage separates in-band from out-of-band") {
  auto in_band = make_signal(50.0, 0.125, -1.0, 1.0, true, [](double x) {
    return cplx(std::cos(2.0 * kPi * 0.3 * x), 0.0);
  });
  CHECK(fourier_leakage(in_band, -1.0, 1.0) < 1e-6);

  auto out_band = make_signal(50.0, 0.125, -4.0, 4.0, true, [](double x) {
    return cplx(std::cos(2.0 * kPi * 3.0 * x), 0.0);
  });
  CHECK(fourier_leakage(out_band, -1.0, 1.0) > 0.5);

  auto zero = make_signal(10.0, 0.125, -1.0, 1.0, true,
                          [](double) { return cplx(0.0, 0.0); });
  CHECK(fourier_leakage(zero, -1.0, 1.0) == 0.0);

  // support invariance under translation
  auto rep = random_tones(9, 2.0);
  auto f = sample_tones(rep, 50.0, 0.125, -1.0, 1.0);
  const double lf = fourier_leakage(f, -1.0, 1.0);
  const double lt = fourier_leakage(translate(f, 0.375), -1.0, 1.0);
  CHECK(std::abs(lf - lt) < 1e-6);
}

TEST_CASE("b1_to_real: Euler identity and properties") {
  const double xi = 1.2;
  auto f = make_signal(40.0, 0.125, 1.0, 1.4, false, [&](double x) {
    return std::exp(cplx(0.0, 2.0 * kPi * xi * x));
  });
  auto g = b1_to_real(f);
  CHECK(g.real_kind);
  CHECK(g.band_lo == doctest::Approx(-1.4).epsilon(1e-15));
  CHECK(g.band_hi == doctest::Approx(1.4).epsilon(1e-15));
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(g.samples[i].real() -
                                     std::cos(2.0 * kPi * xi * g.x_of(i))));
  CHECK(worst < 1e-10);
  for (const auto& s : g.samples) CHECK(s.imag() == 0.0);
  CHECK(g.sup_abs() <= f.sup_abs() + 1e-15);

  auto bad = f;
  bad.band_lo = -0.5;
  CHECK_THROWS_AS(b1_to_real(bad), ParamError);

  // real input: realification is the identity on samples
  auto real_in = make_signal(10.0, 0.125, 0.5, 1.0, true, [](double x) {
    return cplx(std::cos(2.0 * kPi * 0.7 * x), 0.0);
  });
  auto same = b1_to_real(real_in);
  double d = 0.0;
  for (std::size_t i = 0; i < same.size(); ++i)
    d = std::max(d, std::abs(same.samples[i] - real_in.samples[i]));
  CHECK(d == 0.0);

  // injectivity witness: distinct inputs stay at positive distance
  auto u = sample_tones(random_tones(21, 2.0), 36.0, 0.125, -1.0, 1.0);
  auto v = sample_tones(random_tones(22, 2.0), 36.0, 0.125, -1.0, 1.0);
  u.band_lo = v.band_lo = 0.1;
  u.band_hi = v.band_hi = 1.0;
  CHECK(metric_d(b1_to_real(u), b1_to_real(v), 12).value > 0.0);
}

TEST_CASE("crop_signal keeps centered samples") {
  auto rep = random_tones(13, 2.0);
  auto f = sample_tones(rep, 36.0, 0.125, -1.0, 1.0);
  auto g = crop_signal(f, 10.0);
  CHECK(g.T == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(g.dt == f.dt);
  const long long off = (long long)std::llround((f.T - g.T) / f.dt);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(g.samples[i] == f.samples[(std::size_t)off + i]);
  CHECK_THROWS_AS(crop_signal(f, 0.0), ParamError);
  CHECK_THROWS_AS(crop_signal(f, 37.0), ParamError);
}

TEST_CASE("spectrum_magnitudes peaks at the tone frequency") {
  const double nu0 = 0.35;
  auto f = make_signal(50.0, 0.125, -1.0, 1.0, true, [&](double x) {
    return cplx(std::cos(2.0 * kPi * nu0 * x), 0.0);
  });
  auto spec = spectrum_magnitudes(f);
  double best_nu = 0.0, best_mag = -1.0;
  for (const auto& [nu, mag] : spec)
    if (nu > 0.0 && mag > best_mag) { best_mag = mag; best_nu = nu; }
  CHECK(std::abs(best_nu - nu0) < 1.0 / f.T + 1e-12);

  BandLimitedSignal tiny;
  tiny.T = 0.2;
  tiny.dt = 0.1;
  tiny.samples.assign(4, cplx(0.0, 0.0));
  CHECK_THROWS_AS(spectrum_magnitudes(tiny), DomainError);
}
