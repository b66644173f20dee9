#pragma once
// Gauss-Legendre panels and adaptive bisection for smooth kernels.

#include <array>
#include <cmath>
#include <cstddef>

namespace flowembed {

struct GL16 {
  // positive-half abscissae / weights on [-1,1]
  static constexpr std::array<double, 8> x = {
      0.0950125098376374401853193, 0.2816035507792589132304605,
      0.4580167776572273863424194, 0.6178762444026437484466718,
      0.7554044083550030338951012, 0.8656312023878317438804679,
      0.9445750230732325760779884, 0.9894009349916499325961542};
  static constexpr std::array<double, 8> w = {
      0.1894506104550684962853967, 0.1826034150449235888667637,
      0.1691565193950025381893121, 0.1495959888165767320815017,
      0.1246289712555338720524763, 0.0951585116824927848099251,
      0.0622535239386478928628438, 0.0271524594117540948517806};
};

struct GL32 {
  static constexpr std::array<double, 16> x = {
      0.0483076656877383162348126, 0.1444719615827964934851864,
      0.2392873622521370745446032, 0.3318686022821276497799168,
      0.4213512761306353453641194, 0.5068999089322293900237475,
      0.5877157572407623290407455, 0.6630442669302152009751152,
      0.7321821187402896803874267, 0.7944837959679424069630973,
      0.8493676137325699701336930, 0.8963211557660521239653072,
      0.9349060759377396891709191, 0.9647622555875064307738119,
      0.9856115115452683354001750, 0.9972638618494815635449811};
  static constexpr std::array<double, 16> w = {
      0.0965400885147278005667648, 0.0956387200792748594190820,
      0.0938443990808045656391802, 0.0911738786957638847128686,
      0.0876520930044038111427715, 0.0833119242269467552221991,
      0.0781938957870703064717409, 0.0723457941088485062253994,
      0.0658222227763618468376501, 0.0586840934785355471452836,
      0.0509980592623761761961632, 0.0428358980222266806568786,
      0.0342738629130214331026877, 0.0253920653092620594557526,
      0.0162743947309056706051706, 0.0070186100094700966004071};
};

template <class Rule, class F>
auto gl_panel(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  auto acc = h * Rule::w[0] * (f(c + h * Rule::x[0]) + f(c - h * Rule::x[0]));
  for (std::size_t i = 1; i < Rule::x.size(); ++i)
    acc += h * Rule::w[i] * (f(c + h * Rule::x[i]) + f(c - h * Rule::x[i]));
  return acc;
}

namespace detail {
template <class F, class V>
V adaptive_rec(F& f, double a, double b, V whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const V left = gl_panel<GL16>(f, a, m), right = gl_panel<GL16>(f, m, b);
  const V refined = left + right;
  if (std::abs(refined - whole) <= tol || depth >= 28) return refined;
  return adaptive_rec(f, a, m, left, 0.5 * tol, depth + 1) +
         adaptive_rec(f, m, b, right, 0.5 * tol, depth + 1);
}
}  // namespace detail

// Adaptive GL16 bisection to absolute tolerance `tol`.
template <class F>
auto adaptive_gl(F&& f, double a, double b, double tol) {
  auto whole = gl_panel<GL16>(f, a, b);
  return detail::adaptive_rec(f, a, b, whole, tol, 0);
}

// Fixed composite rule: n equal GL16 panels.
template <class F>
auto composite_gl(F&& f, double a, double b, int n_panels) {
  const double h = (b - a) / n_panels;
  auto acc = gl_panel<GL16>(f, a, a + h);
  for (int k = 1; k < n_panels; ++k)
    acc += gl_panel<GL16>(f, a + k * h, a + (k + 1) * h);
  return acc;
}

}  // namespace flowembed
