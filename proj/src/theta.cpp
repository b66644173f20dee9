#include "flowembed/theta.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace flowembed {

cplx theta(cplx z, double L, double b) {
  const cplx i(0.0, 1.0);
  return std::exp(kPi * i * b * z) * std::sin(kPi * z / L);
}

double theta_abs(cplx z, double L, double b) {
  const double x = z.real(), y = z.imag();
  const double s = std::sin(kPi * x / L) * std::cosh(kPi * y / L);
  const double c = std::cos(kPi * x / L) * std::sinh(kPi * y / L);
  return std::exp(-kPi * b * y) * std::hypot(s, c);
}

double theta_sup_norm(double L, double b) {
  // |Theta| = e^{-pi b y} sqrt(sin^2(pi x/L) + sinh^2(pi y/L)); both factors
  // are maximized at y = -1, and the sqrt at sin^2 = 1.
  return std::exp(kPi * b) * std::cosh(kPi / L);
}

namespace {

// Left side of the r1 inequality.
double r1_lhs(cplx z, double L, double b) {
  const cplx w = kPi * z / L;
  return kPi * std::abs(b * std::sin(w) + std::cos(w) / L);
}

// Lipschitz bound for z -> pi(b sin(pi z/L) + cos(pi z/L)/L) on |z| <= r.
double r1_lipschitz(double L, double b, double r) {
  return (kPi * kPi / L) * (b + 1.0 / L) * std::cosh(kPi * r / L);
}

}  // namespace

bool r1_inequality_on_grid(double L, double b, double r, double grid_step) {
  const double thresh = 3.0 / L;
  const long long half = (long long)std::ceil(r / grid_step);
  for (long long iy = -half; iy <= half; ++iy) {
    const double y = iy * grid_step;
    for (long long ix = -half; ix <= half; ++ix) {
      const double x = ix * grid_step;
      if (x * x + y * y > r * r) continue;
      if (!(r1_lhs(cplx(x, y), L, b) > thresh)) return false;
    }
  }
  return true;
}

double select_r1(double L, double b, double grid_step) {
  if (!(L > 1.0)) throw ParamError("select_r1: need L > 1");
  const double r0 = std::min(1.0 / 16.0, 1.0 / L);
  const double thresh = 3.0 / L;
  for (int j = 1; j <= 48; ++j) {
    const double r = r0 / std::ldexp(1.0, j);
    const double step = std::min(grid_step, r / 100.0);
    // any point of the closed disk lies within step*sqrt(2) of a grid point
    // that is itself kept (the grid covers a slightly larger square)
    const double margin = 10.0 * r1_lipschitz(L, b, r) * step * std::sqrt(2.0);
    const long long half = (long long)std::ceil(r / step);
    double lo = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (long long iy = -half; iy <= half && ok; ++iy) {
      const double y = iy * step;
      for (long long ix = -half; ix <= half; ++ix) {
        const double x = ix * step;
        if (x * x + y * y > r * r) continue;
        const double v = r1_lhs(cplx(x, y), L, b);
        lo = std::min(lo, v);
        if (!(v - margin > thresh)) {
          ok = false;
          break;
        }
      }
    }
    if (ok && std::isfinite(lo)) return r;
  }
  // unreachable in practice: at z=0 the left side is pi/L > 3/L, and the
  // margin shrinks linearly with r
  throw ParamError("select_r1: ladder exhausted");
}

double theta_lower_bound(double L, double b, double r1, double grid_step) {
  if (!(r1 > 0.0) || !(r1 < std::min(1.0 / 16.0, 1.0 / L)))
    throw ParamError("theta_lower_bound: invalid r1");
  const double h = grid_step;
  const double cap = 9.0 / (16.0 * L);
  // |Theta(x+iy)| = e^{-pi b y} sqrt(sin^2(pi d/L) + sinh^2(pi y/L)) with d
  // the horizontal distance to the zero lattice LZ.  Split the off-disk strip
  // at y0 = r1/sqrt(2):
  //  - |y| <= y0: off-disk forces d >= sqrt(r1^2 - y^2) >= y0, so |Theta| >=
  //    e^{-pi b y0} sin(pi y0 / L) analytically (no grid needed);
  //  - |y| >= y0: drop the sin term; e^{-pi b y} sinh(pi |y|/L) at -y
  //    dominates its value at +y, so scanning y in [y0, 1] with a local
  //    Lipschitz correction certifies both halves.
  const double y0 = r1 / std::sqrt(2.0);
  double best = std::exp(-kPi * b * y0) * std::sin(kPi * y0 / L);
  const long long rows = (long long)std::ceil((1.0 - y0) / h);
  for (long long k = 0; k <= rows; ++k) {
    const double y = std::min(y0 + (double)k * h, 1.0);
    const double g = std::exp(-kPi * b * y) * std::sinh(kPi * y / L);
    // |g'| on [y-h, y+h]: both factors bounded at the interval ends
    const double lip = kPi * std::exp(-kPi * b * (y - h)) *
                       (b * std::sinh(kPi * (y + h) / L) +
                        std::cosh(kPi * (y + h) / L) / L);
    best = std::min(best, g - h * lip);
  }
  if (!(best > 0.0))
    throw ParamError("theta_lower_bound: certified bound not positive "
                     "(r1 too large or grid too coarse)");
  return std::min(best, cap);
}

double select_E(double L, double b, double theta_L,
                const SpectralKernel& kernel, bool refined) {
  if (!(theta_L > 0.0)) throw ParamError("select_E: need theta_L > 0");
  const double sup = theta_sup_norm(L, b);
  const double target = 0.45 * theta_L;  // theta_L/2 with a 10% safety factor
  const double ys[] = {0.0, 0.5, 1.0};   // tail is even in y
  for (int j = 0; j <= 12; ++j) {
    const double E = 16.0 * std::ldexp(1.0, j);
    double tail_max = 0.0;
    for (double y : ys)
      tail_max = std::max(tail_max, kernel_tail(kernel, E, y, refined));
    if (sup * tail_max <= target) return E;
  }
  throw ParamError("select_E: ladder exhausted (kernel decay insufficient)");
}

ParamReport validate_params(const EmbeddingParams& p) {
  ParamReport rep;
  auto add = [&rep](const std::string& name, bool pass, double margin) {
    rep.checks.push_back({name, pass, margin});
  };
  add("a_positive", p.a > 0.0, p.a);
  add("delta_positive", p.delta > 0.0, p.delta);
  {
    const double d = p.b - (p.a + p.delta / 2.0);
    add("b_equals_a_plus_half_delta", std::abs(d) <= 1e-15, -std::abs(d));
  }
  add("L_gt_4_over_delta", p.L > 4.0 / p.delta, p.L - 4.0 / p.delta);
  {
    const double r_cap = std::min(1.0 / 16.0, 1.0 / p.L);
    add("r1_in_range", p.r1 > 0.0 && p.r1 < r_cap,
        std::min(p.r1, r_cap - p.r1));
  }
  {
    const double cap = 9.0 / (16.0 * p.L);
    add("theta_L_positive", p.theta_L > 0.0, p.theta_L);
    add("theta_L_capped", p.theta_L <= cap + 1e-18, cap - p.theta_L);
  }
  add("E_positive", p.E > 0.0, p.E);
  add("K1_at_least_one", p.K1 >= 1.0, p.K1 - 1.0);
  add("c_gt_one", p.c > 1.0, p.c - 1.0);
  add("M_range", p.M >= 1 && p.M1 > p.M, (double)(p.M1 - p.M));
  {
    const double H_expect = (double)(p.M1 + 1) * (double)(p.M1 + 1);
    add("H_equals_M1p1_sq", p.H == H_expect, -(std::abs(p.H - H_expect)));
  }
  {
    const double m2_expect = (p.c - 1.0) * p.H * p.M / (p.H + 2.0);
    const double rel = std::abs(p.M2 - m2_expect) /
                       std::max(1e-300, std::abs(m2_expect));
    add("M2_formula", rel <= 1e-12, -rel);
  }
  const double m2_gap = p.M2 - (4.0 * p.L + p.E + 1.0);
  add("M2_scale_gate", m2_gap > 0.0, m2_gap);

  rep.pass = true;
  rep.analytic_pass = true;
  for (const auto& c : rep.checks) {
    rep.pass = rep.pass && c.pass;
    if (c.name != "M2_scale_gate")
      rep.analytic_pass = rep.analytic_pass && c.pass;
  }
  return rep;
}

EmbeddingParams make_params(double a, double delta, double L, int M, int M1,
                            double c, const SpectralKernel& kernel,
                            double r1_grid_step, double theta_grid_step) {
  if (!(a > 0.0) || !(delta > 0.0) || !(L > 4.0 / delta))
    throw ParamError("make_params: need a > 0, delta > 0, L > 4/delta");
  if (M < 1 || M1 <= M) throw ParamError("make_params: need 1 <= M < M1");
  if (!(c > 1.0)) throw ParamError("make_params: need c > 1");
  EmbeddingParams p;
  p.a = a;
  p.delta = delta;
  p.b = a + delta / 2.0;
  p.L = L;
  p.M = M;
  p.M1 = M1;
  p.c = c;
  p.H = (double)(M1 + 1) * (double)(M1 + 1);
  p.M2 = (c - 1.0) * p.H * M / (p.H + 2.0);
  p.r1 = select_r1(L, p.b, r1_grid_step);
  p.theta_L = theta_lower_bound(L, p.b, p.r1, theta_grid_step);
  p.E = select_E(L, p.b, p.theta_L, kernel);
  p.K1 = k1(kernel);
  return p;
}

}  // namespace flowembed
