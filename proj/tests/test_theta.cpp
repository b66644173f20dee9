#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "flowembed/common.hpp"
#include "flowembed/kernel.hpp"
#include "flowembed/quadrature.hpp"
#include "flowembed/theta.hpp"

using namespace flowembed;

namespace {

// Desk constants (L=10, b=2.4) shared across cases; computed once.
struct DeskTheta {
  double r1, theta_L;
  SpectralKernel kernel;
  DeskTheta()
      : r1(select_r1(10.0, 2.4)),
        theta_L(theta_lower_bound(10.0, 2.4, r1)),
        kernel(make_chi1(0.8)) {}
};

const DeskTheta& desk() {
  static DeskTheta d;
  return d;
}

const ParamCheck& find_check(const ParamReport& rep, const std::string& name) {
  for (const auto& c : rep.checks)
    if (c.name == name) return c;
  REQUIRE(false);
  return rep.checks.front();
}

}  // namespace

TEST_CASE("theta: closed form and modulus identity") {
  const double L = 10.0, b = 2.4;
  for (int k = -3; k <= 3; ++k)
    CHECK(std::abs(theta(cplx(L * k, 0.0), L, b)) < 1e-13);
  CHECK(std::abs(theta(cplx(L / 2.0, 0.0), L, b)) ==
        doctest::Approx(1.0).epsilon(1e-14));

  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const cplx z(rng.uniform(-20.0, 20.0), rng.uniform(-1.0, 1.0));
    const double direct = std::abs(theta(z, L, b));
    const double closed = theta_abs(z, L, b);
    CHECK(std::abs(direct - closed) <= 1e-12 * (1.0 + closed));
    // L-periodicity of the modulus
    CHECK(std::abs(theta_abs(z + cplx(L, 0.0), L, b) - closed) <=
          1e-12 * (1.0 + closed));
  }
}

TEST_CASE("theta_sup_norm matches a dense strip scan") {
  const double L = 10.0, b = 2.4;
  const double sup = theta_sup_norm(L, b);
  // the sup sits at y = -1; scan that edge densely
  double grid_max = 0.0;
  for (double x = 0.0; x <= L; x += 1e-3)
    grid_max = std::max(grid_max, theta_abs(cplx(x, -1.0), L, b));
  CHECK(grid_max <= sup * (1.0 + 1e-12));
  CHECK(grid_max >= sup * (1.0 - 1e-6));
  // interior rows stay below
  for (double y : {-0.5, 0.0, 0.7, 1.0})
    CHECK(theta_abs(cplx(L / 2.0, y), L, b) < sup);
}

TEST_CASE("select_r1: desk regression and finer-grid oracle") {
  const double r1 = desk().r1;
  CHECK(r1 == 0.00390625);  // 1/256, deterministic ladder
  CHECK(r1 < std::min(1.0 / 16.0, 1.0 / 10.0));
  CHECK(r1_inequality_on_grid(10.0, 2.4, r1, 1e-6));  // 10x finer, no margin

  // z = 0 always passes: left side pi/L > 3/L
  CHECK(kPi * std::abs(2.4 * std::sin(cplx(0.0)) + std::cos(cplx(0.0)) / 10.0) >
        3.0 / 10.0);

  // r1 <= 1/L for larger L (coarser grid keeps this case quick)
  const double r1_20 = select_r1(20.0, 2.4, 1e-4);
  CHECK(r1_20 > 0.0);
  CHECK(r1_20 <= 1.0 / 20.0);
  CHECK_THROWS_AS(select_r1(0.5, 2.4), ParamError);
}

TEST_CASE("theta_lower_bound: certification against brute force") {
  const double L = 10.0, b = 2.4, r1 = desk().r1;
  const double tl = desk().theta_L;
  CHECK(tl > 0.0);
  CHECK(tl <= 9.0 / (16.0 * L));

  // dense off-disk scan of the fundamental domain [0,L] x [-1,1]
  double brute = std::numeric_limits<double>::infinity();
  for (double y = -1.0; y <= 1.0 + 1e-12; y += 2e-3)
    for (double x = 0.0; x <= L + 1e-12; x += 2e-3) {
      if (std::hypot(x, y) <= r1 || std::hypot(x - L, y) <= r1) continue;
      brute = std::min(brute, theta_abs(cplx(x, y), L, b));
    }
  CHECK(tl <= brute);        // certified bound never exceeds the sampled inf
  CHECK(tl >= 0.9 * brute);  // and is not grossly slack

  // the bound holds on the excluded-disk boundary itself
  for (int i = 0; i < 512; ++i) {
    const double phi = 2.0 * kPi * i / 512.0;
    const cplx z(r1 * std::cos(phi), r1 * std::sin(phi));
    CHECK(theta_abs(z, L, b) >= tl);
  }

  // refinement stability
  const double tl_fine = theta_lower_bound(L, b, r1, 1.25e-4);
  CHECK(std::abs(tl_fine - tl) <= 0.05 * tl);

  CHECK_THROWS_AS(theta_lower_bound(L, b, 0.2, 5e-4), ParamError);  // r1 range
  // a hopelessly coarse grid cannot certify positivity
  CHECK_THROWS_AS(theta_lower_bound(L, b, r1, 0.9), ParamError);
}

TEST_CASE("select_E: desk value, minimality, monotonicity") {
  const auto& d = desk();
  const double E = select_E(10.0, 2.4, d.theta_L, d.kernel);
  CHECK(E == 512.0);

  const double sup = theta_sup_norm(10.0, 2.4);
  // E = 256 violates the inequality, so 512 is ladder-minimal
  CHECK(sup * kernel_tail(d.kernel, 256.0, 1.0) > 0.45 * d.theta_L);
  CHECK(sup * kernel_tail(d.kernel, 512.0, 1.0) <= 0.45 * d.theta_L);
  // refined-tabulation oracle agrees
  CHECK(select_E(10.0, 2.4, d.theta_L, d.kernel, true) == 512.0);

  // doubling theta_L cannot increase E
  CHECK(select_E(10.0, 2.4, 2.0 * d.theta_L, d.kernel) <= E);
  CHECK_THROWS_AS(select_E(10.0, 2.4, 0.0, d.kernel), ParamError);
}

TEST_CASE("kernel: K1 constant and refinement agreement") {
  const auto& k = desk().kernel;
  CHECK(k.half_width == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(std::abs(k1(k) - 1.228626) < 1e-5);
  CHECK(k1(k) >= 1.0);
  CHECK(std::abs(k1(k) - k1_refined(k)) < 1e-9);
  auto det = k1_detailed(k);
  CHECK(det.value == k1(k));
  CHECK(det.err_bound < 1e-8);
  // K1 is delta-independent (profile-unit rescaling)
  CHECK(std::abs(k1(make_chi1(0.4)) - k1(k)) < 1e-12);
  CHECK_THROWS_AS(make_chi1(-1.0), ParamError);
}

TEST_CASE("kernel: frequency profile") {
  const auto& k = desk().kernel;
  CHECK(chi1_profile(k, 0.0) == 1.0);
  CHECK(chi1_profile(k, 0.1) == 0.0);
  CHECK(chi1_profile(k, 0.2) == 0.0);
  CHECK(chi1_profile(k, 0.05) == chi1_profile(k, -0.05));
  CHECK(chi1_profile(k, 0.05) > 0.0);
  CHECK(chi1_profile(k, 0.05) < 1.0);
}

TEST_CASE("kernel: unit integral via independent quadrature") {
  const auto& k = desk().kernel;
  const double I =
      adaptive_gl([&](double x) { return eval_chi1(k, x); }, -100.0, 100.0,
                  1e-8);
  CHECK(std::abs(I - 1.0) <= kernel_tail(k, 100.0, 0.0) + 1e-6);
}

TEST_CASE("kernel: evenness and complex evaluation oracle") {
  const auto& k = desk().kernel;
  for (double x : {0.3, 1.7, 8.0, 33.0})
    CHECK(std::abs(eval_chi1(k, x) - eval_chi1(k, -x)) <=
          1e-15 * (1.0 + std::abs(eval_chi1(k, x))));

  const double s = k.half_width;
  Rng rng(123);
  for (int i = 0; i < 10; ++i) {
    const cplx z(rng.uniform(-30.0, 30.0), rng.uniform(-1.0, 1.0));
    const cplx direct = adaptive_gl(
        [&](double xi) {
          return chi1_profile(k, xi) *
                 std::exp(cplx(0.0, 2.0 * kPi * xi) * z);
        },
        -s, s, 1e-12);
    // the kernel evaluator works to its quadrature tolerance (1e-9), which
    // |CG| growth e^{2 pi h |Im z|} amplifies slightly off the real line
    CHECK(std::abs(eval_chi1_c(k, z) - direct) < 1e-8);
  }
  // real line agrees with the real evaluator
  for (double x : {0.0, 2.5, -11.0})
    CHECK(std::abs(eval_chi1_c(k, cplx(x, 0.0)).real() - eval_chi1(k, x)) <
          1e-12);
  CHECK_THROWS_AS(eval_chi1_c(k, cplx(0.0, 1.5)), DomainError);
}

TEST_CASE("kernel_tail: monotone in E and |y|, refined oracle") {
  const auto& k = desk().kernel;
  CHECK(kernel_tail(k, 257.0, 0.0) < kernel_tail(k, 256.0, 0.0));
  CHECK(kernel_tail(k, 513.0, 1.0) < kernel_tail(k, 512.0, 1.0));
  CHECK(kernel_tail(k, 512.0, 1.0) > kernel_tail(k, 512.0, 0.5));
  CHECK(kernel_tail(k, 512.0, 0.5) > kernel_tail(k, 512.0, 0.0));
  const double t = kernel_tail(k, 512.0, 1.0);
  const double tr = kernel_tail(k, 512.0, 1.0, true);
  CHECK(t > 0.0);
  CHECK(std::abs(t - tr) <= 0.05 * t);
}

TEST_CASE("make_params: determinism and validation") {
  const auto& k = desk().kernel;
  // coarse grids keep this case quick; determinism must hold regardless
  auto p1 = make_params(2.0, 0.8, 10.0, 10, 25, 1.02, k, 1e-4, 2e-3);
  auto p2 = make_params(2.0, 0.8, 10.0, 10, 25, 1.02, k, 1e-4, 2e-3);
  CHECK(p1.r1 == p2.r1);
  CHECK(p1.theta_L == p2.theta_L);
  CHECK(p1.E == p2.E);
  CHECK(p1.K1 == p2.K1);
  CHECK(p1.M2 == p2.M2);
  CHECK(p1.b == 2.4);
  CHECK(p1.H == 676.0);

  auto rep = validate_params(p1);
  CHECK(rep.analytic_pass);
  CHECK(!rep.pass);  // desk-scale M2 cannot clear 4L+E+1
  CHECK(find_check(rep, "M2_scale_gate").margin < 0.0);
  CHECK(find_check(rep, "M2_formula").pass);
  CHECK(find_check(rep, "H_equals_M1p1_sq").pass);

  // boundary cases fail strictly
  auto q = p1;
  q.M2 = 4.0 * q.L + q.E + 1.0;
  auto rq = validate_params(q);
  CHECK(!find_check(rq, "M2_scale_gate").pass);
  CHECK(!find_check(rq, "M2_formula").pass);

  auto qb = p1;
  qb.b = 2.5;
  CHECK(!find_check(validate_params(qb), "b_equals_a_plus_half_delta").pass);

  auto ql = p1;
  ql.L = 4.0 / ql.delta;  // exactly the excluded boundary
  CHECK(!find_check(validate_params(ql), "L_gt_4_over_delta").pass);

  // scaled record passes the scale gate too
  auto big = p1;
  big.M = 30000;
  big.M1 = 75000;
  big.H = 75001.0 * 75001.0;
  big.M2 = (big.c - 1.0) * big.H * big.M / (big.H + 2.0);
  auto rb = validate_params(big);
  CHECK(rb.pass);
  CHECK(find_check(rb, "M2_scale_gate").margin > 0.0);

  CHECK_THROWS_AS(make_params(2.0, 0.8, 5.0, 10, 25, 1.02, k), ParamError);
  CHECK_THROWS_AS(make_params(2.0, 0.8, 10.0, 25, 10, 1.02, k), ParamError);
  CHECK_THROWS_AS(make_params(2.0, 0.8, 10.0, 10, 25, 1.0, k), ParamError);
}

TEST_CASE("theta winding number around a lattice zero is one") {
  const double L = 10.0, b = 2.4, r = desk().r1;
  for (double center : {0.0, 10.0, -20.0}) {
    double acc = 0.0;
    const int n = 1024;
    cplx prev = theta(cplx(center + r, 0.0), L, b);
    for (int i = 1; i <= n; ++i) {
      const double phi = 2.0 * kPi * i / n;
      const cplx z(center + r * std::cos(phi), r * std::sin(phi));
      const cplx cur = theta(z, L, b);
      acc += std::arg(cur / prev);
      prev = cur;
    }
    CHECK(std::llround(acc / (2.0 * kPi)) == 1);
  }
}
