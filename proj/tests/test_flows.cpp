#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "flowembed/common.hpp"
#include "flowembed/flows.hpp"
#include "flowembed/signals.hpp"

using namespace flowembed;

namespace {

std::string write_perm_file(const std::string& body) {
  std::string path = "/tmp/flowembed_test_perm_XXXXXX";
  // mkstemp-free deterministic name is fine here: contents overwrite
  path = "/tmp/flowembed_test_perm.json";
  std::ofstream out(path);
  out << body;
  return path;
}

// 24-periodic tone bundle per fiber: integer frequencies j/24 make the
// signals exactly periodic under phase shifts, so orbit wrap-around stays an
// exact symmetry
ToneRep periodic_rep(int fiber) {
  ToneRep rep;
  rep.real_kind = true;
  const int js[][4] = {{1, 5, 9, 14}, {2, 6, 11, 17}, {3, 7, 13, 19},
                       {4, 8, 15, 21}, {1, 10, 16, 20}};
  for (int t = 0; t < 4; ++t) {
    const int j = js[fiber % 5][t];
    rep.tones.push_back({(double)j / 24.0, 0.22, 0.4 * fiber + 0.15 * t});
  }
  return rep;
}

BandLimitedSignal fiber_signal(const CyclicProductBase& base, int id) {
  const auto rep = periodic_rep(base.fiber_of(id));
  const double phase = (double)base.phase_of(id);
  return make_signal(96.0, 0.25, -1.0, 1.0, true,
                     [&](double x) { return rep.eval(x + phase); });
}

double sup_diff_common(const BandLimitedSignal& f, const BandLimitedSignal& g) {
  REQUIRE(std::abs(f.dt - g.dt) < 1e-15);
  const BandLimitedSignal& small = f.T <= g.T ? f : g;
  const BandLimitedSignal& big = f.T <= g.T ? g : f;
  const long long off = (long long)std::llround((big.T - small.T) / big.dt);
  double sup = 0.0;
  for (std::size_t i = 0; i < small.size(); ++i)
    sup = std::max(sup,
                   std::abs(small.samples[i] - big.samples[(std::size_t)off + i]));
  return sup;
}

}  // namespace

TEST_CASE("factorial") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(1) == 1);
  CHECK(factorial(4) == 24);
  CHECK(factorial(6) == 720);
  CHECK(factorial(20) == 2432902008176640000LL);
  CHECK_THROWS_AS(factorial(21), ParamError);
  CHECK_THROWS_AS(factorial(-1), ParamError);
}

TEST_CASE("solenoid points: consistency and flow law") {
  auto p = solenoid_point(3, 2.0);
  REQUIRE(p.coords.size() == 3);
  CHECK(p.coords[2] == 2.0);
  CHECK(p.coords[1] == 0.0);  // 2 mod 2
  CHECK(p.coords[0] == 0.0);  // 2 mod 1
  CHECK(consistency_defect(p) < 1e-12);

  auto q = solenoid_flow(p, 0.0);
  for (int i = 0; i < 3; ++i) CHECK(q.coords[i] == p.coords[i]);

  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    auto x = solenoid_point(4, rng.uniform(0.0, 24.0));
    const double r = rng.uniform(-30.0, 30.0), s = rng.uniform(-30.0, 30.0);
    auto a = solenoid_flow(solenoid_flow(x, s), r);
    auto b = solenoid_flow(x, r + s);
    for (int j = 0; j < 4; ++j) {
      double d = std::abs(a.coords[j] - b.coords[j]);
      d = std::min(d, factorial(j + 1) - d);  // circle distance
      CHECK(d < 1e-12);
    }
    CHECK(consistency_defect(a) < 1e-12);
  }
}

TEST_CASE("in_section membership and nesting") {
  auto origin = solenoid_point(3, 0.0);
  for (int n = 1; n <= 3; ++n) CHECK(in_section(origin, n));

  auto p = solenoid_point(3, 2.0);
  CHECK(in_section(p, 1));
  CHECK(in_section(p, 2));
  CHECK(!in_section(p, 3));

  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    auto x = solenoid_point(4, rng.uniform(0.0, 24.0));
    for (int n = 4; n >= 2; --n)
      if (in_section(x, n)) CHECK(in_section(x, n - 1));
  }
  CHECK_THROWS_AS(in_section(p, 4), DomainError);
}

TEST_CASE("parse_system accepts the registered grammar") {
  auto sol = parse_system("solenoid:4");
  CHECK(sol.kind == FlowSystem::Kind::Solenoid);
  CHECK(sol.depth == 4);
  CHECK(sol.circle_len() == 24.0);

  auto prod = parse_system("product:4:5");
  CHECK(prod.kind == FlowSystem::Kind::ProductK);
  CHECK(prod.fiber_k == 5);

  auto band = parse_system("band:3");
  CHECK(band.kind == FlowSystem::Kind::Band);
  CHECK(band.circle_len() == 6.0);

  auto path = write_perm_file("{\"perm\": [1, 2, 0]}");
  auto susp = parse_system("suspension:" + path);
  CHECK(susp.kind == FlowSystem::Kind::SuspensionPerm);
  REQUIRE(susp.perm.size() == 3);
  CHECK(susp.circle_len() == 3.0);

  CHECK_THROWS_AS(parse_system("torus:2"), ParamError);
  CHECK_THROWS_AS(parse_system("solenoid:40"), ParamError);
  CHECK_THROWS_AS(parse_system("product:4"), ParamError);
  CHECK_THROWS_AS(parse_system("suspension:/nonexistent.json"), ParamError);
  auto bad = write_perm_file("{\"perm\": [0, 0, 1]}");
  CHECK_THROWS_AS(parse_system("suspension:" + bad), ParamError);
}

TEST_CASE("first return: closed form, orbit lengths, bisection oracle") {
  auto sys = parse_system("solenoid:3");
  CrossSectionData s2;
  s2.n = 2;
  FlowPoint p{0.0, 0, 0.0};
  auto ret = first_return(sys, s2, p);
  CHECK(ret.time == 2.0);  // exactly n!

  // orbit length on S_2 inside depth 3: 3!/2! = 3 returns close the cycle
  FlowPoint q = p;
  for (int i = 0; i < 3; ++i) q = first_return(sys, s2, q).point;
  CHECK(flow_point_dist(sys, q, p) < 1e-12);

  CrossSectionData s1;
  s1.n = 1;
  CHECK(first_return(sys, s1, p).time == 1.0);
  CrossSectionData s3;
  s3.n = 3;
  CHECK(first_return(sys, s3, p).time == 6.0);
  q = p;
  for (int i = 0; i < 1; ++i) q = first_return(sys, s3, q).point;
  CHECK(flow_point_dist(sys, q, p) < 1e-12);

  auto bis = first_return_bisection(sys, s2, p, 10.0);
  CHECK(std::abs(bis.time - 2.0) < 1e-8);
  CHECK_THROWS_AS(first_return_bisection(sys, s2, p, 1.0), DomainError);

  FlowPoint off{0.7, 0, 0.0};
  CHECK_THROWS_AS(first_return(sys, s2, off), DomainError);
}

TEST_CASE("suspension flow arithmetic and inversion") {
  std::vector<int> perm = {1, 2, 0};
  auto roof = [](int) { return 1.0; };
  auto fwd = [&](int b) { return perm[(std::size_t)b]; };
  auto inv = [&](int b) {
    for (int i = 0; i < 3; ++i)
      if (perm[(std::size_t)i] == b) return i;
    return -1;
  };

  auto a = suspension_flow({0, 0.0}, 1.0, roof, fwd);
  CHECK(a.base == 1);
  CHECK(a.height == doctest::Approx(0.0).epsilon(1e-12));

  auto b = suspension_flow({0, 0.8}, 0.4, roof, fwd);
  CHECK(b.base == 1);
  CHECK(b.height == doctest::Approx(0.2).epsilon(1e-12));

  auto c = suspension_flow({0, 0.0}, -0.3, roof, fwd, inv);
  CHECK(c.base == 2);  // inv(0) = 2
  CHECK(c.height == doctest::Approx(0.7).epsilon(1e-12));

  CHECK_THROWS_AS(suspension_flow({0, 0.0}, -0.3, roof, fwd), ParamError);
  CHECK_THROWS_AS(
      suspension_flow({0, 0.0}, 1.0, [](int) { return -1.0; }, fwd),
      ParamError);

  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    SuspensionPoint sp{(int)rng.int_in(0, 2), rng.uniform(0.0, 1.0)};
    const double t = rng.uniform(0.0, 7.0), s = rng.uniform(0.0, 7.0);
    auto two = suspension_flow(suspension_flow(sp, s, roof, fwd), t, roof, fwd);
    auto one = suspension_flow(sp, t + s, roof, fwd);
    CHECK(two.base == one.base);
    CHECK(std::abs(two.height - one.height) < 1e-12);
  }
}

TEST_CASE("conjugacy roundtrips across the registered systems") {
  CrossSectionData s2;
  s2.n = 2;
  for (const char* spec : {"solenoid:4", "product:4:5"}) {
    auto sys = parse_system(spec);
    auto rep = conjugacy_roundtrip(sys, s2, 100, 17);
    CHECK(rep.pass);
    CHECK(rep.max_roundtrip < 1e-9);
    CHECK(rep.max_equivariance < 1e-9);
  }
  auto path = write_perm_file("{\"perm\": [1, 2, 0]}");
  auto susp = parse_system("suspension:" + path);
  CrossSectionData base_sec;
  auto rep = conjugacy_roundtrip(susp, base_sec, 60, 17);
  CHECK(rep.pass);
}

TEST_CASE("flow boundary probes: healthy sections pass, clipped fails") {
  CrossSectionData s;
  for (int n = 1; n <= 4; ++n) {
    s.n = n;
    auto rep = flow_boundary_probe(parse_system("solenoid:4"), s, 0.25, 64, 3);
    CHECK(rep.all_pass);
    CHECK(rep.fraction == 1.0);
  }

  auto band = parse_system("band:4");
  CrossSectionData full;
  full.n = 2;
  CHECK(flow_boundary_probe(band, full, 0.25, 64, 3).all_pass);

  CrossSectionData clipped;
  clipped.n = 2;
  clipped.fiber_lo = 0.0;
  clipped.fiber_hi = 0.5;  // genuine flow boundary along the clip edge
  auto rep = flow_boundary_probe(band, clipped, 0.25, 64, 3);
  CHECK(!rep.all_pass);
  CHECK(rep.fraction < 1.0);
  CHECK(!rep.failures.empty());

  CrossSectionData s2;
  s2.n = 2;
  CHECK_THROWS_AS(
      flow_boundary_probe(parse_system("solenoid:4"), s2, 2.0, 8, 3),
      ParamError);
}

TEST_CASE("cyclic product base bookkeeping") {
  CyclicProductBase base;
  CHECK(base.n_states() == 120);
  CHECK(base.state(3, 2) == 51);
  CHECK(base.phase_of(51) == 3);
  CHECK(base.fiber_of(51) == 2);
  CHECK(base.step(base.state(23, 0)) == base.state(0, 0));
  CHECK(base.step(base.state(3, 1), -5) == base.state(22, 1));
  CHECK(base.same_orbit(base.state(0, 0), base.state(12, 0)));
  CHECK(!base.same_orbit(base.state(0, 0), base.state(0, 1)));
  CHECK(base.shift_between(base.state(23, 0), base.state(0, 0)) == 1);
  CHECK(base.shift_between(base.state(0, 0), base.state(12, 0)) == -12);
  CHECK(base.shift_between(base.state(4, 2), base.state(9, 2)) == 5);
  CHECK_THROWS_AS(base.state(24, 0), ParamError);
  CHECK_THROWS_AS(base.shift_between(0, base.state(0, 1)), ParamError);
}

TEST_CASE("suspend_embedding: translation action on fibers") {
  CyclicProductBase base;
  auto h = [&](int id) { return fiber_signal(base, id); };

  SuspensionPoint sp{base.state(5, 1), 0.0};
  auto at0 = suspend_embedding(h, sp);
  CHECK(sup_diff_common(at0, h(sp.base)) == 0.0);

  SuspensionPoint up{base.state(5, 1), 0.3};
  auto lifted = suspend_embedding(h, up);
  const auto rep = periodic_rep(1);
  double worst = 0.0;
  for (std::size_t i = 0; i < lifted.size(); ++i)
    worst = std::max(worst,
                     std::abs(lifted.samples[i] - rep.eval(lifted.x_of(i) + 5.3)));
  CHECK(worst < 1e-8);

  // two-path comparison: flow then embed vs embed then translate
  std::vector<int> perm(120);
  for (int id = 0; id < 120; ++id) perm[(std::size_t)id] = base.step(id);
  auto fwd = [&](int b) { return perm[(std::size_t)b]; };
  auto roof = [](int) { return 1.0; };
  SuspensionPoint mid{base.state(7, 3), 0.5};
  auto flowed = suspension_flow(mid, 0.5, roof, fwd);
  auto path1 = suspend_embedding(h, flowed);
  auto path2 = translate(suspend_embedding(h, mid), 0.5);
  CHECK(sup_diff_common(path1, path2) < 1e-6);

  CHECK_THROWS_AS(suspend_embedding(h, sp, 2.0), ParamError);
  SuspensionPoint tall{base.state(0, 0), 1.2};
  CHECK_THROWS_AS(suspend_embedding(h, tall), DomainError);

  // injectivity scan over distinct suspension points
  std::vector<BandLimitedSignal> sigs;
  for (int fiber : {0, 1, 2})
    for (double ht : {0.0, 0.25}) {
      SuspensionPoint q{base.state(2 * fiber + 1, fiber), ht};
      sigs.push_back(crop_signal(suspend_embedding(h, q), 40.0));
    }
  double min_d = 1e9;
  for (std::size_t i = 0; i < sigs.size(); ++i)
    for (std::size_t j = i + 1; j < sigs.size(); ++j)
      min_d = std::min(min_d, metric_d(sigs[i], sigs[j], 10).value);
  CHECK(min_d > 0.0);
}

TEST_CASE("strong embedding probe flags only true shifts") {
  CyclicProductBase base;
  auto h = [&](int id) { return fiber_signal(base, id); };
  std::vector<std::pair<int, int>> pairs = {
      {base.state(10, 0), base.state(10, 0)},  // identity: flag at 0
      {base.state(10, 1), base.state(12, 1)},  // shift 2
      {base.state(9, 2), base.state(6, 2)},    // shift -3
      {base.state(23, 3), base.state(1, 3)},   // wrap shift +2
      {base.state(3, 0), base.state(3, 1)},    // different orbits: no flags
      {base.state(0, 4), base.state(12, 4)},   // shift -12, beyond r_max
  };
  auto rep = strong_embedding_probe(h, base, pairs, 0.05, 6.0, 1e-3);
  CHECK(rep.pass);
  REQUIRE(rep.pairs.size() == 6);
  CHECK(rep.pairs[0].ok);
  CHECK(!rep.pairs[0].flags.empty());
  CHECK(rep.pairs[1].true_shift == 2);
  CHECK(rep.pairs[2].true_shift == -3);
  CHECK(rep.pairs[3].true_shift == 2);
  CHECK(rep.pairs[4].flags.empty());
  CHECK(!rep.pairs[4].on_orbit);
  CHECK(rep.pairs[5].flags.empty());  // true shift invisible at this r_max
  for (const auto& pr : rep.pairs) {
    CHECK(pr.ok);
    for (const auto& fl : pr.flags)
      CHECK(std::abs(fl.r - std::round(fl.r)) < 0.05 / 2.0 + 1e-12);
  }
  CHECK(rep.pairs[1].min_unflagged > 1e-3);
}
