#pragma once
// Desk-scale topological flows: the depth-N truncated solenoid (the inverse
// limit of circles R/n!Z kept as redundant coordinates), its discrete
// cross-sections S_n, first-return analysis, suspension flows over finite
// bases, conjugacy roundtrips, flow-boundary probes, and the suspension
// embedding built from translated band-limited signals.
//
// Registered ambient systems:
//   solenoid:N      depth-N truncated solenoid (circle R/N!Z with coords)
//   product:N:k     solenoid x k-point discrete fiber, trivial fiber action
//   band:N          solenoid x [0,1] interval fiber, trivial fiber action
//                   (test fixture: clipping its section fiber range creates a
//                   genuine nonempty flow boundary)
//   suspension:file suspension of a finite permutation under roof 1

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flowembed/common.hpp"
#include "flowembed/signals.hpp"

namespace flowembed {

long long factorial(int n);

struct TruncatedSolenoidPoint {
  int depth = 4;
  std::vector<double> coords;  // x_1..x_depth, x_n in [0, n!)
};

// lift of the residual-circle position x_N (coords follow by mod reduction)
TruncatedSolenoidPoint solenoid_point(int depth, double x_last);

// max circle-distance violation of x_{n+1} mod n! = x_n
double consistency_defect(const TruncatedSolenoidPoint& p);

TruncatedSolenoidPoint solenoid_flow(const TruncatedSolenoidPoint& p,
                                     double r);

// x_n within tol of 0 mod n!; throws DomainError for n > depth
bool in_section(const TruncatedSolenoidPoint& p, int n, double tol = 1e-9);

struct FlowSystem {
  enum class Kind { Solenoid, ProductK, Band, SuspensionPerm };
  Kind kind = Kind::Solenoid;
  int depth = 4;          // solenoid-based kinds
  int fiber_k = 1;        // ProductK
  std::vector<int> perm;  // SuspensionPerm: base permutation, roof 1
  double circle_len() const;  // N! (or n_states for SuspensionPerm)
  std::string id() const;
};

// "solenoid:4", "product:4:5", "band:4", "suspension:<path>" (JSON file with
// {"perm": [...]})
FlowSystem parse_system(const std::string& spec);

// ambient point: y = circle position; k = discrete fiber / permutation base
// index; v = interval fiber (Band) or suspension height (SuspensionPerm)
struct FlowPoint {
  double y = 0.0;
  int k = 0;
  double v = 0.0;
};

FlowPoint flow_apply(const FlowSystem& sys, const FlowPoint& p, double t);
double flow_point_dist(const FlowSystem& sys, const FlowPoint& a,
                       const FlowPoint& b);

struct CrossSectionData {
  int n = 1;               // S_n for solenoid kinds; ignored for SuspensionPerm
  double fiber_lo = 0.0;   // Band only: section fiber range (clip to < 1
  double fiber_hi = 1.0;   //   to build the boundary counterexample)
  double eta = 0.0;        // injectivity time (0 = derive canonically)
  double xi = 0.0;         // surjectivity time (informational)
  std::string id() const;
};

// canonical injectivity time: n!/2 for S_n, 1/2 for suspension bases
double section_eta(const FlowSystem& sys, const CrossSectionData& s);

bool on_section(const FlowSystem& sys, const CrossSectionData& s,
                const FlowPoint& p, double tol = 1e-9);

struct ReturnResult {
  double time = 0.0;
  FlowPoint point;
};

// closed-form first return (n! for S_n, roof 1 for suspension bases)
ReturnResult first_return(const FlowSystem& sys, const CrossSectionData& s,
                          const FlowPoint& p);

// generic detection: coarse scan for the section-coordinate wrap, then
// bisection to 1e-10; throws DomainError if no return before t_max
ReturnResult first_return_bisection(const FlowSystem& sys,
                                    const CrossSectionData& s,
                                    const FlowPoint& p, double t_max);

struct SuspensionPoint {
  int base = 0;
  double height = 0.0;  // in [0, roof(base))
};

SuspensionPoint suspension_flow(
    const SuspensionPoint& sp, double t,
    const std::function<double(int)>& roof,
    const std::function<int(int)>& base_map,
    const std::function<int(int)>& base_inv = nullptr);

struct BoundaryReport {
  int probes = 0;
  int passed = 0;
  double fraction = 0.0;
  bool all_pass = false;
  std::vector<std::string> failures;  // descriptors of failing probes
};

BoundaryReport flow_boundary_probe(const FlowSystem& sys,
                                   const CrossSectionData& s, double gamma,
                                   int probes, std::uint64_t seed);

struct RoundtripReport {
  int samples = 0;
  double max_roundtrip = 0.0;     // |ambient -> suspension -> ambient|
  double max_equivariance = 0.0;  // two-path time-t comparison
  bool pass = false;
};

RoundtripReport conjugacy_roundtrip(const FlowSystem& sys,
                                    const CrossSectionData& s, int n_samples,
                                    std::uint64_t seed);

// h_f(base, t) = translate(h(base), t); roof must be constant 1
BandLimitedSignal suspend_embedding(
    const std::function<BandLimitedSignal(int)>& h, const SuspensionPoint& sp,
    double roof = 1.0);

// the acceptance base: a period-`period` cycle crossed with a static
// `fibers`-symbol alphabet; state id = fiber * period + phase
struct CyclicProductBase {
  int period = 24;
  int fibers = 5;
  int n_states() const { return period * fibers; }
  int state(int phase, int fiber) const;
  int phase_of(int id) const { return id % period; }
  int fiber_of(int id) const { return id / period; }
  int step(int id, long long m = 1) const;  // T^m
  bool same_orbit(int a, int b) const { return fiber_of(a) == fiber_of(b); }
  // representative shift in [-period/2, period/2); only valid on same orbit
  int shift_between(int a, int b) const;
};

struct ProbeFlag {
  double r = 0.0;
  double dist = 0.0;
};

struct StrongPairResult {
  int state_a = 0, state_b = 0;
  bool on_orbit = false;
  int true_shift = 0;  // valid when on_orbit and |shift| <= R
  std::vector<ProbeFlag> flags;
  double min_unflagged = 0.0;  // smallest distance outside flags
  bool ok = false;             // flags exactly at the true integer shift
};

struct StrongEmbedReport {
  std::vector<StrongPairResult> pairs;
  double r_max = 0.0, r_step = 0.0, threshold = 0.0;
  bool pass = false;
};

// scans r in [-R, R] (step r_step) for sup-norm coincidences of
// translate(h(a), r) with h(b) below `threshold`; verifies flags appear
// exactly at the bookkept integer shifts
StrongEmbedReport strong_embedding_probe(
    const std::function<BandLimitedSignal(int)>& h,
    const CyclicProductBase& base,
    const std::vector<std::pair<int, int>>& sample_pairs, double r_step,
    double r_max, double threshold);

}  // namespace flowembed
