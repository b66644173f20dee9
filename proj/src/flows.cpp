#include "flowembed/flows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace flowembed {

namespace {

double wrap(double x, double len) {
  double r = std::fmod(x, len);
  if (r < 0.0) r += len;
  if (r >= len) r -= len;
  return r;
}

double circ_dist(double a, double b, double len) {
  const double d = wrap(a - b, len);
  return std::min(d, len - d);
}

// distance of x to the lattice step*Z on the circle of length len
double lattice_dist(double x, double step, double len) {
  (void)len;
  const double d = wrap(x, step);
  return std::min(d, step - d);
}

int perm_apply(const std::vector<int>& perm, int b, long long m) {
  const int n = (int)perm.size();
  if (n == 0) throw ParamError("suspension system has empty base");
  std::vector<int> inv;
  if (m < 0) {
    inv.assign((size_t)n, 0);
    for (int i = 0; i < n; ++i) inv[(size_t)perm[(size_t)i]] = i;
  }
  long long steps = std::llabs(m);
  if (steps > 1000000) throw ParamError("suspension flow: |t| too large");
  int cur = b;
  for (long long i = 0; i < steps; ++i)
    cur = (m >= 0) ? perm[(size_t)cur] : inv[(size_t)cur];
  return cur;
}

}  // namespace

long long factorial(int n) {
  if (n < 0 || n > 20) throw ParamError("factorial: n out of range");
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

TruncatedSolenoidPoint solenoid_point(int depth, double x_last) {
  if (depth < 1 || depth > 12) throw ParamError("solenoid_point: bad depth");
  TruncatedSolenoidPoint p;
  p.depth = depth;
  p.coords.resize((size_t)depth);
  const double xN = wrap(x_last, (double)factorial(depth));
  for (int n = 1; n <= depth; ++n)
    p.coords[(size_t)(n - 1)] = wrap(xN, (double)factorial(n));
  return p;
}

double consistency_defect(const TruncatedSolenoidPoint& p) {
  double worst = 0.0;
  for (int n = 1; n < p.depth; ++n) {
    const double len = (double)factorial(n);
    const double reduced = wrap(p.coords[(size_t)n], len);
    worst = std::max(worst, circ_dist(reduced, p.coords[(size_t)(n - 1)], len));
  }
  return worst;
}

TruncatedSolenoidPoint solenoid_flow(const TruncatedSolenoidPoint& p,
                                     double r) {
  TruncatedSolenoidPoint q = p;
  for (int n = 1; n <= p.depth; ++n)
    q.coords[(size_t)(n - 1)] =
        wrap(p.coords[(size_t)(n - 1)] + r, (double)factorial(n));
  return q;
}

bool in_section(const TruncatedSolenoidPoint& p, int n, double tol) {
  if (n > p.depth || n < 1) throw DomainError("in_section: depth error");
  const double len = (double)factorial(n);
  const double x = p.coords[(size_t)(n - 1)];
  return std::min(x, len - x) <= tol;
}

double FlowSystem::circle_len() const {
  if (kind == Kind::SuspensionPerm) return (double)perm.size();
  return (double)factorial(depth);
}

std::string FlowSystem::id() const {
  switch (kind) {
    case Kind::Solenoid:
      return "solenoid:" + std::to_string(depth);
    case Kind::ProductK:
      return "product:" + std::to_string(depth) + ":" +
             std::to_string(fiber_k);
    case Kind::Band:
      return "band:" + std::to_string(depth);
    case Kind::SuspensionPerm:
      return "suspension[" + std::to_string(perm.size()) + "]";
  }
  return "?";
}

FlowSystem parse_system(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  FlowSystem sys;
  auto parse_depth = [&](const std::string& s) {
    const int d = std::atoi(s.c_str());
    if (d < 1 || d > 8) throw ParamError("system depth out of range: " + s);
    return d;
  };
  if (head == "solenoid") {
    sys.kind = FlowSystem::Kind::Solenoid;
    sys.depth = parse_depth(rest);
  } else if (head == "product") {
    sys.kind = FlowSystem::Kind::ProductK;
    const auto c2 = rest.find(':');
    if (c2 == std::string::npos)
      throw ParamError("product system needs depth and fiber size");
    sys.depth = parse_depth(rest.substr(0, c2));
    sys.fiber_k = std::atoi(rest.substr(c2 + 1).c_str());
    if (sys.fiber_k < 1 || sys.fiber_k > 1000)
      throw ParamError("product fiber size out of range");
  } else if (head == "band") {
    sys.kind = FlowSystem::Kind::Band;
    sys.depth = parse_depth(rest);
  } else if (head == "suspension") {
    sys.kind = FlowSystem::Kind::SuspensionPerm;
    std::ifstream in(rest);
    if (!in) throw ParamError("cannot open suspension file: " + rest);
    nlohmann::json j;
    in >> j;
    if (!j.contains("perm") || !j["perm"].is_array())
      throw ParamError("suspension file needs a \"perm\" array");
    sys.perm = j["perm"].get<std::vector<int>>();
    const int n = (int)sys.perm.size();
    std::vector<bool> seen((size_t)n, false);
    for (int v : sys.perm) {
      if (v < 0 || v >= n || seen[(size_t)v])
        throw ParamError("suspension \"perm\" is not a permutation");
      seen[(size_t)v] = true;
    }
    if (n == 0) throw ParamError("suspension \"perm\" is empty");
  } else {
    throw ParamError("unknown system: " + spec);
  }
  return sys;
}

FlowPoint flow_apply(const FlowSystem& sys, const FlowPoint& p, double t) {
  FlowPoint q = p;
  if (sys.kind == FlowSystem::Kind::SuspensionPerm) {
    const double total = p.v + t;
    const double m = std::floor(total);
    q.k = perm_apply(sys.perm, p.k, (long long)m);
    q.v = total - m;
    if (q.v >= 1.0) {  // fp edge: total just below an integer
      q.v = 0.0;
      q.k = perm_apply(sys.perm, q.k, 1);
    }
    return q;
  }
  q.y = wrap(p.y + t, sys.circle_len());
  return q;
}

double flow_point_dist(const FlowSystem& sys, const FlowPoint& a,
                       const FlowPoint& b) {
  if (sys.kind == FlowSystem::Kind::SuspensionPerm) {
    if (a.k != b.k) return 1.0 + std::abs(a.v - b.v);
    return std::min(std::abs(a.v - b.v), 1.0 - std::abs(a.v - b.v));
  }
  double d = circ_dist(a.y, b.y, sys.circle_len());
  if (sys.kind == FlowSystem::Kind::ProductK && a.k != b.k) d += 1.0;
  if (sys.kind == FlowSystem::Kind::Band) d += std::abs(a.v - b.v);
  return d;
}

std::string CrossSectionData::id() const {
  std::ostringstream os;
  os << "S" << n;
  if (fiber_lo != 0.0 || fiber_hi != 1.0)
    os << "[" << fiber_lo << "," << fiber_hi << "]";
  return os.str();
}

double section_eta(const FlowSystem& sys, const CrossSectionData& s) {
  if (s.eta > 0.0) return s.eta;
  if (sys.kind == FlowSystem::Kind::SuspensionPerm) return 0.5;
  return 0.5 * (double)factorial(s.n);
}

bool on_section(const FlowSystem& sys, const CrossSectionData& s,
                const FlowPoint& p, double tol) {
  if (sys.kind == FlowSystem::Kind::SuspensionPerm)
    return std::min(p.v, 1.0 - p.v) <= tol;
  if (s.n < 1 || s.n > sys.depth) throw DomainError("on_section: depth error");
  const double step = (double)factorial(s.n);
  if (lattice_dist(p.y, step, sys.circle_len()) > tol) return false;
  if (sys.kind == FlowSystem::Kind::Band)
    return p.v >= s.fiber_lo - tol && p.v <= s.fiber_hi + tol;
  return true;
}

ReturnResult first_return(const FlowSystem& sys, const CrossSectionData& s,
                          const FlowPoint& p) {
  if (!on_section(sys, s, p, 1e-9))
    throw DomainError("first_return: point not on section");
  ReturnResult r;
  if (sys.kind == FlowSystem::Kind::SuspensionPerm) {
    r.time = 1.0;
    r.point = p;
    r.point.k = perm_apply(sys.perm, p.k, 1);
    return r;
  }
  r.time = (double)factorial(s.n);
  r.point = flow_apply(sys, p, r.time);
  return r;
}

ReturnResult first_return_bisection(const FlowSystem& sys,
                                    const CrossSectionData& s,
                                    const FlowPoint& p, double t_max) {
  if (!on_section(sys, s, p, 1e-9))
    throw DomainError("first_return_bisection: point not on section");
  const bool susp = sys.kind == FlowSystem::Kind::SuspensionPerm;
  const double period = susp ? 1.0 : (double)factorial(s.n);
  // f(t) = section coordinate of the flowed point; piecewise-increasing with
  // a drop exactly at each crossing
  auto f = [&](double t) {
    const FlowPoint q = flow_apply(sys, p, t);
    return susp ? q.v : wrap(q.y, period);
  };
  const double step = period / 64.0;
  double prev_t = step / 2.0;  // skip the departure at t = 0
  double prev_v = f(prev_t);
  double lo = -1.0, hi = -1.0;
  for (double t = prev_t + step; t <= t_max + step; t += step) {
    const double v = f(t);
    if (v < prev_v) {
      lo = prev_t;
      hi = t;
      break;
    }
    prev_t = t;
    prev_v = v;
  }
  if (lo < 0.0)
    throw DomainError("first_return_bisection: search error (no return "
                      "before t_max)");
  const double f_lo = f(lo);
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < f_lo)
      hi = mid;
    else
      lo = mid;
  }
  ReturnResult r;
  r.time = hi;
  r.point = flow_apply(sys, p, hi);
  return r;
}

SuspensionPoint suspension_flow(const SuspensionPoint& sp, double t,
                                const std::function<double(int)>& roof,
                                const std::function<int(int)>& base_map,
                                const std::function<int(int)>& base_inv) {
  SuspensionPoint q = sp;
  double total = sp.height + t;
  int guard = 0;
  if (total >= 0.0) {
    while (true) {
      const double rf = roof(q.base);
      if (!(rf > 0.0)) throw ParamError("suspension_flow: roof must be > 0");
      if (total < rf) break;
      total -= rf;
      q.base = base_map(q.base);
      if (++guard > 1000000)
        throw ParamError("suspension_flow: too many roof crossings");
    }
  } else {
    if (!base_inv)
      throw ParamError("suspension_flow: inversion error (negative time "
                       "without inverse base map)");
    while (total < 0.0) {
      q.base = base_inv(q.base);
      const double rf = roof(q.base);
      if (!(rf > 0.0)) throw ParamError("suspension_flow: roof must be > 0");
      total += rf;
      if (++guard > 1000000)
        throw ParamError("suspension_flow: too many roof crossings");
    }
  }
  q.height = total;
  return q;
}

BoundaryReport flow_boundary_probe(const FlowSystem& sys,
                                   const CrossSectionData& s, double gamma,
                                   int probes, std::uint64_t seed) {
  const double eta = section_eta(sys, s);
  if (!(gamma > 0.0) || gamma >= eta)
    throw ParamError("flow_boundary_probe: need 0 < gamma < eta");
  if (probes < 1) throw ParamError("flow_boundary_probe: probes < 1");
  Rng rng(seed);
  const double eps = gamma / 4.0;
  const bool susp = sys.kind == FlowSystem::Kind::SuspensionPerm;
  const double period = susp ? 1.0 : (double)factorial(s.n);
  const long long lattice_count =
      susp ? (long long)sys.perm.size()
           : (long long)std::llround(sys.circle_len() / period);

  BoundaryReport rep;
  rep.probes = probes;
  const int ball_samples = 64;
  for (int i = 0; i < probes; ++i) {
    FlowPoint p;
    if (susp) {
      p.k = (int)(i % lattice_count);
      p.v = 0.0;
    } else {
      p.y = period * (double)(i % lattice_count);
      if (sys.kind == FlowSystem::Kind::ProductK)
        p.k = i % std::max(1, sys.fiber_k);
      if (sys.kind == FlowSystem::Kind::Band)
        p.v = probes == 1 ? s.fiber_lo
                          : s.fiber_lo + (s.fiber_hi - s.fiber_lo) *
                                             (double)i / (double)(probes - 1);
    }
    int bad = 0;
    for (int j = 0; j < ball_samples; ++j) {
      bool reachable = true;
      if (susp) {
        // ambient ball along the only local direction: the flow itself
        const double dt = eps * (2.0 * rng.uniform() - 1.0);
        const FlowPoint q = flow_apply(sys, p, dt);
        reachable = std::min(q.v, 1.0 - q.v) < gamma;
      } else {
        const double qy =
            wrap(p.y + eps * (2.0 * rng.uniform() - 1.0), sys.circle_len());
        reachable = lattice_dist(qy, period, sys.circle_len()) < gamma;
        if (sys.kind == FlowSystem::Kind::Band) {
          const double qv = p.v + eps * (2.0 * rng.uniform() - 1.0);
          if (qv < 0.0 || qv > 1.0)
            continue;  // outside the ambient space: not part of the ball
          reachable =
              reachable && qv >= s.fiber_lo && qv <= s.fiber_hi;
        }
      }
      if (!reachable) ++bad;
    }
    if (bad == 0) {
      ++rep.passed;
    } else {
      std::ostringstream os;
      os << "probe " << i << " (" << sys.id() << " " << s.id();
      if (sys.kind == FlowSystem::Kind::Band) os << " at v=" << p.v;
      os << "): " << bad << "/" << ball_samples << " ball samples outside "
         << "the flow tube";
      if (rep.failures.size() < 16) rep.failures.push_back(os.str());
    }
  }
  rep.fraction = (double)rep.passed / (double)rep.probes;
  rep.all_pass = rep.passed == rep.probes;
  return rep;
}

RoundtripReport conjugacy_roundtrip(const FlowSystem& sys,
                                    const CrossSectionData& s, int n_samples,
                                    std::uint64_t seed) {
  const double eta = section_eta(sys, s);
  const BoundaryReport pre =
      flow_boundary_probe(sys, s, eta / 2.0, 16, seed ^ 0x9e3779b97f4a7c15ull);
  if (!pre.all_pass)
    throw ParamError("conjugacy_roundtrip: precondition error (section "
                     "fails Poincare probe)");
  Rng rng(seed);
  const bool susp = sys.kind == FlowSystem::Kind::SuspensionPerm;
  const double period = susp ? 1.0 : (double)factorial(s.n);
  const long long m =
      susp ? (long long)sys.perm.size()
           : (long long)std::llround(sys.circle_len() / period);

  // psi: ambient -> (section index, fiber payload, height)
  struct SuspRep {
    long long idx;
    int k;
    double fiber_v;
    double t;
  };
  auto psi = [&](const FlowPoint& q) {
    SuspRep r{};
    if (susp) {
      r.idx = q.k;
      r.t = q.v;
      r.k = 0;
      r.fiber_v = 0.0;
    } else {
      r.idx = (long long)std::floor(q.y / period);
      if (r.idx >= m) r.idx = m - 1;
      r.t = q.y - period * (double)r.idx;
      r.k = q.k;
      r.fiber_v = q.v;
    }
    return r;
  };
  auto phi_map = [&](const SuspRep& r) {
    FlowPoint q;
    if (susp) {
      q.k = (int)r.idx;
      q.v = r.t;
    } else {
      q.y = wrap(period * (double)r.idx + r.t, sys.circle_len());
      q.k = r.k;
      q.v = r.fiber_v;
    }
    return q;
  };
  // time-t map on the suspension side (roof = period, base = index + 1 or
  // the permutation)
  auto susp_step = [&](SuspRep r, double t) {
    double total = r.t + t;
    const double steps = std::floor(total / period);
    const long long st = (long long)steps;
    if (susp)
      r.idx = perm_apply(sys.perm, (int)r.idx, st);
    else
      r.idx = ((r.idx + st) % m + m) % m;
    r.t = total - period * steps;
    return r;
  };

  RoundtripReport rep;
  rep.samples = n_samples;
  const double times[] = {0.3, 1.7, 5.0};
  for (int i = 0; i < n_samples; ++i) {
    FlowPoint q;
    if (susp) {
      q.k = rng.int_in(0, (int)m - 1);
      q.v = rng.uniform();
    } else {
      q.y = rng.uniform(0.0, sys.circle_len());
      if (sys.kind == FlowSystem::Kind::ProductK)
        q.k = rng.int_in(0, std::max(1, sys.fiber_k) - 1);
      if (sys.kind == FlowSystem::Kind::Band) q.v = rng.uniform();
    }
    const FlowPoint back = phi_map(psi(q));
    rep.max_roundtrip =
        std::max(rep.max_roundtrip, flow_point_dist(sys, back, q));
    for (double t0 : times) {
      const FlowPoint path_a = flow_apply(sys, q, t0);
      const FlowPoint path_b = phi_map(susp_step(psi(q), t0));
      rep.max_equivariance =
          std::max(rep.max_equivariance, flow_point_dist(sys, path_a, path_b));
    }
  }
  rep.pass = rep.max_roundtrip < 1e-9 && rep.max_equivariance < 1e-9;
  return rep;
}

BandLimitedSignal suspend_embedding(
    const std::function<BandLimitedSignal(int)>& h, const SuspensionPoint& sp,
    double roof) {
  if (std::abs(roof - 1.0) > 1e-15)
    throw ParamError("suspend_embedding: unsupported-roof error (roof must "
                     "be constant 1)");
  if (sp.height < 0.0 || sp.height >= 1.0)
    throw DomainError("suspend_embedding: height outside [0, 1)");
  return translate(h(sp.base), sp.height);
}

int CyclicProductBase::state(int phase, int fiber) const {
  if (phase < 0 || phase >= period || fiber < 0 || fiber >= fibers)
    throw ParamError("CyclicProductBase: state out of range");
  return fiber * period + phase;
}

int CyclicProductBase::step(int id, long long m) const {
  const int f = fiber_of(id);
  const long long p = ((long long)phase_of(id) + m) % period;
  return f * period + (int)((p + period) % period);
}

int CyclicProductBase::shift_between(int a, int b) const {
  if (!same_orbit(a, b))
    throw ParamError("shift_between: states on different orbits");
  int d = ((phase_of(b) - phase_of(a)) % period + period) % period;
  if (d >= period / 2) d -= period;
  return d;
}

namespace {

// sup |f - g| over the common grid within |x| <= T_c
double sup_diff_common(const BandLimitedSignal& f, const BandLimitedSignal& g,
                       double t_c) {
  if (std::abs(f.dt - g.dt) > 1e-15)
    throw ParamError("sup_diff_common: mismatched sample steps");
  const double tc = std::min({t_c, f.T, g.T});
  const long long n = (long long)std::floor(tc / f.dt + 1e-9);
  double sup = 0.0;
  for (long long i = -n; i <= n; ++i) {
    const double x = (double)i * f.dt;
    const long long fi = std::llround((x + f.T) / f.dt);
    const long long gi = std::llround((x + g.T) / g.dt);
    sup = std::max(sup, std::abs(f.samples[(size_t)fi] -
                                 g.samples[(size_t)gi]));
  }
  return sup;
}

}  // namespace

StrongEmbedReport strong_embedding_probe(
    const std::function<BandLimitedSignal(int)>& h,
    const CyclicProductBase& base,
    const std::vector<std::pair<int, int>>& sample_pairs, double r_step,
    double r_max, double threshold) {
  if (!(r_step > 0.0) || !(r_max > 0.0) || !(threshold > 0.0))
    throw ParamError("strong_embedding_probe: bad grid spec");
  StrongEmbedReport rep;
  rep.r_max = r_max;
  rep.r_step = r_step;
  rep.threshold = threshold;
  rep.pass = true;
  const long long jm = (long long)std::llround(r_max / r_step);
  for (const auto& [sa, sb] : sample_pairs) {
    StrongPairResult pr;
    pr.state_a = sa;
    pr.state_b = sb;
    pr.on_orbit = base.same_orbit(sa, sb);
    pr.true_shift = pr.on_orbit ? base.shift_between(sa, sb) : 0;
    const BandLimitedSignal fa = h(sa);
    const BandLimitedSignal fb = h(sb);
    pr.min_unflagged = std::numeric_limits<double>::infinity();
    for (long long j = -jm; j <= jm; ++j) {
      const double r = (double)j * r_step;
      const BandLimitedSignal fr = translate(fa, r);
      const double d = sup_diff_common(fr, fb, 50.0);
      if (d < threshold)
        pr.flags.push_back({r, d});
      else
        pr.min_unflagged = std::min(pr.min_unflagged, d);
    }
    const bool shift_visible =
        pr.on_orbit && std::abs(pr.true_shift) <= (int)std::floor(r_max);
    if (shift_visible) {
      pr.ok = !pr.flags.empty();
      for (const auto& fl : pr.flags)
        pr.ok = pr.ok && std::abs(fl.r - (double)pr.true_shift) < r_step / 2.0;
    } else {
      pr.ok = pr.flags.empty();
    }
    rep.pass = rep.pass && pr.ok;
    rep.pairs.push_back(std::move(pr));
  }
  return rep;
}

}  // namespace flowembed
