#include "flowembed/tiling.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace flowembed {

namespace {

using rational = boost::multiprecision::cpp_rational;

double boundary(const VoronoiSite& a, const VoronoiSite& b, double H) {
  // a.n < b.n assumed; equidistance on the line y = -H
  return 0.5 * (double)(a.n + b.n) +
         (b.height - a.height) * (2.0 * H + a.height + b.height) /
             (2.0 * (double)(b.n - a.n));
}

struct RatInterval {
  rational l, r;
  bool operator==(const RatInterval& o) const { return l == o.l && r == o.r; }
};

std::map<int, RatInterval> rational_cells(const MarkerSequence& m) {
  const rational H = rational((m.M1 + 1) * (m.M1 + 1));
  std::vector<std::pair<int, rational>> ss;
  for (const auto& [n, v] : m.values)
    if (v > 0.0) ss.emplace_back(n, rational(1) / rational(v));
  std::map<int, RatInterval> out;
  for (std::size_t k = 0; k < ss.size(); ++k) {
    rational lo, hi;
    bool has_lo = false, has_hi = false, empty = false;
    for (std::size_t j = 0; j < ss.size(); ++j) {
      if (j == k) continue;
      const auto& [na, ha] = j < k ? ss[j] : ss[k];
      const auto& [nb, hb] = j < k ? ss[k] : ss[j];
      const rational u = rational(na + nb) / 2 +
                         (hb - ha) * (2 * H + ha + hb) / (2 * rational(nb - na));
      if (j < k) {
        if (!has_lo || u > lo) { lo = u; has_lo = true; }
      } else {
        if (!has_hi || u < hi) { hi = u; has_hi = true; }
      }
      if (has_lo && has_hi && lo > hi) { empty = true; break; }
    }
    if (empty || !has_lo || !has_hi) continue;  // unbounded edge cells dropped
    out.emplace(ss[k].first, RatInterval{lo, hi});
  }
  return out;
}

}  // namespace

MarkerSequence MarkerSequence::shifted(int k) const {
  MarkerSequence s;
  s.lo = lo - k;
  s.hi = hi - k;
  s.M = M;
  s.M1 = M1;
  for (const auto& [n, v] : values) s.values.emplace(n - k, v);
  return s;
}

std::vector<std::string> validate_marker(const MarkerSequence& m) {
  std::vector<std::string> errs;
  if (m.hi < m.lo) errs.push_back("empty index window");
  if (m.M1 <= m.M) errs.push_back("M1 must exceed M");
  int prev_pos = std::numeric_limits<int>::min() / 2;
  for (const auto& [n, v] : m.values) {
    if (n < m.lo || n > m.hi) {
      std::ostringstream os;
      os << "value index " << n << " outside window";
      errs.push_back(os.str());
    }
    if (v < 0.0 || v > 1.0) {
      std::ostringstream os;
      os << "value at " << n << " outside [0,1]";
      errs.push_back(os.str());
    }
    if (v > 0.0) {
      if (n - prev_pos < m.M) {
        std::ostringstream os;
        os << "positive values at " << prev_pos << " and " << n
           << " closer than M=" << m.M;
        errs.push_back(os.str());
      }
      prev_pos = n;
    }
  }
  // every full subwindow of length 2*M1 must contain a value-1 index
  std::vector<int> ones;
  for (const auto& [n, v] : m.values)
    if (v == 1.0) ones.push_back(n);
  for (int s = m.lo; s + 2 * m.M1 - 1 <= m.hi; ++s) {
    auto it = std::lower_bound(ones.begin(), ones.end(), s);
    if (it == ones.end() || *it > s + 2 * m.M1 - 1) {
      std::ostringstream os;
      os << "no value-1 index in window [" << s << ", " << s + 2 * m.M1 - 1 << "]";
      errs.push_back(os.str());
      break;
    }
  }
  return errs;
}

std::vector<VoronoiSite> sites(const MarkerSequence& m) {
  auto errs = validate_marker(m);
  if (!errs.empty()) {
    std::string msg = "marker validation failed:";
    for (const auto& e : errs) msg += " [" + e + "]";
    throw ValidationError(msg);
  }
  std::vector<VoronoiSite> out;
  for (const auto& [n, v] : m.values)
    if (v > 0.0) out.push_back({n, 1.0 / v});
  return out;
}

Cell voronoi_interval(const std::vector<VoronoiSite>& ss, int n, double H) {
  if (ss.empty()) throw DomainError("voronoi_interval: no sites");
  std::size_t k = ss.size();
  for (std::size_t i = 0; i < ss.size(); ++i)
    if (ss[i].n == n) { k = i; break; }
  if (k == ss.size()) return {};  // phi=0 at n: empty cell
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ss.size(); ++j) {
    if (j == k) continue;
    if (ss[j].n < ss[k].n)
      lo = std::max(lo, boundary(ss[j], ss[k], H));
    else
      hi = std::min(hi, boundary(ss[k], ss[j], H));
  }
  if (!(lo <= hi)) return {};  // inverted constraints: empty cell
  return Interval{lo, hi};     // edge cells may carry infinite endpoints
}

IntervalTiling build_tiling(const MarkerSequence& m) {
  if (m.hi - m.lo + 1 < 6 * m.M1)
    throw ParamError("build_tiling: window shorter than 6*M1");
  auto ss = sites(m);
  IntervalTiling t;
  t.H = (double)((m.M1 + 1) * (m.M1 + 1));
  t.lo = m.lo;
  t.hi = m.hi;
  t.valid_lo = m.lo + 2 * (m.M1 + 1);
  t.valid_hi = m.hi - 2 * (m.M1 + 1);
  for (const auto& s : ss) {
    Cell c = voronoi_interval(ss, s.n, t.H);
    if (c && std::isfinite(c->first) && std::isfinite(c->second))
      t.cells.emplace(s.n, *c);
  }
  return t;
}

double shift_equivariance_defect(const MarkerSequence& m, int k) {
  const IntervalTiling base = build_tiling(m);
  const IntervalTiling shifted = build_tiling(m.shifted(k));
  const int lo = std::max(shifted.valid_lo, base.valid_lo - k);
  const int hi = std::min(shifted.valid_hi, base.valid_hi - k);
  if (lo > hi) throw DomainError("shift_equivariance_defect: no common valid range");
  double defect = 0.0;
  for (int n = lo; n <= hi; ++n) {
    const Cell a = shifted.cell(n);
    const Cell b = base.cell(n + k);
    if (!a && !b) continue;
    if (!a || !b) return std::numeric_limits<double>::infinity();
    defect = std::max(defect, std::abs(a->first - (b->first - (double)k)));
    defect = std::max(defect, std::abs(a->second - (b->second - (double)k)));
  }
  return defect;
}

bool shift_equivariance_exact(const MarkerSequence& m, int k) {
  const auto base = rational_cells(m);
  const auto shifted = rational_cells(m.shifted(k));
  const int lo = std::max(m.lo - k + 2 * (m.M1 + 1), m.lo + 2 * (m.M1 + 1) - k);
  const int hi = std::min(m.hi - k - 2 * (m.M1 + 1), m.hi - 2 * (m.M1 + 1) - k);
  for (int n = lo; n <= hi; ++n) {
    const auto a = shifted.find(n);
    const auto b = base.find(n + k);
    if ((a == shifted.end()) != (b == base.end())) return false;
    if (a == shifted.end()) continue;
    if (!(a->second.l == b->second.l - k && a->second.r == b->second.r - k))
      return false;
  }
  return true;
}

double coverage_defect(const IntervalTiling& t) {
  std::vector<Interval> iv;
  for (const auto& [n, c] : t.cells)
    if (n >= t.valid_lo && n <= t.valid_hi) iv.push_back(c);
  std::sort(iv.begin(), iv.end());
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < iv.size(); ++i)
    worst = std::max(worst, std::abs(iv[i + 1].first - iv[i].second));
  return worst;
}

GeometryReport check_geometry(const IntervalTiling& t, const MarkerSequence& m, double c) {
  if (!(c > 1.0)) throw ParamError("check_geometry: c must exceed 1");
  GeometryReport r;
  r.M2 = (c - 1.0) * t.H * (double)m.M / (t.H + 2.0);
  r.value_ok = r.ball_ok = r.length_ok = true;
  r.min_length = std::numeric_limits<double>::infinity();
  for (const auto& [n, cell] : t.cells) {
    if (n < t.valid_lo || n > t.valid_hi) continue;
    ++r.n_cells;
    const double len = cell.second - cell.first;
    r.min_length = std::min(r.min_length, len);
    std::ostringstream os;
    if (!(m.value(n) > 0.5)) {
      r.value_ok = false;
      os << "cell " << n << " nonempty but value " << m.value(n) << " <= 1/2; ";
    }
    if (cell.first < (double)n - (double)(m.M1 + 1) - 1e-9 ||
        cell.second > (double)n + (double)(m.M1 + 1) + 1e-9) {
      r.ball_ok = false;
      os << "cell " << n << " escapes B_{M1+1}; ";
    }
    if (len < 2.0 * r.M2 - 1e-12) {
      r.length_ok = false;
      os << "cell " << n << " length " << len << " < 2*M2; ";
    }
    if (os.str().size()) r.violations.push_back(os.str());
  }
  if (r.n_cells == 0) r.min_length = 0.0;
  r.pass = r.value_ok && r.ball_ok && r.length_ok && r.n_cells > 0;
  return r;
}

Cell int_e(const Cell& cell, double E) {
  if (E < 0.0) throw ParamError("int_e: E must be nonnegative");
  if (!cell) return {};
  const double l = cell->first + E, r = cell->second - E;
  if (l > r) return {};
  return Interval{l, r};
}

}  // namespace flowembed
