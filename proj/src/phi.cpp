#include "flowembed/phi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "flowembed/quadrature.hpp"

namespace flowembed {

namespace {

// integral_l^r e^{-2 pi i xi t} dt, series branch for small total phase
cplx cell_integral(double xi, double l, double r) {
  const double phase = -2.0 * kPi * xi;
  const double len = r - l;
  const cplx head = std::exp(cplx(0.0, phase * l));
  const double w = phase * len;
  if (std::abs(w) < 0.5) {
    const cplx iw(0.0, w);
    cplx term(1.0, 0.0), sum(1.0, 0.0);
    for (int k = 2; k <= 14; ++k) {
      term *= iw / (double)k;
      sum += term;
    }
    return head * (len * sum);
  }
  return head * ((std::exp(cplx(0.0, w)) - 1.0) / cplx(0.0, phase));
}

// GL16 panel nodes/weights over [-s, s], panel count sized by the fastest
// combined oscillation phase across the node range
void build_nodes(double s, double span, std::vector<double>& xs,
                 std::vector<double>& ws) {
  const double total_phase = 2.0 * kPi * (2.0 * s) * std::max(span, 1.0);
  const int n_panels = std::max(8, (int)std::ceil(total_phase / 12.0));
  xs.clear();
  ws.clear();
  xs.reserve((size_t)n_panels * 16);
  ws.reserve((size_t)n_panels * 16);
  for (int p = 0; p < n_panels; ++p) {
    const double a = -s + 2.0 * s * (double)p / n_panels;
    const double b = -s + 2.0 * s * (double)(p + 1) / n_panels;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t j = 0; j < GL16::x.size(); ++j) {
      xs.push_back(mid - half * GL16::x[j]);
      ws.push_back(half * GL16::w[j]);
      xs.push_back(mid + half * GL16::x[j]);
      ws.push_back(half * GL16::w[j]);
    }
  }
}

PhiFunction build_core(MarkerSequence marker, IntervalTiling tiling,
                       const EmbeddingParams& p, const SpectralKernel& kernel,
                       double eval_tol) {
  PhiFunction f;
  f.marker = std::move(marker);
  f.tiling = std::move(tiling);
  f.params = p;
  f.kernel = kernel;
  f.eval_tolerance = eval_tol;
  f.omega_p = kPi * p.b + kPi / p.L;
  f.omega_m = kPi * p.b - kPi / p.L;
  f.dom_re_lo = (double)f.tiling.valid_lo + (p.E + 1.0);
  f.dom_re_hi = (double)f.tiling.valid_hi - (p.E + 1.0);

  double min_l = 0.0, max_r = 0.0;
  bool any = false;
  for (const auto& [n, iv] : f.tiling.cells) {
    if (!any) {
      min_l = iv.first;
      max_r = iv.second;
      any = true;
    } else {
      min_l = std::min(min_l, iv.first);
      max_r = std::max(max_r, iv.second);
    }
  }
  const double span =
      any ? std::max(max_r - std::min(f.dom_re_lo, min_l),
                     std::max(f.dom_re_hi, max_r) - min_l)
          : 1.0;
  build_nodes(kernel.half_width, span, f.nodes, f.wg);

  f.Sp.assign(f.nodes.size(), cplx(0.0, 0.0));
  f.Sm.assign(f.nodes.size(), cplx(0.0, 0.0));
  for (std::size_t j = 0; j < f.nodes.size(); ++j) {
    const double xi = f.nodes[j];
    f.wg[j] *= chi1_profile(kernel, xi);
    cplx sp(0.0, 0.0), sm(0.0, 0.0);
    for (const auto& [n, iv] : f.tiling.cells) {
      const cplx ci = cell_integral(xi, iv.first, iv.second);
      sp += std::exp(cplx(0.0, -f.omega_p * n)) * ci;
      sm += std::exp(cplx(0.0, -f.omega_m * n)) * ci;
    }
    f.Sp[j] = sp;
    f.Sm[j] = sm;
  }
  return f;
}

}  // namespace

bool PhiFunction::in_domain(cplx z) const {
  if (std::abs(z.imag()) > 1.0 + 1e-12) return false;
  return z.real() >= dom_re_lo - 1e-9 && z.real() <= dom_re_hi + 1e-9;
}

cplx PhiFunction::eval(cplx z) const {
  if (!in_domain(z)) {
    std::ostringstream os;
    os << "phi_eval: z = (" << z.real() << ", " << z.imag()
       << ") outside domain Re in [" << dom_re_lo << ", " << dom_re_hi
       << "], |Im| <= 1";
    throw DomainError(os.str());
  }
  cplx qp(0.0, 0.0), qm(0.0, 0.0);
  const cplx two_pi_i_z = cplx(0.0, 2.0 * kPi) * z;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const cplx e = wg[j] * std::exp(two_pi_i_z * nodes[j]);
    qp += e * Sp[j];
    qm += e * Sm[j];
  }
  const cplx ep = std::exp(cplx(0.0, 1.0) * (omega_p * z));
  const cplx em = std::exp(cplx(0.0, 1.0) * (omega_m * z));
  return cplx(0.0, -0.5) * (ep * qp - em * qm);
}

std::pair<cplx, cplx> PhiFunction::eval_d(cplx z) const {
  if (!in_domain(z)) throw DomainError("phi_eval_d: z outside domain");
  cplx qp(0, 0), qm(0, 0), qpd(0, 0), qmd(0, 0);
  const cplx two_pi_i_z = cplx(0.0, 2.0 * kPi) * z;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double xi = nodes[j];
    const cplx e = wg[j] * std::exp(two_pi_i_z * xi);
    const cplx d = cplx(0.0, 2.0 * kPi * xi);
    qp += e * Sp[j];
    qm += e * Sm[j];
    qpd += e * d * Sp[j];
    qmd += e * d * Sm[j];
  }
  const cplx ep = std::exp(cplx(0.0, 1.0) * (omega_p * z));
  const cplx em = std::exp(cplx(0.0, 1.0) * (omega_m * z));
  const cplx val = cplx(0.0, -0.5) * (ep * qp - em * qm);
  const cplx der =
      cplx(0.0, -0.5) * (ep * (cplx(0.0, omega_p) * qp + qpd) -
                         em * (cplx(0.0, omega_m) * qm + qmd));
  return {val, der};
}

PhiFunction build_phi(const MarkerSequence& m, const EmbeddingParams& p,
                      const SpectralKernel& kernel, double eval_tol) {
  IntervalTiling t = build_tiling(m);  // validates the marker via sites()
  return build_core(m, std::move(t), p, kernel, eval_tol);
}

PhiFunction build_phi_from_cells(const std::map<int, Interval>& cells,
                                 int valid_lo, int valid_hi,
                                 const EmbeddingParams& p,
                                 const SpectralKernel& kernel,
                                 double eval_tol) {
  MarkerSequence m;  // synthetic: 1-sites at the given cell indices
  m.lo = valid_lo;
  m.hi = valid_hi;
  IntervalTiling t;
  t.H = (double)(m.M1 + 1) * (double)(m.M1 + 1);
  t.lo = valid_lo;
  t.hi = valid_hi;
  t.valid_lo = valid_lo;
  t.valid_hi = valid_hi;
  for (const auto& [n, iv] : cells) {
    m.values[n] = 1.0;
    t.cells.emplace(n, iv);
  }
  return build_core(std::move(m), std::move(t), p, kernel, eval_tol);
}

double equivariance_defect(const PhiFunction& phi, int k,
                           const std::vector<cplx>& grid) {
  const PhiFunction shifted =
      build_phi(phi.marker.shifted(k), phi.params, phi.kernel,
                phi.eval_tolerance);
  double defect = 0.0;
  for (const cplx& z : grid) {
    if (!shifted.in_domain(z) || !phi.in_domain(z + (double)k))
      throw DomainError("equivariance_defect: grid point outside domain");
    defect = std::max(defect,
                      std::abs(shifted.eval(z) - phi.eval(z + (double)k)));
  }
  return defect;
}

BandLimitedSignal sample_phi_real(const PhiFunction& phi, double T,
                                  double dt) {
  if (!phi.in_domain(cplx(-T, 0.0)) || !phi.in_domain(cplx(T, 0.0)))
    throw DomainError("sample_phi_real: [-T, T] outside phi domain");
  return make_signal(T, dt, phi.params.a / 2.0,
                     phi.params.a / 2.0 + phi.params.delta / 2.0, false,
                     [&phi](double x) { return phi.eval(cplx(x, 0.0)); });
}

SpectrumReport spectral_support_report(const PhiFunction& phi, double T,
                                       double dt) {
  if (!(phi.params.L > 4.0 / phi.params.delta))
    throw ParamError("spectral_support_report: need L > 4/delta");
  if (T < 4.0 * phi.params.M1)
    throw DomainError("spectral_support_report: window error (T < 4*M1)");
  const BandLimitedSignal sig = sample_phi_real(phi, T, dt);
  SpectrumReport rep;
  rep.T = T;
  rep.dt = dt;
  rep.n_samples = (int)sig.samples.size();
  rep.band_lo = sig.band_lo;
  rep.band_hi = sig.band_hi;
  rep.widen = 3.0 / T;
  rep.leakage = fourier_leakage(sig, sig.band_lo, sig.band_hi);
  return rep;
}

namespace {

// winding of Phi along the circle |z - center| = radius by phase
// accumulation; returns false if the contour dips below floor_abs
bool winding_on_circle(const PhiFunction& phi, double center, double radius,
                       int n_nodes, double floor_abs, int* winding_out) {
  std::vector<cplx> vals((size_t)n_nodes);
  for (int t = 0; t < n_nodes; ++t) {
    const double th = 2.0 * kPi * t / n_nodes;
    vals[(size_t)t] =
        phi.eval(cplx(center + radius * std::cos(th), radius * std::sin(th)));
    if (std::abs(vals[(size_t)t]) < floor_abs) return false;
  }
  double acc = 0.0;
  double max_step = 0.0;
  for (int t = 0; t < n_nodes; ++t) {
    const cplx ratio = vals[(size_t)((t + 1) % n_nodes)] / vals[(size_t)t];
    const double d = std::arg(ratio);
    acc += d;
    max_step = std::max(max_step, std::abs(d));
  }
  if (max_step > 2.5 && n_nodes < 8192)
    return winding_on_circle(phi, center, radius, 4 * n_nodes, floor_abs,
                             winding_out);
  *winding_out = (int)std::llround(acc / (2.0 * kPi));
  return true;
}

}  // namespace

ZeroReport locate_zeros(const PhiFunction& phi, double re_lo, double re_hi,
                        double grid_hx, double grid_hy) {
  const double r1 = phi.params.r1;
  const double L = phi.params.L;
  const double E = phi.params.E;
  if (!(r1 > 0.0)) throw ParamError("locate_zeros: params.r1 not set");
  if (re_lo > re_hi) throw ParamError("locate_zeros: empty re_range");
  if (re_lo < phi.dom_re_lo + r1 || re_hi > phi.dom_re_hi - r1)
    throw DomainError("locate_zeros: re_range not inside Int_E of the valid "
                      "tiling region");

  ZeroReport rep;
  rep.offdisk_min_abs = std::numeric_limits<double>::infinity();

  // sorted cells for ownership lookup and candidate enumeration
  std::vector<std::pair<int, Interval>> cells(phi.tiling.cells.begin(),
                                              phi.tiling.cells.end());
  std::sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) {
    return a.second.first < b.second.first;
  });

  // candidate centers n + Lm in Int_{E+1} of the owning cell
  std::vector<std::pair<double, int>> centers;  // (center, site)
  for (const auto& [n, iv] : cells) {
    const double lo = std::max(iv.first + E + 1.0, re_lo);
    const double hi = std::min(iv.second - E - 1.0, re_hi);
    if (lo > hi) continue;
    const long long m_lo = (long long)std::ceil((lo - n) / L - 1e-12);
    const long long m_hi = (long long)std::floor((hi - n) / L + 1e-12);
    for (long long m = m_lo; m <= m_hi; ++m)
      centers.push_back({(double)n + L * (double)m, n});
  }
  std::sort(centers.begin(), centers.end());

  const double floor_abs = 10.0 * phi.eval_tolerance;
  for (const auto& [center, site] : centers) {
    ZeroFinding zf;
    zf.center = center;
    zf.site = site;
    zf.contour_ok = false;
    const double radii[] = {1.0, 7.0 / 8.0, 3.0 / 4.0, 5.0 / 8.0, 1.0 / 2.0};
    for (double frac : radii) {
      int w = 0;
      if (winding_on_circle(phi, center, frac * r1, 1024, floor_abs, &w)) {
        zf.contour_ok = true;
        zf.radius = frac * r1;
        zf.winding = w;
        break;
      }
    }
    if (!zf.contour_ok) {
      rep.violations.push_back("contour error at center " +
                               std::to_string(center));
      rep.windings_all_one = false;
      rep.findings.push_back(zf);
      continue;
    }
    if (zf.winding != 1) rep.windings_all_one = false;

    // Newton refinement from the center
    cplx z(center, 0.0);
    for (int it = 0; it < 60; ++it) {
      const auto [v, d] = phi.eval_d(z);
      if (std::abs(v) < 1e-12) {
        zf.newton_ok = true;
        break;
      }
      if (std::abs(d) == 0.0) break;
      const cplx step = v / d;
      z -= step;
      if (!phi.in_domain(z)) break;
      if (std::abs(step) < 1e-14) {
        zf.newton_ok = std::abs(phi.eval(z)) < 1e-10;
        break;
      }
    }
    zf.zero = z;
    zf.dist_to_center = std::abs(z - cplx(center, 0.0));
    if (zf.newton_ok && zf.dist_to_center > r1) {
      rep.zeros_confined = false;
      rep.violations.push_back("zero escaped its disk near center " +
                               std::to_string(center));
    }
    if (!zf.newton_ok) {
      rep.violations.push_back("newton failed at center " +
                               std::to_string(center));
      rep.zeros_confined = false;
    }
    rep.findings.push_back(zf);
  }

  // certification grid on the off-disk complement
  const double theta_floor = phi.params.theta_L / 2.0;
  const long long nx =
      cells.empty() ? 0 : (long long)std::floor((re_hi - re_lo) / grid_hx) + 1;
  const long long ny = (long long)std::floor(2.0 / grid_hy) + 1;
  std::size_t cell_idx = 0;
  for (long long ix = 0; ix < nx; ++ix) {
    const double x = re_lo + (double)ix * grid_hx;
    // advance the owner pointer (x is nondecreasing)
    while (cell_idx + 1 < cells.size() &&
           x > cells[cell_idx].second.second + 1e-12)
      ++cell_idx;
    const auto& [site, iv] = cells[cell_idx];
    const bool certifiable =
        x >= iv.first + E - 1e-12 && x <= iv.second - E + 1e-12 &&
        x >= iv.first - 1e-12 && x <= iv.second + 1e-12;
    for (long long iy = 0; iy < ny; ++iy) {
      const double y = -1.0 + (double)iy * grid_hy;
      ++rep.grid_total;
      if (!certifiable) {
        ++rep.grid_uncertifiable;
        continue;
      }
      // inside one of the candidate disks?
      const double m_near = std::round((x - site) / L);
      bool in_disk = false;
      for (double m = m_near - 1.0; m <= m_near + 1.0 && !in_disk; m += 1.0) {
        const double cx = site + L * m;
        in_disk = (x - cx) * (x - cx) + y * y <= r1 * r1;
      }
      if (in_disk) {
        ++rep.grid_in_disk;
        continue;
      }
      ++rep.grid_certified;
      const double av = std::abs(phi.eval(cplx(x, y)));
      rep.offdisk_min_abs = std::min(rep.offdisk_min_abs, av);
      if (av < theta_floor) {
        rep.offdisk_ok = false;
        if (rep.violations.size() < 32) {
          std::ostringstream os;
          os << "|Phi| = " << av << " < theta_L/2 at (" << x << ", " << y
             << ")";
          rep.violations.push_back(os.str());
        }
      }
    }
  }
  rep.pass = rep.windings_all_one && rep.zeros_confined && rep.offdisk_ok;
  return rep;
}

RigidityResult shift_rigidity_margin(const PhiFunction& phi_x,
                                     const PhiFunction& phi_y, double r_step,
                                     double win_lo, double win_hi) {
  if (!(r_step > 0.0) || win_lo >= win_hi)
    throw ParamError("shift_rigidity_margin: bad grid spec");
  const double r1 = phi_x.params.r1;
  const double r_min = 2.0 * r1 + r_step;
  if (r_min >= 0.5)
    throw ParamError("shift_rigidity_margin: 2*r1 + r_step >= 1/2");
  const int j_max = (int)std::floor((0.5 - 2.0 * r1) / r_step + 1e-12);
  const int stride = std::max(1, (int)std::llround(0.016 / r_step));
  const double t_step = stride * r_step;
  const int n_t = (int)std::floor((win_hi - win_lo) / t_step + 1e-12) + 1;

  // lattices win_lo ± 2 r1 + m * r_step hold every needed phi_y argument
  const long long mp_lo = 1, mp_hi = (long long)stride * (n_t - 1) + j_max;
  const long long mm_lo = -(long long)j_max,
                  mm_hi = (long long)stride * (n_t - 1) - 1;
  const double off_p = win_lo + 2.0 * r1, off_m = win_lo - 2.0 * r1;
  if (!phi_y.in_domain(cplx(off_p + (double)mp_hi * r_step, 0.0)) ||
      !phi_y.in_domain(cplx(off_m + (double)mm_lo * r_step, 0.0)) ||
      !phi_x.in_domain(cplx(win_lo, 0.0)) ||
      !phi_x.in_domain(cplx(win_lo + (n_t - 1) * t_step, 0.0)))
    throw DomainError("shift_rigidity_margin: window (plus offsets) exceeds "
                      "a phi domain");

  std::vector<cplx> xv((size_t)n_t);
  for (int i = 0; i < n_t; ++i)
    xv[(size_t)i] = phi_x.eval(cplx(win_lo + i * t_step, 0.0));

  std::vector<cplx> yp((size_t)(mp_hi - mp_lo + 1)),
      ym((size_t)(mm_hi - mm_lo + 1));
  for (long long m = mp_lo; m <= mp_hi; ++m)
    yp[(size_t)(m - mp_lo)] = phi_y.eval(cplx(off_p + (double)m * r_step, 0.0));
  for (long long m = mm_lo; m <= mm_hi; ++m)
    ym[(size_t)(m - mm_lo)] = phi_y.eval(cplx(off_m + (double)m * r_step, 0.0));

  RigidityResult res;
  res.margin = std::numeric_limits<double>::infinity();
  res.n_r = 2 * j_max;
  res.n_t = n_t;
  for (int j = 1; j <= j_max; ++j) {
    double sup_p = 0.0, sup_m = 0.0;
    for (int i = 0; i < n_t; ++i) {
      const long long base = (long long)stride * i;
      sup_p = std::max(sup_p,
                       std::abs(yp[(size_t)(base + j - mp_lo)] - xv[(size_t)i]));
      sup_m = std::max(sup_m,
                       std::abs(ym[(size_t)(base - j - mm_lo)] - xv[(size_t)i]));
    }
    const double r = 2.0 * r1 + j * r_step;
    if (sup_p < res.margin) {
      res.margin = sup_p;
      res.argmin_r = r;
    }
    if (sup_m < res.margin) {
      res.margin = sup_m;
      res.argmin_r = -r;
    }
  }
  return res;
}

BandLimitedSignal g2(const PhiFunction& phi, double T, double dt) {
  if (!phi.in_domain(cplx(-T, 0.0)) || !phi.in_domain(cplx(T, 0.0)))
    throw DomainError("g2: [-T, T] outside phi domain");
  const double scale = phi.params.delta / (2.0 * phi.params.K1);
  if (!(phi.params.K1 > 0.0)) throw ParamError("g2: params.K1 not set");
  const double band = phi.params.a / 2.0 + phi.params.delta / 2.0;
  return make_signal(T, dt, -band, band, true, [&phi, scale](double x) {
    return cplx(scale * phi.eval(cplx(x, 0.0)).real(), 0.0);
  });
}

std::pair<BandLimitedSignal, PerturbReport> perturb_step(
    const BandLimitedSignal& f, const PhiFunction& phi,
    const PhiFunction* phi_second) {
  const double half_a = phi.params.a / 2.0;
  if (f.band_lo < -half_a - 1e-12 || f.band_hi > half_a + 1e-12)
    throw ParamError("perturb_step: decomposition error (f band exceeds "
                     "[-a/2, a/2])");
  if (!f.real_kind)
    throw ParamError("perturb_step: f must be a real-kind signal");

  const BandLimitedSignal g1 = f;  // identity band truncation
  const BandLimitedSignal gs = g2(phi, f.T, f.dt);
  BandLimitedSignal g = gs;
  for (std::size_t i = 0; i < g.samples.size(); ++i)
    g.samples[i] += g1.samples[i];
  g.band_lo = -(half_a + phi.params.delta / 2.0);
  g.band_hi = half_a + phi.params.delta / 2.0;

  PerturbReport rep;
  const MetricResult mr = metric_d(g, f, 20);
  rep.dist_value = mr.value;
  rep.dist_tail = mr.tail_bound;
  rep.dist_ok = mr.value + mr.tail_bound < phi.params.delta;
  rep.g1_band_lo = f.band_lo;
  rep.g1_band_hi = f.band_hi;
  rep.g2_band_lo = half_a;
  rep.g2_band_hi = half_a + phi.params.delta / 2.0;
  rep.bands_disjoint = rep.g1_band_hi <= rep.g2_band_lo + 1e-15;
  rep.g2_sup = gs.sup_abs();
  double resub = 0.0;
  for (std::size_t i = 0; i < g.samples.size(); ++i)
    resub = std::max(resub, std::abs(g.samples[i] - gs.samples[i] -
                                     g1.samples[i]));
  rep.resub_sup = resub;
  if (phi_second != nullptr) {
    const RigidityResult rr =
        shift_rigidity_margin(phi, *phi_second, 1e-2, -10.0, 10.0);
    rep.rigidity_checked = true;
    rep.rigidity_margin = rr.margin;
    rep.rigidity_argmin = rr.argmin_r;
  }
  return {g, rep};
}

std::vector<LadderStepSpec> ladder_schedule(int steps, int M, int M1, double c,
                                            double T) {
  if (steps < 1 || steps > 5)
    throw ParamError("ladder_schedule: steps must be in [1, 5]");
  std::vector<LadderStepSpec> out;
  double eps_n = 1.0;
  for (int n = 1; n <= steps; ++n) {
    LadderStepSpec s;
    s.n = n;
    s.eps_n = eps_n;
    s.eps_next = eps_n / 2.0;
    s.a_n = 2.0 - std::ldexp(1.0, 1 - n);         // 2 - 2^{1-n}
    const double a_gap = std::ldexp(1.0, -n);     // a_{n+1} - a_n
    s.delta_n =
        std::min({1.0 / (double)(n + 1), s.eps_next / 2.0, a_gap});
    s.L_n = std::ldexp(1.0, 4 + n);
    s.kernel = make_chi1(s.delta_n);
    s.params = make_params(s.a_n, s.delta_n, s.L_n, M, M1, c, s.kernel);
    const int half =
        (int)std::ceil(s.params.E + 1.0 + 2.0 * (M1 + 1) + T + 8.0);
    s.window_lo = -half;
    s.window_hi = half;
    out.push_back(std::move(s));
    eps_n /= 2.0;
  }
  return out;
}

IterateReport iterate_embedding(
    const std::vector<LadderStepSpec>& schedule,
    const std::vector<std::vector<MarkerSequence>>& markers_per_step,
    double T, double dt, std::vector<BandLimitedSignal>* h_out) {
  const int steps = (int)schedule.size();
  if (steps < 1 || steps > 5)
    throw ParamError("iterate_embedding: need 1..5 schedule steps");
  if ((int)markers_per_step.size() < steps)
    throw ParamError("iterate_embedding: markers missing for some steps");
  const std::size_t n_samples = markers_per_step[0].size();
  if (n_samples == 0)
    throw ParamError("iterate_embedding: no sample markers");
  for (int n = 0; n < steps; ++n)
    if (markers_per_step[(size_t)n].size() != n_samples)
      throw ParamError("iterate_embedding: unequal sample counts per step");

  // h_1 = 0 (base case); accumulate g2 per step
  std::vector<BandLimitedSignal> h((size_t)n_samples);
  for (auto& s : h)
    s = make_signal(T, dt, -1.0, 1.0, true,
                    [](double) { return cplx(0.0, 0.0); });

  IterateReport rep;
  rep.eps2 = schedule[0].eps_next;
  rep.pass = true;
  for (int n = 0; n < steps; ++n) {
    const LadderStepSpec& sp = schedule[(size_t)n];
    IterateStep st;
    st.n = sp.n;
    st.a_n = sp.a_n;
    st.delta_n = sp.delta_n;
    st.L_n = sp.L_n;
    st.E_n = sp.params.E;
    st.eps_next = sp.eps_next;
    double worst = 0.0;
    for (std::size_t i = 0; i < n_samples; ++i) {
      const PhiFunction phi =
          build_phi(markers_per_step[(size_t)n][i], sp.params, sp.kernel);
      const BandLimitedSignal gi = g2(phi, T, dt);
      worst = std::max(worst, gi.sup_abs());
      for (std::size_t j = 0; j < h[i].samples.size(); ++j)
        h[i].samples[j] += gi.samples[j];
    }
    st.max_step_sup = worst;
    st.ok = worst <= sp.delta_n / 2.0 + 1e-12;
    if (worst >= sp.eps_next)
      throw ParamError("iterate_embedding: ladder violation at step " +
                       std::to_string(sp.n));
    rep.pass = rep.pass && st.ok;
    rep.partial_sum += worst;
    rep.steps.push_back(st);
  }
  rep.cauchy_ok = rep.partial_sum < rep.eps2;
  rep.pass = rep.pass && rep.cauchy_ok;
  if (h_out != nullptr) *h_out = std::move(h);
  return rep;
}

}  // namespace flowembed
