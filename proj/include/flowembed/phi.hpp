#pragma once
// The tiling-like band-limited map
//   Phi(x)(z) = sum_n Theta_L(z - n) * integral_{W0(x,n)} chi1(z - t) dt
// together with its verification surface: sup bound, shift equivariance,
// spectral support, zero location/certification, shift rigidity, the g2
// perturbation signal, and the finite embedding iteration ladder.
//
// Evaluation strategy: writing Theta_L(w) = (e^{i om+ w} - e^{i om- w})/(2i)
// with om± = pi b ± pi/L and chi1(w) = int_{-s}^{s} ghat(xi) e^{2 pi i xi w} dxi
// (s = delta/8), the double sum factorizes as
//   Phi(z) = (1/2i) [ e^{i om+ z} Q+(z) - e^{i om- z} Q-(z) ],
//   Q±(z)  = int ghat(xi) e^{2 pi i xi z} S±(xi) dxi,
//   S±(xi) = sum_n e^{-i om± n} int_{W0(x,n)} e^{-2 pi i xi t} dt.
// The S± factors depend only on the tiling and are tabulated once on
// Gauss-Legendre panel nodes over [-s, s]; each evaluation is then a single
// pass over the nodes.  All cells of the finite tiling always enter the sum,
// so the truncation tail the evaluation tolerance budgets for is exactly
// zero; eval_tolerance governs quadrature panel sizing.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowembed/common.hpp"
#include "flowembed/kernel.hpp"
#include "flowembed/signals.hpp"
#include "flowembed/theta.hpp"
#include "flowembed/tiling.hpp"

namespace flowembed {

struct PhiFunction {
  MarkerSequence marker;  // synthetic (unvalidated) for toy tilings
  IntervalTiling tiling;
  EmbeddingParams params;
  SpectralKernel kernel;
  double eval_tolerance = 1e-9;

  // spectral factorization state
  double omega_p = 0.0, omega_m = 0.0;
  std::vector<double> nodes;  // xi panel nodes over [-s, s]
  std::vector<double> wg;     // GL weight * ghat(xi) per node
  std::vector<cplx> Sp, Sm;   // site sums per node
  double dom_re_lo = 0.0, dom_re_hi = 0.0;  // valid range shrunk by E+1

  bool in_domain(cplx z) const;
  cplx eval(cplx z) const;                      // throws DomainError outside
  std::pair<cplx, cplx> eval_d(cplx z) const;   // (Phi, dPhi/dz)
};

// Standard path: validates the marker, builds its tiling, precomputes S±.
PhiFunction build_phi(const MarkerSequence& m, const EmbeddingParams& p,
                      const SpectralKernel& kernel, double eval_tol = 1e-9);

// Toy/test path: accepts hand-built cells (site index -> interval) and an
// explicit valid range, skipping marker validation.  An empty cell map gives
// the zero map.
PhiFunction build_phi_from_cells(const std::map<int, Interval>& cells,
                                 int valid_lo, int valid_hi,
                                 const EmbeddingParams& p,
                                 const SpectralKernel& kernel,
                                 double eval_tol = 1e-9);

// max over grid of |Phi(T^k x)(z) - Phi(x)(z+k)|.
double equivariance_defect(const PhiFunction& phi, int k,
                           const std::vector<cplx>& grid);

struct SpectrumReport {
  double T = 0.0, dt = 0.0;
  int n_samples = 0;
  double band_lo = 0.0, band_hi = 0.0;
  double widen = 0.0;    // windowing caveat: band widened by 3/T per side
  double leakage = 0.0;  // energy fraction outside the widened band
};

SpectrumReport spectral_support_report(const PhiFunction& phi, double T,
                                       double dt = 0.125);

// Sample Phi restricted to the real line as a complex band-limited signal
// with declared band (a/2, a/2 + delta/2).
BandLimitedSignal sample_phi_real(const PhiFunction& phi, double T, double dt);

struct ZeroFinding {
  double center = 0.0;     // candidate n + Lm
  int site = 0;            // owning cell's site n
  int winding = 0;
  bool contour_ok = true;  // false if every retry radius dipped too low
  double radius = 0.0;     // contour radius actually used
  cplx zero;               // Newton-refined zero (valid if newton_ok)
  bool newton_ok = false;
  double dist_to_center = 0.0;
};

struct ZeroReport {
  std::vector<ZeroFinding> findings;
  long long grid_total = 0;
  long long grid_in_disk = 0;        // grid points inside a candidate disk
  long long grid_uncertifiable = 0;  // Re z outside Int_E of its cell
  long long grid_certified = 0;      // off-disk points checked against theta_L/2
  double offdisk_min_abs = 0.0;
  std::vector<std::string> violations;
  bool windings_all_one = true;
  bool zeros_confined = true;
  bool offdisk_ok = true;
  bool pass = false;
};

// Candidate centers are the lattice points n + Lm lying in Int_{E+1} of the
// owning cell; each gets a winding count on the r1-circle (1024-node phase
// accumulation, radius retried within [r1/2, r1] if |Phi| dips below
// 10*eval_tolerance) and one Newton-refined zero.  The complement grid over
// re_range x [-1,1] is certified against |Phi| >= theta_L/2.
ZeroReport locate_zeros(const PhiFunction& phi, double re_lo, double re_hi,
                        double grid_hx = 0.05, double grid_hy = 0.1);

struct RigidityResult {
  double margin = 0.0;
  double argmin_r = 0.0;
  int n_r = 0;      // offsets scanned
  int n_t = 0;      // window samples per offset
};

// min over r in ±[2 r1 + r_step, 1/2] (step r_step) of
// sup_{t in [win_lo, win_hi]} |Phi(y)(t + r) - Phi(x)(t)|.  The t-grid step
// is an integer multiple of r_step so every t + r falls on one of two
// precomputable lattices.
RigidityResult shift_rigidity_margin(const PhiFunction& phi_x,
                                     const PhiFunction& phi_y, double r_step,
                                     double win_lo, double win_hi);

// g2 = (delta / 2 K1) Re(Phi restricted to R), sampled on [-T, T].
BandLimitedSignal g2(const PhiFunction& phi, double T = 36.0,
                     double dt = 0.125);

struct PerturbReport {
  double dist_value = 0.0, dist_tail = 0.0;
  bool dist_ok = false;  // dist_value + dist_tail < delta
  double g1_band_lo = 0.0, g1_band_hi = 0.0;
  double g2_band_lo = 0.0, g2_band_hi = 0.0;  // positive-frequency component
  bool bands_disjoint = false;
  double resub_sup = 0.0;  // sup |(g - g2) - g1|
  double g2_sup = 0.0;
  bool rigidity_checked = false;
  double rigidity_margin = 0.0, rigidity_argmin = 0.0;
};

// g = g1 + g2 with g1 the identity band truncation of f (f already lies in
// [-a/2, a/2]) and g2 from the phi pipeline; the optional second phi adds a
// shift-rigidity check between the two maps.
std::pair<BandLimitedSignal, PerturbReport> perturb_step(
    const BandLimitedSignal& f, const PhiFunction& phi,
    const PhiFunction* phi_second = nullptr);

struct LadderStepSpec {
  int n = 1;
  double a_n = 0.0, delta_n = 0.0, L_n = 0.0;
  double eps_n = 0.0, eps_next = 0.0;
  EmbeddingParams params;
  SpectralKernel kernel;
  int window_lo = 0, window_hi = 0;  // marker window large enough for E and T
};

// The finite epsilon ladder: eps_1 = 1, eps_{n+1} = eps_n / 2, a_n = 2 -
// 2^{1-n} increasing to a = 2, delta_n = min(1/(n+1), eps_{n+1}/2,
// a_{n+1}-a_n), L_n = 2^{4+n}; per-step params run the full selection rules.
std::vector<LadderStepSpec> ladder_schedule(int steps, int M = 10,
                                            int M1 = 25, double c = 1.02,
                                            double T = 36.0);

struct IterateStep {
  int n = 1;
  double a_n = 0.0, delta_n = 0.0, L_n = 0.0, E_n = 0.0;
  double eps_next = 0.0;
  double max_step_sup = 0.0;  // max over samples of sup |g2_n|
  bool ok = false;            // max_step_sup <= delta_n/2 (+ fp slack)
};

struct IterateReport {
  std::vector<IterateStep> steps;
  double partial_sum = 0.0;  // sum of per-step sups
  double eps2 = 0.5;
  bool cauchy_ok = false;  // partial_sum < eps2
  bool pass = false;
};

// Runs the perturbation step once per ladder step on each sample marker;
// h starts at 0 (the base case) and accumulates the g2 signals.  Throws
// ParamError if a step's sup distance reaches eps_{n+1} (ladder violation).
IterateReport iterate_embedding(
    const std::vector<LadderStepSpec>& schedule,
    const std::vector<std::vector<MarkerSequence>>& markers_per_step,
    double T = 36.0, double dt = 0.125,
    std::vector<BandLimitedSignal>* h_out = nullptr);

}  // namespace flowembed
