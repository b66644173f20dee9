#pragma once
// Theta_L(z) = e^{pi i b z} sin(pi z / L) and the certified parameter
// selection rules: r1 (zero-isolation radius), theta_L (off-disk lower
// bound), E (kernel tail cutoff), plus whole-record validation.
//
// All three selections are deterministic grid searches over power-of-2
// ladders with explicit Lipschitz safety margins, so the same inputs always
// produce the same constants.

#include <string>
#include <vector>

#include "flowembed/common.hpp"
#include "flowembed/kernel.hpp"

namespace flowembed {

struct EmbeddingParams {
  double a = 2.0;
  double delta = 0.8;
  double b = 2.4;  // = a + delta/2
  double L = 10.0;
  double r1 = 0.0;
  double theta_L = 0.0;
  double E = 0.0;
  double K1 = 0.0;
  int M = 10;
  int M1 = 25;
  double M2 = 0.0;  // = (c-1)*H*M/(H+2)
  double c = 1.02;
  double H = 676.0;  // = (M1+1)^2
};

// Theta_L at z.
cplx theta(cplx z, double L, double b);

// |Theta_L| via the closed-form modulus e^{-pi b y} * |sin(pi(x+iy)/L)|.
double theta_abs(cplx z, double L, double b);

// sup of |Theta_L| over the strip |Im z| <= 1 (closed form).
double theta_sup_norm(double L, double b);

// Largest ladder radius r1 = min(1/16,1/L)/2^j such that
// pi |b sin(pi z/L) + (1/L) cos(pi z/L)| > 3/L holds on the grid of the
// closed disk |z| <= r1 with a 10x modulus-of-continuity margin.
double select_r1(double L, double b, double grid_step = 1e-5);

// Raw grid check of the r1 inequality (no margin); used as a finer-grid
// oracle against select_r1's certified output.
bool r1_inequality_on_grid(double L, double b, double r, double grid_step);

// Certified positive lower bound for |Theta_L| on the strip minus the
// r1-disks around LZ, capped at 9/(16L).  Throws ParamError if the certified
// value is not positive (r1 too large for the grid step).
double theta_lower_bound(double L, double b, double r1,
                         double grid_step = 5e-4);

// Smallest ladder E = 16*2^j with
// theta_sup_norm * sup_{|y|<=1} tail(E, y) <= 0.45 * theta_L.
double select_E(double L, double b, double theta_L,
                const SpectralKernel& kernel, bool refined = false);

// One validation line: condition name, pass flag, signed margin (how far on
// the passing side; negative when failing).
struct ParamCheck {
  std::string name;
  bool pass = false;
  double margin = 0.0;
};

struct ParamReport {
  std::vector<ParamCheck> checks;
  bool pass = false;           // every check
  bool analytic_pass = false;  // every check except the M2 scale gate
};

ParamReport validate_params(const EmbeddingParams& p);

// Build a fully-populated record from the showcase knobs; runs the three
// selection rules and computes K1, M2, H.
EmbeddingParams make_params(double a, double delta, double L, int M, int M1,
                            double c, const SpectralKernel& kernel,
                            double r1_grid_step = 1e-5,
                            double theta_grid_step = 5e-4);

}  // namespace flowembed
