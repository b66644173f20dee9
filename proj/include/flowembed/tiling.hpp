#pragma once
// Equivariant Voronoi interval tilings driven by marker sequences.
//
// Sites live at (n, 1/phi_n) for positive marker values; cells are the traces
// of the planar Voronoi regions on the line y = -H, H = (M1+1)^2.  Each
// pairwise constraint is linear in u, so a cell is an interval:
//   boundary(i, j) = (n_i+n_j)/2 + (h_j-h_i)(2H+h_i+h_j) / (2(n_j-n_i)).
// The symmetric midpoint form keeps floating-point cells shift-covariant to
// ~1 ulp; an exact rational path is available for the equivariance identity.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowembed/common.hpp"

namespace flowembed {

struct MarkerSequence {
  int lo = 0, hi = 0;            // inclusive index window
  std::map<int, double> values;  // phi(T^n x) in [0,1]; absent means 0
  int M = 10;                    // separation of positive values
  int M1 = 25;                   // coverage radius (every 2*M1 window has a 1)

  double value(int n) const {
    auto it = values.find(n);
    return it == values.end() ? 0.0 : it->second;
  }
  MarkerSequence shifted(int k) const;  // index shift: value'(n) = value(n+k)
};

// empty list = valid; otherwise human-readable violations
std::vector<std::string> validate_marker(const MarkerSequence& m);

struct VoronoiSite {
  int n;
  double height;  // = 1/value(n) >= 1
};

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<VoronoiSite> sites(const MarkerSequence& m);  // throws ValidationError

using Interval = std::pair<double, double>;
using Cell = std::optional<Interval>;

struct IntervalTiling {
  double H = 0.0;
  int lo = 0, hi = 0;
  int valid_lo = 0, valid_hi = 0;  // indices unaffected by window truncation
  std::map<int, Interval> cells;   // nonempty cells only

  Cell cell(int n) const {
    auto it = cells.find(n);
    return it == cells.end() ? Cell{} : Cell{it->second};
  }
};

Cell voronoi_interval(const std::vector<VoronoiSite>& ss, int n, double H);
IntervalTiling build_tiling(const MarkerSequence& m);

// max Hausdorff distance between the shifted tiling and the shifted cells of
// the original, over the common valid range
double shift_equivariance_defect(const MarkerSequence& m, int k);
// rational-arithmetic path: true iff the shifted cells agree exactly
bool shift_equivariance_exact(const MarkerSequence& m, int k);

// worst endpoint mismatch between consecutive nonempty cells in valid range
double coverage_defect(const IntervalTiling& t);

struct GeometryReport {
  bool pass = false;
  bool value_ok = false;   // nonempty cell => site value > 1/2
  bool ball_ok = false;    // nonempty cell inside B_{M1+1}(n)
  bool length_ok = false;  // nonempty cell length >= 2*M2
  double M2 = 0.0;
  double min_length = 0.0;
  int n_cells = 0;
  std::vector<std::string> violations;
};
GeometryReport check_geometry(const IntervalTiling& t, const MarkerSequence& m, double c);

Cell int_e(const Cell& cell, double E);

}  // namespace flowembed
