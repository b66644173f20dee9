#pragma once
// Minimal hand-rolled SVG renderers for diagnostics: tiling strips, |Phi|
// heatmaps, spectra, and generic curves.  No external dependencies.

#include <string>
#include <utility>
#include <vector>

#include "flowembed/phi.hpp"
#include "flowembed/signals.hpp"
#include "flowembed/tiling.hpp"

namespace flowembed {

// Horizontal strip of Voronoi cells over [lo, hi]; sites drawn as ticks whose
// height scales with the marker value.
std::string svg_tiling(const MarkerSequence& m, const IntervalTiling& t,
                       double lo, double hi);

// |Phi| over [re_lo, re_hi] x [-im, im] on an nx x ny grid, log-scaled
// grayscale with zeros dark.
std::string svg_phi_heatmap(const PhiFunction& phi, double re_lo, double re_hi,
                            double im, int nx, int ny);

// Magnitude spectrum of f with the declared band [band_lo, band_hi] shaded.
std::string svg_spectrum(const BandLimitedSignal& f);

// Generic polyline plot of (x, y) points with axes.
std::string svg_curve(const std::vector<std::pair<double, double>>& pts,
                      const std::string& title);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace flowembed
