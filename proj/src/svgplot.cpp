#include "flowembed/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "flowembed/common.hpp"

namespace flowembed {

namespace {

constexpr int kW = 900;
constexpr int kH = 360;
constexpr int kPad = 45;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Canvas {
  std::ostringstream os;
  Canvas(int w, int h) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
       << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }
  void line(double x1, double y1, double x2, double y2, const char* stroke,
            double width = 1.0) {
    os << "<line x1=\"" << fmt(x1) << "\" y1=\"" << fmt(y1) << "\" x2=\""
       << fmt(x2) << "\" y2=\"" << fmt(y2) << "\" stroke=\"" << stroke
       << "\" stroke-width=\"" << fmt(width) << "\"/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill) {
    os << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
       << fmt(w) << "\" height=\"" << fmt(h) << "\" fill=\"" << fill
       << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 12) {
    os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\""
       << size << "\" font-family=\"monospace\">" << s << "</text>\n";
  }
  void poly(const std::vector<std::pair<double, double>>& pts,
            const char* stroke) {
    os << "<polyline fill=\"none\" stroke=\"" << stroke
       << "\" stroke-width=\"1.2\" points=\"";
    for (const auto& [x, y] : pts) os << fmt(x) << ',' << fmt(y) << ' ';
    os << "\"/>\n";
  }
  std::string done() {
    os << "</svg>\n";
    return os.str();
  }
};

std::string gray(double u) {
  // u in [0,1]; 0 -> black, 1 -> white
  const int g = (int)std::lround(255.0 * std::clamp(u, 0.0, 1.0));
  std::ostringstream os;
  os << "rgb(" << g << ',' << g << ',' << g << ')';
  return os.str();
}

}  // namespace

std::string svg_tiling(const MarkerSequence& m, const IntervalTiling& t,
                       double lo, double hi) {
  Canvas c(kW, 200);
  const double span = hi - lo;
  auto px = [&](double x) {
    return kPad + (x - lo) / span * (kW - 2 * kPad);
  };
  const double y0 = 130.0;
  c.line(px(lo), y0, px(hi), y0, "black");
  for (const auto& [n, cell] : t.cells) {
    if (cell.second < lo || cell.first > hi) continue;
    const double a = std::max(cell.first, lo), b = std::min(cell.second, hi);
    c.rect(px(a), y0 - 18, px(b) - px(a), 36,
           (n % 2 == 0) ? "#cfe3ff" : "#ffe3cf");
    c.line(px(a), y0 - 22, px(a), y0 + 22, "#444", 0.8);
  }
  for (const auto& [n, v] : m.values) {
    if (n < lo || n > hi) continue;
    c.line(px((double)n), y0, px((double)n), y0 - 60.0 * v, "crimson", 1.6);
  }
  c.text(kPad, 30, "voronoi tiling, sites as ticks (height = marker value)");
  c.text(px(lo) - 10, y0 + 40, fmt(lo));
  c.text(px(hi) - 30, y0 + 40, fmt(hi));
  return c.done();
}

std::string svg_phi_heatmap(const PhiFunction& phi, double re_lo, double re_hi,
                            double im, int nx, int ny) {
  nx = std::max(nx, 2);
  ny = std::max(ny, 2);
  Canvas c(kW, kH);
  const double pw = (double)(kW - 2 * kPad) / nx;
  const double ph = (double)(kH - 2 * kPad) / ny;
  std::vector<double> vals((std::size_t)nx * ny);
  double vmax = 1e-300;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = re_lo + (re_hi - re_lo) * (i + 0.5) / nx;
      const double y = -im + 2.0 * im * (j + 0.5) / ny;
      const double a = std::abs(phi.eval(cplx(x, y)));
      vals[(std::size_t)j * nx + i] = a;
      vmax = std::max(vmax, a);
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double a = vals[(std::size_t)j * nx + i];
      // log scale over 6 decades below the max
      const double u = 1.0 + std::log10(std::max(a / vmax, 1e-6)) / 6.0;
      c.rect(kPad + i * pw, kH - kPad - (j + 1) * ph, pw + 0.5, ph + 0.5,
             gray(u));
    }
  c.text(kPad, 25, "|Phi(x+iy)|, log gray (dark = near zero), x in [" +
                       fmt(re_lo) + ", " + fmt(re_hi) + "], |y| <= " + fmt(im));
  return c.done();
}

std::string svg_spectrum(const BandLimitedSignal& f) {
  const auto spec = spectrum_magnitudes(f);
  double mmax = 1e-300;
  for (const auto& [nu, mag] : spec) mmax = std::max(mmax, mag);
  const double nu_lo = spec.front().first, nu_hi = spec.back().first;
  Canvas c(kW, kH);
  auto px = [&](double nu) {
    return kPad + (nu - nu_lo) / (nu_hi - nu_lo) * (kW - 2 * kPad);
  };
  auto py = [&](double mag) {
    // dB scale, 160 dB floor
    const double db = 20.0 * std::log10(std::max(mag / mmax, 1e-8));
    return kH - kPad + db / 160.0 * (kH - 2 * kPad);
  };
  c.rect(px(f.band_lo), kPad, px(f.band_hi) - px(f.band_lo), kH - 2 * kPad,
         "#e8f4e8");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(spec.size());
  for (const auto& [nu, mag] : spec) pts.emplace_back(px(nu), py(mag));
  c.poly(pts, "navy");
  c.line(kPad, kH - kPad, kW - kPad, kH - kPad, "black");
  c.line(kPad, kPad, kPad, kH - kPad, "black");
  c.text(kPad, 25, "spectrum (dB rel. max), declared band shaded [" +
                       fmt(f.band_lo) + ", " + fmt(f.band_hi) + "]");
  c.text(px(nu_lo), kH - kPad + 25, fmt(nu_lo));
  c.text(px(nu_hi) - 40, kH - kPad + 25, fmt(nu_hi));
  return c.done();
}

std::string svg_curve(const std::vector<std::pair<double, double>>& pts,
                      const std::string& title) {
  Canvas c(kW, kH);
  if (!pts.empty()) {
    double xlo = pts.front().first, xhi = xlo, ylo = pts.front().second,
           yhi = ylo;
    for (const auto& [x, y] : pts) {
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
    if (xhi - xlo < 1e-300) xhi = xlo + 1.0;
    if (yhi - ylo < 1e-300) yhi = ylo + 1.0;
    auto px = [&](double x) {
      return kPad + (x - xlo) / (xhi - xlo) * (kW - 2 * kPad);
    };
    auto py = [&](double y) {
      return kH - kPad - (y - ylo) / (yhi - ylo) * (kH - 2 * kPad);
    };
    std::vector<std::pair<double, double>> sc;
    sc.reserve(pts.size());
    for (const auto& [x, y] : pts) sc.emplace_back(px(x), py(y));
    c.poly(sc, "navy");
    c.line(kPad, kH - kPad, kW - kPad, kH - kPad, "black");
    c.line(kPad, kPad, kPad, kH - kPad, "black");
    c.text(px(xlo), kH - kPad + 25, fmt(xlo));
    c.text(px(xhi) - 40, kH - kPad + 25, fmt(xhi));
    c.text(kPad + 4, py(ylo) - 4, fmt(ylo));
    c.text(kPad + 4, py(yhi) + 14, fmt(yhi));
  }
  c.text(kPad, 25, title);
  return c.done();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ParamError("cannot open for writing: " + path);
  os << content;
  if (!os) throw ParamError("write failed: " + path);
}

}  // namespace flowembed
