#include "flowembed/serialize.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace flowembed {

ojson json_num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ojson marker_to_json(const MarkerSequence& m) {
  ojson j;
  j["schema"] = "flowembed.marker/1";
  j["lo"] = m.lo;
  j["hi"] = m.hi;
  j["M"] = m.M;
  j["M1"] = m.M1;
  ojson vals = ojson::array();
  for (const auto& [n, v] : m.values) vals.push_back(ojson::array({n, v}));
  j["values"] = std::move(vals);
  return j;
}

MarkerSequence marker_from_json(const ojson& j) {
  MarkerSequence m;
  m.lo = j.at("lo").get<int>();
  m.hi = j.at("hi").get<int>();
  m.M = j.value("M", 10);
  m.M1 = j.value("M1", 25);
  for (const auto& pair : j.at("values")) {
    if (!pair.is_array() || pair.size() != 2)
      throw ParamError("marker JSON: values entries must be [index, value]");
    m.values[pair.at(0).get<int>()] = pair.at(1).get<double>();
  }
  return m;
}

ojson tiling_to_json(const IntervalTiling& t) {
  ojson j;
  j["schema"] = "flowembed.tiling/1";
  j["H"] = t.H;
  j["lo"] = t.lo;
  j["hi"] = t.hi;
  j["valid_lo"] = t.valid_lo;
  j["valid_hi"] = t.valid_hi;
  ojson cells = ojson::array();
  for (const auto& [n, iv] : t.cells)
    cells.push_back(ojson::array({n, iv.first, iv.second}));
  j["cells"] = std::move(cells);
  return j;
}

ojson geometry_to_json(const GeometryReport& g) {
  ojson j;
  j["schema"] = "flowembed.geometry/1";
  j["pass"] = g.pass;
  j["value_ok"] = g.value_ok;
  j["ball_ok"] = g.ball_ok;
  j["length_ok"] = g.length_ok;
  j["M2"] = g.M2;
  j["min_length"] = json_num(g.min_length);
  j["n_cells"] = g.n_cells;
  j["violations"] = g.violations;
  return j;
}

ojson params_to_json(const EmbeddingParams& p) {
  ojson j;
  j["schema"] = "flowembed.params/1";
  j["a"] = p.a;
  j["delta"] = p.delta;
  j["b"] = p.b;
  j["L"] = p.L;
  j["r1"] = p.r1;
  j["theta_L"] = p.theta_L;
  j["E"] = p.E;
  j["K1"] = p.K1;
  j["M"] = p.M;
  j["M1"] = p.M1;
  j["M2"] = p.M2;
  j["c"] = p.c;
  j["H"] = p.H;
  return j;
}

EmbeddingParams params_from_json(const ojson& j) {
  EmbeddingParams p;
  p.a = j.at("a").get<double>();
  p.delta = j.at("delta").get<double>();
  p.b = j.at("b").get<double>();
  p.L = j.at("L").get<double>();
  p.r1 = j.at("r1").get<double>();
  p.theta_L = j.at("theta_L").get<double>();
  p.E = j.at("E").get<double>();
  p.K1 = j.at("K1").get<double>();
  p.M = j.at("M").get<int>();
  p.M1 = j.at("M1").get<int>();
  p.M2 = j.at("M2").get<double>();
  p.c = j.at("c").get<double>();
  p.H = j.at("H").get<double>();
  return p;
}

ojson param_report_to_json(const ParamReport& r) {
  ojson j;
  j["schema"] = "flowembed.param_report/1";
  j["pass"] = r.pass;
  j["analytic_pass"] = r.analytic_pass;
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["margin"] = json_num(c.margin);
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

ojson signal_header_json(const BandLimitedSignal& s) {
  ojson j;
  j["schema"] = "flowembed.signal/1";
  j["T"] = s.T;
  j["dt"] = s.dt;
  j["band_lo"] = s.band_lo;
  j["band_hi"] = s.band_hi;
  j["real_kind"] = s.real_kind;
  j["n_samples"] = (long long)s.samples.size();
  return j;
}

void signal_to_csv(const BandLimitedSignal& s, std::ostream& out) {
  out << (s.real_kind ? "x,value\n" : "x,re,im\n");
  out.precision(17);
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    out << s.x_of((long long)i) << "," << s.samples[i].real();
    if (!s.real_kind) out << "," << s.samples[i].imag();
    out << "\n";
  }
}

ojson spectrum_to_json(const SpectrumReport& r) {
  ojson j;
  j["schema"] = "flowembed.spectrum/1";
  j["T"] = r.T;
  j["dt"] = r.dt;
  j["n_samples"] = r.n_samples;
  j["band_lo"] = r.band_lo;
  j["band_hi"] = r.band_hi;
  j["widen"] = r.widen;
  j["leakage"] = json_num(r.leakage);
  return j;
}

ojson zeros_to_json(const ZeroReport& r) {
  ojson j;
  j["schema"] = "flowembed.zeros/1";
  ojson fs = ojson::array();
  for (const auto& f : r.findings) {
    ojson e;
    e["center"] = f.center;
    e["site"] = f.site;
    e["winding"] = f.winding;
    e["contour_ok"] = f.contour_ok;
    e["radius"] = f.radius;
    e["zero_re"] = json_num(f.zero.real());
    e["zero_im"] = json_num(f.zero.imag());
    e["newton_ok"] = f.newton_ok;
    e["dist_to_center"] = json_num(f.dist_to_center);
    fs.push_back(std::move(e));
  }
  j["findings"] = std::move(fs);
  j["grid_total"] = r.grid_total;
  j["grid_in_disk"] = r.grid_in_disk;
  j["grid_uncertifiable"] = r.grid_uncertifiable;
  j["grid_certified"] = r.grid_certified;
  j["offdisk_min_abs"] = json_num(r.offdisk_min_abs);
  j["violations"] = r.violations;
  j["windings_all_one"] = r.windings_all_one;
  j["zeros_confined"] = r.zeros_confined;
  j["offdisk_ok"] = r.offdisk_ok;
  j["pass"] = r.pass;
  return j;
}

ojson rigidity_to_json(const RigidityResult& r) {
  ojson j;
  j["schema"] = "flowembed.rigidity/1";
  j["margin"] = json_num(r.margin);
  j["argmin_r"] = r.argmin_r;
  j["n_r"] = r.n_r;
  j["n_t"] = r.n_t;
  return j;
}

ojson perturb_to_json(const PerturbReport& r) {
  ojson j;
  j["schema"] = "flowembed.perturb/1";
  j["dist_value"] = json_num(r.dist_value);
  j["dist_tail"] = json_num(r.dist_tail);
  j["dist_ok"] = r.dist_ok;
  j["g1_band"] = ojson::array({r.g1_band_lo, r.g1_band_hi});
  j["g2_band"] = ojson::array({r.g2_band_lo, r.g2_band_hi});
  j["bands_disjoint"] = r.bands_disjoint;
  j["resub_sup"] = json_num(r.resub_sup);
  j["g2_sup"] = json_num(r.g2_sup);
  j["rigidity_checked"] = r.rigidity_checked;
  if (r.rigidity_checked) {
    j["rigidity_margin"] = json_num(r.rigidity_margin);
    j["rigidity_argmin"] = r.rigidity_argmin;
  }
  return j;
}

ojson iterate_to_json(const IterateReport& r) {
  ojson j;
  j["schema"] = "flowembed.iterate/1";
  ojson steps = ojson::array();
  for (const auto& s : r.steps) {
    ojson e;
    e["n"] = s.n;
    e["a_n"] = s.a_n;
    e["delta_n"] = s.delta_n;
    e["L_n"] = s.L_n;
    e["E_n"] = s.E_n;
    e["eps_next"] = s.eps_next;
    e["max_step_sup"] = json_num(s.max_step_sup);
    e["ok"] = s.ok;
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  j["partial_sum"] = json_num(r.partial_sum);
  j["eps2"] = r.eps2;
  j["cauchy_ok"] = r.cauchy_ok;
  j["pass"] = r.pass;
  return j;
}

ojson boundary_to_json(const BoundaryReport& r) {
  ojson j;
  j["schema"] = "flowembed.boundary/1";
  j["probes"] = r.probes;
  j["passed"] = r.passed;
  j["fraction"] = r.fraction;
  j["all_pass"] = r.all_pass;
  j["failures"] = r.failures;
  return j;
}

ojson roundtrip_to_json(const RoundtripReport& r) {
  ojson j;
  j["schema"] = "flowembed.roundtrip/1";
  j["samples"] = r.samples;
  j["max_roundtrip"] = json_num(r.max_roundtrip);
  j["max_equivariance"] = json_num(r.max_equivariance);
  j["pass"] = r.pass;
  return j;
}

ojson strong_to_json(const StrongEmbedReport& r) {
  ojson j;
  j["schema"] = "flowembed.strong_embed/1";
  j["r_max"] = r.r_max;
  j["r_step"] = r.r_step;
  j["threshold"] = r.threshold;
  ojson pairs = ojson::array();
  for (const auto& p : r.pairs) {
    ojson e;
    e["state_a"] = p.state_a;
    e["state_b"] = p.state_b;
    e["on_orbit"] = p.on_orbit;
    e["true_shift"] = p.true_shift;
    ojson flags = ojson::array();
    for (const auto& f : p.flags)
      flags.push_back(ojson::array({f.r, f.dist}));
    e["flags"] = std::move(flags);
    e["min_unflagged"] = json_num(p.min_unflagged);
    e["ok"] = p.ok;
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  j["pass"] = r.pass;
  return j;
}

void write_json_file(const ojson& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParamError("cannot open for writing: " + path);
  out << j.dump(2) << "\n";
}

ojson read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open: " + path);
  ojson j;
  in >> j;
  return j;
}

}  // namespace flowembed
