// flowembed: build and check equivariant interval tilings, the band-limited
// map Phi, truncated solenoid flows, and the embedding pipelines.
//
// Exit codes: 0 success, 1 failed checks in an otherwise valid run,
// 2 configuration errors (error JSON on stderr).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "flowembed/common.hpp"
#include "flowembed/kernel.hpp"
#include "flowembed/marker_gen.hpp"
#include "flowembed/phi.hpp"
#include "flowembed/serialize.hpp"
#include "flowembed/svgplot.hpp"
#include "flowembed/verify.hpp"

namespace fe = flowembed;

namespace {

void emit(const fe::ojson& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << "\n";
  else
    fe::write_json_file(j, out_path);
}

void emit_error(const std::string& type, const std::string& message) {
  fe::ojson e;
  e["schema"] = "flowembed.error/1";
  e["type"] = type;
  e["message"] = message;
  std::cerr << e.dump(2) << "\n";
}

fe::EmbeddingParams load_or_default_params(const std::string& path) {
  if (path.empty()) return fe::desk_params();
  return fe::params_from_json(fe::read_json_file(path));
}

struct PhiBundle {
  fe::MarkerSequence marker;
  fe::EmbeddingParams params;
  fe::SpectralKernel kernel;
  fe::PhiFunction phi;
};

PhiBundle load_phi(const std::string& params_path,
                   const std::string& marker_path) {
  PhiBundle b;
  b.params = load_or_default_params(params_path);
  b.marker = fe::marker_from_json(fe::read_json_file(marker_path));
  b.kernel = fe::make_chi1(b.params.delta);
  b.phi = fe::build_phi(b.marker, b.params, b.kernel);
  return b;
}

void write_csv(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  fe::write_text_file(path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equivariant tilings, band-limited embeddings, solenoid flows"};
  app.require_subcommand(1);

  // ---- marker ----------------------------------------------------------
  auto* c_marker = app.add_subcommand("marker", "generate a marker sequence");
  std::uint64_t mk_seed = 7;
  int mk_lo = -300, mk_hi = 299, mk_m = 10, mk_m1 = 25, mk_period = 0;
  std::string mk_out;
  c_marker->add_option("--seed", mk_seed, "generator seed");
  c_marker->add_option("--lo", mk_lo, "window start (inclusive)");
  c_marker->add_option("--hi", mk_hi, "window end (inclusive)");
  c_marker->add_option("--M", mk_m, "separation bound M");
  c_marker->add_option("--M1", mk_m1, "coverage radius M1");
  c_marker->add_option("--period", mk_period,
                       "emit an exactly periodic marker (0 = random)");
  c_marker->add_option("--out", mk_out, "output JSON path (default stdout)");

  // ---- params ----------------------------------------------------------
  auto* c_params = app.add_subcommand("params", "select and validate the "
                                                "embedding parameter record");
  double pa_a = 2.0, pa_delta = 0.8, pa_L = 10.0, pa_c = 1.02;
  int pa_m = 10, pa_m1 = 25;
  bool pa_validate = false;
  std::string pa_out;
  c_params->add_option("--a", pa_a, "band width a");
  c_params->add_option("--delta", pa_delta, "kernel band delta");
  c_params->add_option("--L", pa_L, "Theta period L");
  c_params->add_option("--M", pa_m, "marker separation M");
  c_params->add_option("--M1", pa_m1, "marker coverage M1");
  c_params->add_option("--c", pa_c, "cell-length constant c");
  c_params->add_flag("--validate", pa_validate, "attach the validation report");
  c_params->add_option("--out", pa_out, "output JSON path (default stdout)");

  // ---- tile ------------------------------------------------------------
  auto* c_tile = app.add_subcommand("tile", "build the Voronoi interval tiling "
                                            "of a marker sequence");
  std::string ti_marker, ti_out, ti_plot;
  double ti_c = 1.02;
  bool ti_report = false;
  c_tile->add_option("--marker", ti_marker, "marker JSON path")->required();
  c_tile->add_option("--c", ti_c, "cell-length constant c");
  c_tile->add_flag("--report", ti_report, "attach geometry/coverage report");
  c_tile->add_option("--out", ti_out, "output JSON path (default stdout)");
  c_tile->add_option("--plot", ti_plot, "write a tiling SVG");

  // ---- phi -------------------------------------------------------------
  auto* c_phi = app.add_subcommand("phi", "band-limited map operations");
  c_phi->require_subcommand(1);
  std::string ph_params, ph_marker, ph_marker2, ph_out, ph_plot;
  double ph_relo = -20.0, ph_rehi = 20.0, ph_im = 1.0;
  int ph_nx = 120, ph_ny = 40;
  double ph_T = 200.0, ph_rstep = 1e-3;
  std::uint64_t ph_tones = 1;
  auto add_phi_common = [&](CLI::App* sc, bool need_marker2) {
    sc->add_option("--params", ph_params, "parameter record JSON (default: "
                                          "showcase record)");
    sc->add_option("--marker", ph_marker, "marker JSON path")->required();
    if (need_marker2)
      sc->add_option("--marker2", ph_marker2, "second marker JSON path");
    sc->add_option("--out", ph_out, "output JSON path (default stdout)");
  };
  auto* c_phi_eval = c_phi->add_subcommand("eval", "grid |Phi| evaluation");
  add_phi_common(c_phi_eval, false);
  c_phi_eval->add_option("--re-lo", ph_relo, "grid Re lower bound");
  c_phi_eval->add_option("--re-hi", ph_rehi, "grid Re upper bound");
  c_phi_eval->add_option("--im", ph_im, "grid |Im| bound");
  c_phi_eval->add_option("--nx", ph_nx, "grid columns");
  c_phi_eval->add_option("--ny", ph_ny, "grid rows");
  c_phi_eval->add_option("--plot", ph_plot, "write a |Phi| heatmap SVG");
  auto* c_phi_zeros = c_phi->add_subcommand("zeros", "locate and certify zeros");
  add_phi_common(c_phi_zeros, false);
  c_phi_zeros->add_option("--re-lo", ph_relo, "search Re lower bound");
  c_phi_zeros->add_option("--re-hi", ph_rehi, "search Re upper bound");
  auto* c_phi_rig = c_phi->add_subcommand("rigidity", "shift-rigidity margin "
                                                      "between two markers");
  add_phi_common(c_phi_rig, true);
  c_phi_rig->add_option("--r-step", ph_rstep, "offset grid step");
  auto* c_phi_spec = c_phi->add_subcommand("spectrum", "spectral support check");
  add_phi_common(c_phi_spec, false);
  c_phi_spec->add_option("--T", ph_T, "sampling window radius");
  c_phi_spec->add_option("--plot", ph_plot, "write a spectrum SVG");
  auto* c_phi_pert = c_phi->add_subcommand("perturb", "one perturbation step");
  add_phi_common(c_phi_pert, true);
  c_phi_pert->add_option("--tones-seed", ph_tones, "seed for the input signal");

  // ---- flow ------------------------------------------------------------
  auto* c_flow = app.add_subcommand("flow", "solenoid/suspension flows");
  c_flow->require_subcommand(1);
  std::string fl_system = "solenoid:4", fl_out;
  double fl_y0 = 0.0, fl_v0 = 0.0, fl_t = 24.0, fl_dt = 0.1;
  int fl_k0 = 0, fl_n = 2, fl_samples = 100, fl_probes = 64;
  double fl_fiber_lo = 0.0, fl_fiber_hi = 1.0, fl_gamma = 0.25, fl_tmax = 100.0;
  std::uint64_t fl_seed = 7;
  int fl_state = 0;
  double fl_height = 0.0;
  auto add_flow_common = [&](CLI::App* sc) {
    sc->add_option("--system", fl_system,
                   "solenoid:N | product:N:k | band:N | suspension:file");
    sc->add_option("--out", fl_out, "output path (default stdout)");
  };
  auto* c_fl_sim = c_flow->add_subcommand("simulate", "trajectory CSV");
  add_flow_common(c_fl_sim);
  c_fl_sim->add_option("--y0", fl_y0, "initial circle position");
  c_fl_sim->add_option("--k0", fl_k0, "initial fiber index");
  c_fl_sim->add_option("--v0", fl_v0, "initial interval fiber / height");
  c_fl_sim->add_option("--t", fl_t, "total time");
  c_fl_sim->add_option("--dt", fl_dt, "output step");
  auto* c_fl_ret = c_flow->add_subcommand("return", "first-return analysis");
  add_flow_common(c_fl_ret);
  c_fl_ret->add_option("--n", fl_n, "section S_n");
  c_fl_ret->add_option("--y0", fl_y0, "section point circle position");
  c_fl_ret->add_option("--t-max", fl_tmax, "bisection search horizon");
  auto* c_fl_conj = c_flow->add_subcommand("conjugacy", "suspension roundtrip");
  add_flow_common(c_fl_conj);
  c_fl_conj->add_option("--n", fl_n, "section S_n");
  c_fl_conj->add_option("--samples", fl_samples, "sample count");
  c_fl_conj->add_option("--seed", fl_seed, "sample seed");
  auto* c_fl_bound = c_flow->add_subcommand("boundary", "flow boundary probe");
  add_flow_common(c_fl_bound);
  c_fl_bound->add_option("--n", fl_n, "section S_n");
  c_fl_bound->add_option("--fiber-lo", fl_fiber_lo, "section fiber range lo");
  c_fl_bound->add_option("--fiber-hi", fl_fiber_hi, "section fiber range hi");
  c_fl_bound->add_option("--gamma", fl_gamma, "probe time scale");
  c_fl_bound->add_option("--probes", fl_probes, "probe count");
  c_fl_bound->add_option("--seed", fl_seed, "probe seed");
  auto* c_fl_susp = c_flow->add_subcommand(
      "suspend-embed", "sample the suspension embedding signal");
  add_flow_common(c_fl_susp);
  c_fl_susp->add_option("--state", fl_state, "cyclic base state id (0..119)");
  c_fl_susp->add_option("--height", fl_height, "suspension height in [0,1)");
  c_fl_susp->add_option("--seed", fl_seed, "fiber marker seed");

  // ---- verify-all ------------------------------------------------------
  auto* c_verify = app.add_subcommand("verify-all", "run the acceptance suites");
  std::uint64_t ve_seed = 7;
  std::vector<int> ve_criteria;
  std::string ve_out, ve_plot_dir;
  c_verify->add_option("--seed", ve_seed, "suite seed");
  c_verify->add_option("--criteria", ve_criteria,
                       "subset of suite indices 1..8 (default all)");
  c_verify->add_option("--out", ve_out, "report JSON path (default stdout)");
  c_verify->add_option("--plot-dir", ve_plot_dir, "write advisory SVG plots");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    emit_error("cli", e.what());
    return 2;
  }

  try {
    if (*c_marker) {
      const auto m =
          mk_period > 0
              ? fe::periodic_marker(mk_seed, mk_period, mk_lo, mk_hi, mk_m, mk_m1)
              : fe::random_marker(mk_seed, mk_lo, mk_hi, mk_m, mk_m1);
      emit(fe::marker_to_json(m), mk_out);
      return 0;
    }

    if (*c_params) {
      const auto kernel = fe::make_chi1(pa_delta);
      const auto p =
          fe::make_params(pa_a, pa_delta, pa_L, pa_m, pa_m1, pa_c, kernel);
      fe::ojson j = fe::params_to_json(p);
      bool ok = true;
      if (pa_validate) {
        const auto rep = fe::validate_params(p);
        j["report"] = fe::param_report_to_json(rep);
        ok = rep.analytic_pass;
      }
      emit(j, pa_out);
      return ok ? 0 : 1;
    }

    if (*c_tile) {
      const auto m = fe::marker_from_json(fe::read_json_file(ti_marker));
      const auto t = fe::build_tiling(m);
      fe::ojson j = fe::tiling_to_json(t);
      bool ok = true;
      if (ti_report) {
        const auto g = fe::check_geometry(t, m, ti_c);
        j["geometry"] = fe::geometry_to_json(g);
        j["coverage_defect"] = fe::json_num(fe::coverage_defect(t));
        ok = g.pass && fe::coverage_defect(t) < 1e-9;
      }
      if (!ti_plot.empty())
        fe::write_text_file(
            ti_plot, fe::svg_tiling(m, t, (double)t.valid_lo, (double)t.valid_hi));
      emit(j, ti_out);
      return ok ? 0 : 1;
    }

    if (*c_phi) {
      if (*c_phi_eval) {
        const auto b = load_phi(ph_params, ph_marker);
        fe::ojson j;
        j["schema"] = "flowembed.phi_eval/1";
        j["domain"] = {fe::json_num(b.phi.dom_re_lo),
                       fe::json_num(b.phi.dom_re_hi)};
        double sup = 0.0;
        fe::ojson rows = fe::ojson::array();
        for (int iy = 0; iy < ph_ny; ++iy) {
          fe::ojson row = fe::ojson::array();
          const double y = -ph_im + 2.0 * ph_im * (iy + 0.5) / ph_ny;
          for (int ix = 0; ix < ph_nx; ++ix) {
            const double x =
                ph_relo + (ph_rehi - ph_relo) * (ix + 0.5) / ph_nx;
            const double a = std::abs(b.phi.eval(fe::cplx(x, y)));
            sup = std::max(sup, a);
            row.push_back(fe::json_num(a));
          }
          rows.push_back(row);
        }
        j["sup_abs"] = fe::json_num(sup);
        j["K1"] = fe::json_num(b.params.K1);
        j["grid_abs"] = rows;
        if (!ph_plot.empty())
          fe::write_text_file(ph_plot,
                              fe::svg_phi_heatmap(b.phi, ph_relo, ph_rehi,
                                                  ph_im, ph_nx, ph_ny));
        emit(j, ph_out);
        return 0;
      }
      if (*c_phi_zeros) {
        const auto b = load_phi(ph_params, ph_marker);
        const auto zr = fe::locate_zeros(b.phi, ph_relo, ph_rehi);
        emit(fe::zeros_to_json(zr), ph_out);
        return zr.pass ? 0 : 1;
      }
      if (*c_phi_rig) {
        if (ph_marker2.empty())
          throw fe::ParamError("rigidity requires --marker2");
        const auto b = load_phi(ph_params, ph_marker);
        const auto m2 = fe::marker_from_json(fe::read_json_file(ph_marker2));
        const auto phi2 = fe::build_phi(m2, b.params, b.kernel);
        const auto rr =
            fe::shift_rigidity_margin(b.phi, phi2, ph_rstep, -20.0, 20.0);
        emit(fe::rigidity_to_json(rr), ph_out);
        return rr.margin > 0.0 ? 0 : 1;
      }
      if (*c_phi_spec) {
        const auto b = load_phi(ph_params, ph_marker);
        const auto rep = fe::spectral_support_report(b.phi, ph_T);
        fe::ojson j = fe::spectrum_to_json(rep);
        const bool ok = rep.leakage < 0.01;
        j["pass"] = ok;
        if (!ph_plot.empty()) {
          const auto sig = fe::sample_phi_real(b.phi, ph_T, 0.125);
          fe::write_text_file(ph_plot, fe::svg_spectrum(sig));
        }
        emit(j, ph_out);
        return ok ? 0 : 1;
      }
      if (*c_phi_pert) {
        const auto b = load_phi(ph_params, ph_marker);
        const auto rep = fe::random_tones(ph_tones, b.params.a);
        const auto f = fe::sample_tones(rep, 36.0, 0.125, -b.params.a / 2.0,
                                        b.params.a / 2.0);
        const fe::PhiFunction* second = nullptr;
        fe::PhiFunction phi2;
        if (!ph_marker2.empty()) {
          const auto m2 = fe::marker_from_json(fe::read_json_file(ph_marker2));
          phi2 = fe::build_phi(m2, b.params, b.kernel);
          second = &phi2;
        }
        const auto [g, pr] = fe::perturb_step(f, b.phi, second);
        (void)g;
        emit(fe::perturb_to_json(pr), ph_out);
        return (pr.dist_ok && pr.bands_disjoint) ? 0 : 1;
      }
    }

    if (*c_flow) {
      const auto sys = fe::parse_system(fl_system);
      if (*c_fl_sim) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,y";
        const bool sol = sys.kind != fe::FlowSystem::Kind::SuspensionPerm;
        if (sol)
          for (int d = 1; d <= sys.depth; ++d) csv << ",x" << d;
        csv << ",k,v\n";
        fe::FlowPoint q{fl_y0, fl_k0, fl_v0};
        const long long steps = (long long)std::floor(fl_t / fl_dt + 1e-9);
        for (long long i = 0; i <= steps; ++i) {
          const double t = (double)i * fl_dt;
          const auto qt = fe::flow_apply(sys, q, t);
          csv << t << ',' << qt.y;
          if (sol) {
            const auto sp = fe::solenoid_point(sys.depth, qt.y);
            for (double c : sp.coords) csv << ',' << c;
          }
          csv << ',' << qt.k << ',' << qt.v << "\n";
        }
        write_csv(fl_out, csv.str());
        return 0;
      }
      if (*c_fl_ret) {
        fe::CrossSectionData sec;
        sec.n = fl_n;
        const fe::FlowPoint q{fl_y0, 0, 0.0};
        const auto closed = fe::first_return(sys, sec, q);
        const auto bis = fe::first_return_bisection(sys, sec, q, fl_tmax);
        fe::ojson j;
        j["schema"] = "flowembed.return/1";
        j["system"] = sys.id();
        j["section"] = sec.id();
        j["closed_form_time"] = fe::json_num(closed.time);
        j["bisection_time"] = fe::json_num(bis.time);
        j["difference"] = fe::json_num(std::abs(closed.time - bis.time));
        const bool ok = std::abs(closed.time - bis.time) < 1e-8;
        j["pass"] = ok;
        emit(j, fl_out);
        return ok ? 0 : 1;
      }
      if (*c_fl_conj) {
        fe::CrossSectionData sec;
        sec.n = fl_n;
        const auto rep = fe::conjugacy_roundtrip(sys, sec, fl_samples, fl_seed);
        emit(fe::roundtrip_to_json(rep), fl_out);
        return rep.pass ? 0 : 1;
      }
      if (*c_fl_bound) {
        fe::CrossSectionData sec;
        sec.n = fl_n;
        sec.fiber_lo = fl_fiber_lo;
        sec.fiber_hi = fl_fiber_hi;
        const auto rep =
            fe::flow_boundary_probe(sys, sec, fl_gamma, fl_probes, fl_seed);
        emit(fe::boundary_to_json(rep), fl_out);
        return rep.all_pass ? 0 : 1;
      }
      if (*c_fl_susp) {
        const fe::CyclicProductBase base{24, 5};
        if (fl_state < 0 || fl_state >= base.n_states())
          throw fe::ParamError("suspend-embed: state id outside 0..119");
        const auto& params = fe::desk_params();
        const auto& kernel = fe::desk_kernel();
        // only the requested fiber's signal is needed; seeds follow the
        // fiber index so all fibers stay mutually deterministic
        fe::Rng rng(fl_seed);
        std::uint64_t fiber_seed = rng.next_u64();
        for (int j = 0; j < base.fiber_of(fl_state); ++j)
          fiber_seed = rng.next_u64();
        const auto m = fe::periodic_marker(fiber_seed, base.period, -1024,
                                           1023, params.M, params.M1);
        const auto phi = fe::build_phi(m, params, kernel);
        const auto F = fe::g2(phi, 96.0, 0.25);
        auto h = [&](int id) {
          return fe::translate(F, (double)base.phase_of(id));
        };
        const auto sig =
            fe::suspend_embedding(h, {fl_state, fl_height});
        std::ostringstream csv;
        fe::signal_to_csv(sig, csv);
        write_csv(fl_out, csv.str());
        return 0;
      }
    }

    if (*c_verify) {
      const auto results = fe::verify_all(ve_seed, ve_criteria);
      bool all = true;
      for (const auto& r : results) {
        all = all && r.pass;
        std::fprintf(stderr, "criterion %d %-14s %s  (%.2fs)\n", r.index,
                     r.name.c_str(), r.pass ? "pass" : "FAIL", r.seconds);
      }
      const auto j = fe::verify_to_json(results, ve_seed);
      emit(j, ve_out);
      if (!ve_plot_dir.empty()) {
        const auto& params = fe::desk_params();
        const auto& kernel = fe::desk_kernel();
        const auto m = fe::random_marker(ve_seed, -800, 799, params.M, params.M1);
        const auto t = fe::build_tiling(m);
        fe::write_text_file(ve_plot_dir + "/tiling.svg",
                            fe::svg_tiling(m, t, -40.0, 40.0));
        const auto phi = fe::build_phi(m, params, kernel);
        fe::write_text_file(ve_plot_dir + "/phi_heatmap.svg",
                            fe::svg_phi_heatmap(phi, -20.0, 20.0, 1.0, 120, 40));
        const auto sig = fe::sample_phi_real(phi, 200.0, 0.125);
        fe::write_text_file(ve_plot_dir + "/spectrum.svg",
                            fe::svg_spectrum(sig));
        // coarse rigidity-margin curve against an independent marker
        const auto m2 =
            fe::random_marker(ve_seed ^ 0x5851f42d4c957f2dULL, -800, 799,
                              params.M, params.M1);
        const auto phi2 = fe::build_phi(m2, params, kernel);
        std::vector<std::pair<double, double>> curve;
        const double r_lo = 2.0 * params.r1 + 5e-3;
        for (double r = r_lo; r <= 0.5; r += 5e-3) {
          for (double sgn : {-1.0, 1.0}) {
            double sup = 0.0;
            for (int i = 0; i <= 100; ++i) {
              const double x = -20.0 + 40.0 * i / 100.0;
              sup = std::max(sup,
                             std::abs(phi2.eval(fe::cplx(x + sgn * r, 0.0)) -
                                      phi.eval(fe::cplx(x, 0.0))));
            }
            curve.emplace_back(sgn * r, sup);
          }
        }
        std::sort(curve.begin(), curve.end());
        fe::write_text_file(
            ve_plot_dir + "/rigidity_margin.svg",
            fe::svg_curve(curve, "sup_t |Phi_y(t+r) - Phi_x(t)| vs r"));
      }
      return all ? 0 : 1;
    }
  } catch (const fe::ValidationError& e) {
    emit_error("validation", e.what());
    return 2;
  } catch (const fe::ParamError& e) {
    emit_error("param", e.what());
    return 2;
  } catch (const fe::DomainError& e) {
    emit_error("domain", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    emit_error("json", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 2;
  }
  return 2;
}
