#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

// FLOWEMBED_BIN and FIXTURE_DIR come from the build system.

namespace {

using nlohmann::json;

struct RunResult {
  int code = -1;
  std::string out, err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/flowembed_cli_out.txt";
  const std::string err_path = "/tmp/flowembed_cli_err.txt";
  const std::string cmd = std::string(FLOWEMBED_BIN) + " " + args + " >" +
                          out_path + " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::string fixture(const std::string& name) {
  return std::string(FIXTURE_DIR) + "/" + name;
}

// generated inputs shared across cases (created on first use)
const std::string kMarker800 = "/tmp/flowembed_cli_m800.json";
const std::string kMarker800b = "/tmp/flowembed_cli_m800b.json";
const std::string kParams = "/tmp/flowembed_cli_params.json";

void ensure_inputs() {
  static bool done = false;
  if (done) return;
  REQUIRE(run("marker --seed 7 --lo -800 --hi 799 --out " + kMarker800).code ==
          0);
  REQUIRE(run("marker --seed 9 --lo -800 --hi 799 --out " + kMarker800b).code ==
          0);
  REQUIRE(run("params --out " + kParams).code == 0);
  done = true;
}

}  // namespace

TEST_CASE("marker generation is seed-deterministic") {
  auto a = run("marker --seed 7");
  auto b = run("marker --seed 7");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());
  auto c = run("marker --seed 8");
  CHECK(c.out != a.out);

  auto j = json::parse(a.out);
  CHECK(j["schema"] == "flowembed.marker/1");
  CHECK(j["M"] == 10);
  CHECK(j["M1"] == 25);
}

TEST_CASE("periodic marker and tiling match the golden fixtures") {
  const std::string tmp_m = "/tmp/flowembed_cli_periodic.json";
  auto r = run("marker --period 24 --seed 7 --lo -120 --hi 119 --out " + tmp_m);
  CHECK(r.code == 0);
  CHECK(slurp(tmp_m) == slurp(fixture("periodic_marker.json")));

  const std::string tmp_t = "/tmp/flowembed_cli_tiling.json";
  auto t = run("tile --marker " + fixture("periodic_marker.json") + " --out " +
               tmp_t);
  CHECK(t.code == 0);
  CHECK(slurp(tmp_t) == slurp(fixture("golden_periodic_tiling.json")));
}

TEST_CASE("tile --report gates on geometry and coverage") {
  ensure_inputs();
  auto r = run("tile --marker " + kMarker800 + " --report");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["geometry"]["pass"] == true);
  CHECK(j["coverage_defect"].get<double>() < 1e-9);
  CHECK(j["schema"] == "flowembed.tiling/1");
}

TEST_CASE("config errors exit 2 with a machine-readable payload") {
  auto r = run("tile --marker /nonexistent_flowembed.json");
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  auto e = json::parse(r.err);
  CHECK(e["schema"] == "flowembed.error/1");
  CHECK(e.contains("type"));
  CHECK(e.contains("message"));

  auto bad = run("frobnicate");
  CHECK(bad.code == 2);
  CHECK(json::parse(bad.err)["schema"] == "flowembed.error/1");

  auto help = run("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("marker") != std::string::npos);
}

TEST_CASE("params --validate reports the selected constants") {
  auto r = run("params --validate");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["schema"] == "flowembed.params/1");
  CHECK(j["r1"].get<double>() == 0.00390625);
  CHECK(j["E"].get<double>() == 512.0);
  CHECK(j["theta_L"].get<double>() > 0.0);
  CHECK(j["report"]["analytic_pass"] == true);
  CHECK(j["report"]["pass"] == false);  // desk M2 scale gate
}

TEST_CASE("phi zeros / spectrum / eval / rigidity / perturb round trip") {
  ensure_inputs();
  const std::string base =
      " --params " + kParams + " --marker " + kMarker800;

  auto z = run("phi zeros" + base + " --re-lo -20 --re-hi 20");
  CHECK(z.code == 0);
  auto jz = json::parse(z.out);
  CHECK(jz["pass"] == true);
  CHECK(jz["offdisk_ok"] == true);

  auto s = run("phi spectrum" + base);
  CHECK(s.code == 0);
  auto js = json::parse(s.out);
  CHECK(js["leakage"].get<double>() < 0.01);
  CHECK(js["pass"] == true);

  // real-line grid: the K1 sup bound applies there (off the real line the
  // map grows like |Theta|)
  auto e = run("phi eval" + base + " --re-lo -5 --re-hi 5 --nx 16 --ny 1 --im 0");
  CHECK(e.code == 0);
  auto je = json::parse(e.out);
  CHECK(je["grid_abs"].size() == 1);
  CHECK(je["grid_abs"][0].size() == 16);
  CHECK(je["sup_abs"].get<double>() <= je["K1"].get<double>() + 2e-9);

  auto g = run("phi rigidity" + base + " --marker2 " + kMarker800b +
               " --r-step 0.005");
  CHECK(g.code == 0);
  auto jg = json::parse(g.out);
  CHECK(jg["margin"].get<double>() > 0.0);

  auto p = run("phi perturb" + base + " --tones-seed 5");
  CHECK(p.code == 0);
  auto jp = json::parse(p.out);
  CHECK(jp["dist_ok"] == true);
  CHECK(jp["bands_disjoint"] == true);

  auto miss = run("phi rigidity" + base);
  CHECK(miss.code == 2);  // --marker2 required
}

TEST_CASE("flow return: closed form vs bisection") {
  auto r = run("flow return --system solenoid:4 --n 2");
  CHECK(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["closed_form_time"].get<double>() == 2.0);
  CHECK(j["difference"].get<double>() < 1e-8);

  auto horizon = run("flow return --system solenoid:4 --n 2 --t-max 1.0");
  CHECK(horizon.code == 2);
  CHECK(json::parse(horizon.err)["schema"] == "flowembed.error/1");
}

TEST_CASE("flow conjugacy and boundary probes") {
  auto c = run("flow conjugacy --system product:4:5 --n 2");
  CHECK(c.code == 0);
  CHECK(json::parse(c.out)["pass"] == true);

  auto healthy = run("flow boundary --system band:4 --n 2");
  CHECK(healthy.code == 0);
  CHECK(json::parse(healthy.out)["all_pass"] == true);

  auto clipped = run("flow boundary --system band:4 --n 2 --fiber-hi 0.5");
  CHECK(clipped.code == 1);
  auto j = json::parse(clipped.out);
  CHECK(j["all_pass"] == false);
  CHECK(j["fraction"].get<double>() < 1.0);
}

TEST_CASE("flow simulate emits a trajectory CSV") {
  const std::string csv_path = "/tmp/flowembed_cli_traj.csv";
  auto r = run("flow simulate --system solenoid:4 --t 6 --dt 0.5 --out " +
               csv_path);
  CHECK(r.code == 0);
  std::ifstream in(csv_path);
  std::string line;
  int lines = 0;
  std::string header;
  while (std::getline(in, line)) {
    if (lines == 0) header = line;
    ++lines;
  }
  CHECK(header == "t,y,x1,x2,x3,x4,k,v");
  CHECK(lines == 14);  // header + 13 samples (t = 0..6 step 0.5)
}

TEST_CASE("flow suspend-embed emits a signal CSV") {
  const std::string csv_path = "/tmp/flowembed_cli_susp.csv";
  auto r = run("flow suspend-embed --state 30 --height 0.25 --out " + csv_path);
  CHECK(r.code == 0);
  std::ifstream in(csv_path);
  std::string header;
  std::getline(in, header);
  CHECK(header.find("x") != std::string::npos);
  int lines = 1;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines > 100);

  auto bad = run("flow suspend-embed --state 200");
  CHECK(bad.code == 2);
}

TEST_CASE("verify-all subset runs are byte-deterministic") {
  auto a = run("verify-all --criteria 6 8");
  auto b = run("verify-all --criteria 6 8");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto j = json::parse(a.out);
  CHECK(j["schema"] == "flowembed.verify/1");
  CHECK(j["pass"] == true);
  REQUIRE(j["criteria"].size() == 2);
  CHECK(j["criteria"][0]["index"] == 6);
  CHECK(j["criteria"][1]["index"] == 8);
  // progress lines stay on stderr so stdout remains canonical
  CHECK(a.err.find("criterion 6") != std::string::npos);
  CHECK(a.err.find("criterion 8") != std::string::npos);
  CHECK(a.out.find("seconds") == std::string::npos);

  auto bad = run("verify-all --criteria 9");
  CHECK(bad.code == 2);
  CHECK(json::parse(bad.err)["schema"] == "flowembed.error/1");
}
