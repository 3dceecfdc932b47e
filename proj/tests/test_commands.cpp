#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "latquench/commands.hpp"
#include "latquench/config.hpp"

using namespace lq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}

RunConfig small(const fs::path& dir, int threads = 1) {
  RunConfig c = load_config("", "", {"model.n_bands=1", "scan.n_points=21", "scan.n_states=9", "quench.t_final=20",
                                     "quench.dt_sample=0.5", "quench.targets=[\"|0,4,0>\", \"|1,3,0>_S\"]",
                                     "response.n_points=6", "response.omega_f_max=0.6", "quench.omega_i_sq=0.6"});
  c.output_directory = dir.string();
  c.threads = threads;
  c.model.threads = threads;
  return c;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("latquench_cmd_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("spectrum output is byte-identical across runs and thread counts") {
  std::ostringstream log;
  const fs::path a = scratch("spec_a"), b = scratch("spec_b");
  REQUIRE(cmd_spectrum(small(a), log) == kExitOk);
  REQUIRE(cmd_spectrum(small(b, 2), log) == kExitOk);
  CHECK(first_line(a / "spectrum.csv") == "omega_sq,curve,level,energy,parity,label,weight");
  CHECK(slurp(a / "spectrum.csv") == slurp(b / "spectrum.csv"));
  CHECK(slurp(a / "crossings.json") == slurp(b / "crossings.json"));
  CHECK(fs::exists(a / "manifest.json"));
  CHECK(fs::exists(a / "config.resolved.yaml"));
}

TEST_CASE("quench output is deterministic") {
  std::ostringstream log;
  const fs::path a = scratch("quench_a"), b = scratch("quench_b");
  REQUIRE(cmd_quench(small(a), log) == kExitOk);
  REQUIRE(cmd_quench(small(b), log) == kExitOk);
  CHECK(first_line(a / "timeseries.csv") == "t,sigma2_L,sigma2_core,N_core_over_N,mean_x_core");
  for (const char* f : {"timeseries.csv", "populations.csv", "fourier.csv", "branches.json", "quench.json"})
    CHECK(slurp(a / f) == slurp(b / f));
}

TEST_CASE("response scan writes one row per sample") {
  std::ostringstream log;
  const fs::path a = scratch("resp");
  RunConfig c = small(a);
  c.response.refine_near_crossings = false;
  REQUIRE(cmd_response_scan(c, log) == kExitOk);
  const std::string csv = slurp(a / "response.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(fs::exists(a / "peaks.json"));
}

TEST_CASE("wannier dump and selftest") {
  std::ostringstream log;
  const fs::path a = scratch("wannier");
  REQUIRE(cmd_wannier_dump(small(a), log) == kExitOk);
  CHECK(fs::exists(a / "wannier.csv"));
  CHECK(fs::exists(a / "orbitals.csv"));
  const fs::path s = scratch("selftest");
  REQUIRE(cmd_selftest(small(s), SelftestOptions{true, false}, log) == kExitOk);
  CHECK(fs::exists(s / "derived.json"));
  CHECK(fs::exists(s / "selftest.csv"));
}
