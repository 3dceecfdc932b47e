#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "latquench/config.hpp"
#include "latquench/errors.hpp"
#include "latquench/io.hpp"

using namespace lq;

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("csv writer enforces the column count") {
  CsvWriter w({"a", "b"});
  w.cell(1).cell("x");
  w.end_row();
  w.cell(2.5).missing();
  w.end_row();
  CHECK(w.str() == "a,b\n1,x\n2.5,\n");
  CsvWriter bad({"a", "b"});
  bad.cell(1);
  CHECK_THROWS(bad.end_row());
}

TEST_CASE("defaults are valid and round trip through YAML") {
  const RunConfig d;
  CHECK_NOTHROW(d.validate());
  const RunConfig r = parse_config(d.to_yaml());
  CHECK(r.to_yaml() == d.to_yaml());
}

TEST_CASE("unknown keys are rejected with their location") {
  try {
    parse_config("model:\n  n_particles: 4\n  bogus: 1\n");
    FAIL("no error");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("bogus") != std::string::npos);
    CHECK(what.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("nonsense: {}\n"), ConfigError);
}

TEST_CASE("invalid values are rejected") {
  CHECK_THROWS_AS(load_config("", "", {"scan.omega_max=0"}), ConfigError);
  CHECK_THROWS_AS(load_config("", "", {"quench.dt_sample=400"}), ConfigError);
  CHECK_THROWS_AS(load_config("", "", {"model.n_sites=4"}), ConfigError);
  CHECK_THROWS_AS(load_config("", "", {"model.g"}), ConfigError);
  CHECK_THROWS_AS(load_config("no-such-preset", "", {}), ConfigError);
}

TEST_CASE("overrides layer over presets and files") {
  const RunConfig c = load_config("", "", {"model.g=4", "quench.omega_f_sq=0.48", "multiwell.omega_i_list=[0.3, 0.1]"});
  CHECK(c.model.g == 4.0);
  CHECK(c.quench.omega_f_sq == 0.48);
  CHECK(c.multiwell.omega_i_list == std::vector<double>{0.3, 0.1});
  const auto path = std::filesystem::temp_directory_path() / "latquench_test_config.yaml";
  {
    std::ofstream f(path);
    f << "model:\n  g: 2.5\nquench:\n  t_final: 100\n";
  }
  const RunConfig f = load_config("", path, {"model.g=3"});
  CHECK(f.model.g == 3.0);
  CHECK(f.quench.t_final == 100.0);
  std::filesystem::remove(path);
}

TEST_CASE("output directory from the environment") {
  ::setenv(kOutputDirEnv, "/tmp/latquench_env_dir", 1);
  const RunConfig c = load_config("", "", {});
  ::unsetenv(kOutputDirEnv);
  CHECK(c.output_directory == "/tmp/latquench_env_dir");
}

TEST_CASE("every shipped preset loads") {
  const auto names = available_presets();
  CHECK(names.size() >= 20);
  for (const auto& n : names) {
    INFO(n);
    CHECK_NOTHROW(load_config(n, "", {}));
  }
}
