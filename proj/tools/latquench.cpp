#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <yaml-cpp/exceptions.h>

#include "latquench/commands.hpp"
#include "latquench/config.hpp"
#include "latquench/errors.hpp"
#include "latquench/io.hpp"

namespace {

struct CommonOptions {
  std::string preset;
  std::string config_file;
  std::vector<std::string> overrides;
  std::string output;
  int threads = 0;
};

void add_common(CLI::App* app, CommonOptions& opt) {
  app->add_option("--preset", opt.preset, "Preset name from presets/ (e.g. paper-fig1a)");
  app->add_option("-c,--config", opt.config_file, "YAML config file");
  app->add_option("--set", opt.overrides, "Dotted override, e.g. model.g=4 (repeatable)");
  app->add_option("-o,--output", opt.output, "Output directory (overrides config and environment)");
  app->add_option("-j,--threads", opt.threads, "Worker threads")->check(CLI::PositiveNumber);
}

lq::RunConfig resolve(const CommonOptions& opt) {
  std::vector<std::string> overrides = opt.overrides;
  if (opt.threads > 0) overrides.push_back("output.threads=" + std::to_string(opt.threads));
  lq::RunConfig config = lq::load_config(opt.preset, opt.config_file, overrides);
  if (!opt.output.empty()) config.output_directory = opt.output;
  config.validate();
  return config;
}

int report(const char* kind, const std::exception& e, int code) {
  std::cerr << "latquench: " << kind << ": " << e.what() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Few-boson quench dynamics in a finite optical lattice with a harmonic trap"};
  app.set_version_flag("--version", std::string(lq::kVersion));
  app.require_subcommand(0, 1);

  CommonOptions common;
  lq::SelftestOptions selftest;
  bool list_presets = false;

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs = {
      {"spectrum", "Even/odd spectrum versus trap strength and avoided crossings"},
      {"quench", "Single quench: variance time series, populations, Fourier branches"},
      {"response-scan", "Temporal variance versus post-quench trap strength"},
      {"multiwell", "Core-well fraction and density after quenches in longer lattices"},
      {"wannier-dump", "Wannier and single-particle orbitals on the grid"},
      {"selftest", "Oracle comparisons; optional derived constants and convergence ladders"},
  };
  std::vector<CLI::App*> apps;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    add_common(sub, common);
    apps.push_back(sub);
  }
  apps.back()->add_flag("--emit-derived", selftest.emit_derived, "Write derived.json");
  apps.back()->add_flag("--convergence", selftest.convergence, "Run the grid and band ladders");
  app.add_flag("--list-presets", list_presets, "Print available presets and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lq::kExitConfig;
  }

  if (list_presets) {
    for (const auto& p : lq::available_presets()) std::cout << p << "\n";
    return lq::kExitOk;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << "latquench: a subcommand is required\n" << app.help();
    return lq::kExitConfig;
  }

  try {
    const lq::RunConfig config = resolve(common);
    std::ostream& log = std::cerr;
    if (apps[0]->parsed()) return lq::cmd_spectrum(config, log);
    if (apps[1]->parsed()) return lq::cmd_quench(config, log);
    if (apps[2]->parsed()) return lq::cmd_response_scan(config, log);
    if (apps[3]->parsed()) return lq::cmd_multiwell(config, log);
    if (apps[4]->parsed()) return lq::cmd_wannier_dump(config, log);
    return lq::cmd_selftest(config, selftest, log);
  } catch (const lq::ConfigError& e) {
    return report("config error", e, lq::kExitConfig);
  } catch (const YAML::Exception& e) {
    return report("config error", e, lq::kExitConfig);
  } catch (const lq::ConvergenceError& e) {
    return report("convergence error", e, lq::kExitConvergence);
  } catch (const lq::ResourceCapError& e) {
    return report("resource cap", e, lq::kExitResourceCap);
  } catch (const std::exception& e) {
    return report("error", e, lq::kExitFailure);
  }
}
