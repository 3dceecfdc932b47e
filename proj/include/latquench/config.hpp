#pragma once

// Run configuration: YAML file with nested sections, presets, dotted
// overrides. Unknown keys are errors.

#include <filesystem>
#include <string>
#include <vector>

#include "latquench/model.hpp"
#include "latquench/quench.hpp"
#include "latquench/spectrum_scan.hpp"

namespace lq {

struct RunConfig {
  ModelConfig model;

  struct Scan {
    double omega_min = 0.0;
    double omega_max = 0.8;
    int n_points = 161;
    int n_states = 15;
    std::string parity = "even";
    int max_refinement_levels = 12;
    double refinement_tolerance = 0.01;
  } scan;

  struct Quench {
    double omega_i_sq = 0.8;
    double omega_f_sq = 0.58;
    double t_final = 300.0;
    double dt_sample = 0.1;
    std::vector<std::string> targets = {"|0,4,0>", "|1,3,0>_S", "|1,2,1>", "|2,2,0>_S"};
    double prep_threshold = 0.6;
  } quench;

  struct Spectral {
    int full_limit = 3000;
    int initial_k = 400;
    double defect_threshold = 1e-8;
    int max_k = 0;
  } spectral;

  struct Response {
    double omega_f_min = 0.0;
    double omega_f_max = 0.8;
    int n_points = 100;
    /// Add samples around crossings of the initial state's dominant curve.
    bool refine_near_crossings = true;
  } response;

  struct Multiwell {
    std::vector<double> omega_i_list = {0.56};
    int core_wells = 3;
    std::vector<double> density_times = {0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0};
  } multiwell;

  struct Convergence {
    std::vector<int> grid_ladder = {200, 300};
    std::vector<int> band_ladder = {2, 3};
    double window = 250.0;
  } convergence;

  std::string output_directory = "out";
  int threads = 1;

  void validate() const;
  std::string to_yaml() const;

  ScanConfig scan_config() const;
  DetectConfig detect_config() const;
  QuenchProtocol protocol() const;
  SpectralOptions spectral_options() const;
  std::vector<double> response_grid() const;
};

/// Environment variable that overrides output.directory.
inline constexpr const char* kOutputDirEnv = "LATQUENCH_OUTPUT_DIR";

/// Layered load: defaults, then an optional preset, then an optional file,
/// then `key=value` overrides with dotted keys (e.g. model.g=4). Throws
/// ConfigError with the offending key.
RunConfig load_config(const std::string& preset, const std::filesystem::path& file,
                      const std::vector<std::string>& overrides);

/// Parse a YAML document into a config (layered over defaults).
RunConfig parse_config(const std::string& yaml_text);

std::filesystem::path preset_path(const std::string& name);
std::vector<std::string> available_presets();

}  // namespace lq
