#pragma once

// Subcommands. Each writes its files plus config.resolved.yaml and
// manifest.json into the output directory and returns an exit code.

#include <iosfwd>
#include <string>
#include <vector>

#include "latquench/config.hpp"

namespace lq {

int cmd_spectrum(const RunConfig& config, std::ostream& log);
int cmd_quench(const RunConfig& config, std::ostream& log);
int cmd_response_scan(const RunConfig& config, std::ostream& log);
int cmd_multiwell(const RunConfig& config, std::ostream& log);
int cmd_wannier_dump(const RunConfig& config, std::ostream& log);

struct OracleCheck {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;

  bool pass() const { return error <= tolerance; }
};
/// Closed-form two-site spectra and the dense first-quantised spectrum
/// against the sparse pipeline, on small models derived from `base`.
std::vector<OracleCheck> oracle_checks(const ModelConfig& base);

struct SelftestOptions {
  bool emit_derived = false;
  bool convergence = false;
};
int cmd_selftest(const RunConfig& config, const SelftestOptions& options, std::ostream& log);

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitResourceCap = 4;

}  // namespace lq
