#include "latquench/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "latquench/errors.hpp"

namespace lq {

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

// Deep merge of `over` into `base` (maps merge, everything else replaces).
YAML::Node merge(const YAML::Node& base, const YAML::Node& over) {
  if (!over.IsMap() || !base.IsMap()) return YAML::Clone(over);
  YAML::Node out = YAML::Clone(base);
  for (const auto& kv : over) {
    const std::string key = kv.first.as<std::string>();
    out[key] = out[key] ? merge(out[key], kv.second) : YAML::Clone(kv.second);
  }
  return out;
}

class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsMap()) throw ConfigError("'" + path_ + "' must be a mapping" + where(node_));
  }
  ~Section() = default;

  template <typename T>
  void read(const std::string& key, T& value) {
    seen_.insert(key);
    if (!node_ || !node_[key]) return;
    const YAML::Node v = node_[key];
    try {
      value = v.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("invalid value for '" + full(key) + "'" + where(v));
    }
  }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    return node_ ? node_[key] : YAML::Node();
  }

  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw ConfigError("unknown key '" + full(key) + "'" + where(kv.first));
    }
  }

 private:
  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

RunConfig decode(const YAML::Node& root) {
  RunConfig c;
  if (!root || root.IsNull()) return c;
  Section top(root, "");
  {
    Section s(top.child("model"), "model");
    s.read("n_particles", c.model.n_particles);
    s.read("n_sites", c.model.n_sites);
    s.read("n_bands", c.model.n_bands);
    s.read("n_grid", c.model.n_grid);
    s.read("v0", c.model.v0);
    s.read("g", c.model.g);
    s.read("wannier_at_initial_trap", c.model.wannier_at_initial_trap);
    int cap = static_cast<int>(c.model.basis_cap);
    s.read("basis_cap", cap);
    c.model.basis_cap = static_cast<std::size_t>(std::max(cap, 1));
    s.finish();
  }
  {
    Section s(top.child("scan"), "scan");
    s.read("omega_min", c.scan.omega_min);
    s.read("omega_max", c.scan.omega_max);
    s.read("n_points", c.scan.n_points);
    s.read("n_states", c.scan.n_states);
    s.read("parity", c.scan.parity);
    s.read("max_refinement_levels", c.scan.max_refinement_levels);
    s.read("refinement_tolerance", c.scan.refinement_tolerance);
    s.finish();
  }
  {
    Section s(top.child("quench"), "quench");
    s.read("omega_i_sq", c.quench.omega_i_sq);
    s.read("omega_f_sq", c.quench.omega_f_sq);
    s.read("t_final", c.quench.t_final);
    s.read("dt_sample", c.quench.dt_sample);
    s.read("targets", c.quench.targets);
    s.read("prep_threshold", c.quench.prep_threshold);
    s.finish();
  }
  {
    Section s(top.child("spectral"), "spectral");
    s.read("full_limit", c.spectral.full_limit);
    s.read("initial_k", c.spectral.initial_k);
    s.read("defect_threshold", c.spectral.defect_threshold);
    s.read("max_k", c.spectral.max_k);
    s.finish();
  }
  {
    Section s(top.child("response"), "response");
    s.read("omega_f_min", c.response.omega_f_min);
    s.read("omega_f_max", c.response.omega_f_max);
    s.read("n_points", c.response.n_points);
    s.read("refine_near_crossings", c.response.refine_near_crossings);
    s.finish();
  }
  {
    Section s(top.child("multiwell"), "multiwell");
    s.read("omega_i_list", c.multiwell.omega_i_list);
    s.read("core_wells", c.multiwell.core_wells);
    s.read("density_times", c.multiwell.density_times);
    s.finish();
  }
  {
    Section s(top.child("convergence"), "convergence");
    s.read("grid_ladder", c.convergence.grid_ladder);
    s.read("band_ladder", c.convergence.band_ladder);
    s.read("window", c.convergence.window);
    s.finish();
  }
  {
    Section s(top.child("output"), "output");
    s.read("directory", c.output_directory);
    s.read("threads", c.threads);
    s.finish();
  }
  top.finish();
  c.model.threads = c.threads;
  c.model.wannier_omega_sq = c.quench.omega_i_sq;
  return c;
}

YAML::Node load_yaml_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return YAML::Load(buf.str());
  } catch (const YAML::Exception& e) {
    throw ConfigError("YAML error in '" + path.string() + "': " + e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  scan_config().validate();
  if (scan.parity != "even" && scan.parity != "odd") throw ConfigError("scan.parity must be 'even' or 'odd'");
  if (scan.max_refinement_levels < 0) throw ConfigError("scan.max_refinement_levels must be >= 0");
  if (!(scan.refinement_tolerance > 0.0)) throw ConfigError("scan.refinement_tolerance must be positive");
  protocol().validate();
  if (!(quench.prep_threshold > 0.0)) throw ConfigError("quench.prep_threshold must be positive");
  if (spectral.full_limit < 1 || spectral.initial_k < 1) throw ConfigError("spectral sizes must be >= 1");
  if (!(spectral.defect_threshold > 0.0)) throw ConfigError("spectral.defect_threshold must be positive");
  if (spectral.max_k < 0) throw ConfigError("spectral.max_k must be >= 0");
  if (!(response.omega_f_max > response.omega_f_min)) throw ConfigError("response range is empty");
  if (response.omega_f_min < 0.0) throw ConfigError("response range must be non-negative");
  if (response.n_points < 2) throw ConfigError("response.n_points must be >= 2");
  if (multiwell.omega_i_list.empty()) throw ConfigError("multiwell.omega_i_list must not be empty");
  for (double w : multiwell.omega_i_list) {
    if (w < 0.0) throw ConfigError("multiwell.omega_i_list entries must be non-negative");
  }
  if (multiwell.core_wells < 1 || multiwell.core_wells % 2 == 0 || multiwell.core_wells > model.n_sites) {
    throw ConfigError("multiwell.core_wells must be odd and at most model.n_sites");
  }
  if (convergence.window <= 0.0) throw ConfigError("convergence.window must be positive");
  if (threads < 1) throw ConfigError("output.threads must be >= 1");
  if (output_directory.empty()) throw ConfigError("output.directory must not be empty");
}

std::string RunConfig::to_yaml() const {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_particles" << YAML::Value << model.n_particles;
  out << YAML::Key << "n_sites" << YAML::Value << model.n_sites;
  out << YAML::Key << "n_bands" << YAML::Value << model.n_bands;
  out << YAML::Key << "n_grid" << YAML::Value << model.n_grid;
  out << YAML::Key << "v0" << YAML::Value << model.v0;
  out << YAML::Key << "g" << YAML::Value << model.g;
  out << YAML::Key << "wannier_at_initial_trap" << YAML::Value << model.wannier_at_initial_trap;
  out << YAML::Key << "basis_cap" << YAML::Value << static_cast<long long>(model.basis_cap);
  out << YAML::EndMap;
  out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "omega_min" << YAML::Value << scan.omega_min;
  out << YAML::Key << "omega_max" << YAML::Value << scan.omega_max;
  out << YAML::Key << "n_points" << YAML::Value << scan.n_points;
  out << YAML::Key << "n_states" << YAML::Value << scan.n_states;
  out << YAML::Key << "parity" << YAML::Value << scan.parity;
  out << YAML::Key << "max_refinement_levels" << YAML::Value << scan.max_refinement_levels;
  out << YAML::Key << "refinement_tolerance" << YAML::Value << scan.refinement_tolerance;
  out << YAML::EndMap;
  out << YAML::Key << "quench" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "omega_i_sq" << YAML::Value << quench.omega_i_sq;
  out << YAML::Key << "omega_f_sq" << YAML::Value << quench.omega_f_sq;
  out << YAML::Key << "t_final" << YAML::Value << quench.t_final;
  out << YAML::Key << "dt_sample" << YAML::Value << quench.dt_sample;
  out << YAML::Key << "targets" << YAML::Value << YAML::Flow << quench.targets;
  out << YAML::Key << "prep_threshold" << YAML::Value << quench.prep_threshold;
  out << YAML::EndMap;
  out << YAML::Key << "spectral" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "full_limit" << YAML::Value << spectral.full_limit;
  out << YAML::Key << "initial_k" << YAML::Value << spectral.initial_k;
  out << YAML::Key << "defect_threshold" << YAML::Value << spectral.defect_threshold;
  out << YAML::Key << "max_k" << YAML::Value << spectral.max_k;
  out << YAML::EndMap;
  out << YAML::Key << "response" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "omega_f_min" << YAML::Value << response.omega_f_min;
  out << YAML::Key << "omega_f_max" << YAML::Value << response.omega_f_max;
  out << YAML::Key << "n_points" << YAML::Value << response.n_points;
  out << YAML::Key << "refine_near_crossings" << YAML::Value << response.refine_near_crossings;
  out << YAML::EndMap;
  out << YAML::Key << "multiwell" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "omega_i_list" << YAML::Value << YAML::Flow << multiwell.omega_i_list;
  out << YAML::Key << "core_wells" << YAML::Value << multiwell.core_wells;
  out << YAML::Key << "density_times" << YAML::Value << YAML::Flow << multiwell.density_times;
  out << YAML::EndMap;
  out << YAML::Key << "convergence" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "grid_ladder" << YAML::Value << YAML::Flow << convergence.grid_ladder;
  out << YAML::Key << "band_ladder" << YAML::Value << YAML::Flow << convergence.band_ladder;
  out << YAML::Key << "window" << YAML::Value << convergence.window;
  out << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << output_directory;
  out << YAML::Key << "threads" << YAML::Value << threads;
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

ScanConfig RunConfig::scan_config() const {
  ScanConfig s;
  s.omega_min = scan.omega_min;
  s.omega_max = scan.omega_max;
  s.n_points = scan.n_points;
  s.n_states = scan.n_states;
  s.parity = scan.parity == "odd" ? Parity::Odd : Parity::Even;
  s.threads = threads;
  return s;
}

DetectConfig RunConfig::detect_config() const {
  DetectConfig d;
  d.max_refinement_levels = scan.max_refinement_levels;
  d.refinement_tolerance = scan.refinement_tolerance;
  return d;
}

QuenchProtocol RunConfig::protocol() const {
  QuenchProtocol p;
  p.omega_i_sq = quench.omega_i_sq;
  p.omega_f_sq = quench.omega_f_sq;
  p.t_final = quench.t_final;
  p.dt_sample = quench.dt_sample;
  return p;
}

SpectralOptions RunConfig::spectral_options() const {
  SpectralOptions s;
  s.full_limit = spectral.full_limit;
  s.initial_k = spectral.initial_k;
  s.defect_threshold = spectral.defect_threshold;
  s.max_k = spectral.max_k;
  return s;
}

std::vector<double> RunConfig::response_grid() const {
  std::vector<double> w(response.n_points);
  for (int i = 0; i < response.n_points; ++i) {
    w[i] = response.omega_f_min + (response.omega_f_max - response.omega_f_min) * i / (response.n_points - 1);
  }
  return w;
}

RunConfig parse_config(const std::string& yaml_text) {
  try {
    RunConfig c = decode(YAML::Load(yaml_text));
    c.validate();
    return c;
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML error: ") + e.what());
  }
}

std::filesystem::path preset_path(const std::string& name) {
  std::vector<std::filesystem::path> dirs = {"presets"};
#ifdef LATQUENCH_PRESET_DIR
  dirs.emplace_back(LATQUENCH_PRESET_DIR);
#endif
  for (const auto& d : dirs) {
    const auto p = d / (name + ".yaml");
    if (std::filesystem::exists(p)) return p;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> available_presets() {
  std::set<std::string> names;
  std::vector<std::filesystem::path> dirs = {"presets"};
#ifdef LATQUENCH_PRESET_DIR
  dirs.emplace_back(LATQUENCH_PRESET_DIR);
#endif
  for (const auto& d : dirs) {
    if (!std::filesystem::is_directory(d)) continue;
    for (const auto& e : std::filesystem::directory_iterator(d)) {
      if (e.path().extension() == ".yaml") names.insert(e.path().stem().string());
    }
  }
  return {names.begin(), names.end()};
}

RunConfig load_config(const std::string& preset, const std::filesystem::path& file,
                      const std::vector<std::string>& overrides) {
  YAML::Node root(YAML::NodeType::Map);
  if (!preset.empty()) root = merge(root, load_yaml_file(preset_path(preset)));
  if (!file.empty()) root = merge(root, load_yaml_file(file));
  for (const auto& ov : overrides) {
    const auto eq = ov.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + ov + "' is not key=value");
    const std::string key = ov.substr(0, eq);
    YAML::Node value;
    try {
      value = YAML::Load(ov.substr(eq + 1));
    } catch (const YAML::Exception& e) {
      throw ConfigError("cannot parse value of override '" + key + "': " + e.what());
    }
    // build {a: {b: value}} and merge
    std::vector<std::string> parts;
    std::stringstream ss(key);
    for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
    YAML::Node patch = value;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
      YAML::Node wrap(YAML::NodeType::Map);
      wrap[*it] = patch;
      patch = wrap;
    }
    root = merge(root, patch);
  }
  RunConfig c;
  try {
    c = decode(root);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML error: ") + e.what());
  }
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) c.output_directory = env;
  c.validate();
  return c;
}

}  // namespace lq
