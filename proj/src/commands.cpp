#include "latquench/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <numbers>
#include <ostream>

#include <json.hpp>

#include "latquench/bhm.hpp"
#include "latquench/convergence.hpp"
#include "latquench/errors.hpp"
#include "latquench/io.hpp"
#include "latquench/observables.hpp"
#include "latquench/oracle.hpp"
#include "latquench/response.hpp"

namespace lq {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json label_json(const StateLabel& l, const OrbitalLayout& layout) { return format_label(l, layout); }

json crossing_json(const AvoidedCrossing& c, const OrbitalLayout& layout) {
  json j;
  j["levels"] = {c.lower_level, c.lower_level + 1};
  j["omega_sq_c"] = c.omega_sq_c;
  j["min_gap"] = c.min_gap;
  j["slope_difference"] = c.slope_difference;
  j["width"] = c.width;
  j["class"] = to_string(c.cls);
  j["labels_before"] = {label_json(c.lower_before, layout), label_json(c.upper_before, layout)};
  j["labels_after"] = {label_json(c.lower_after, layout), label_json(c.upper_after, layout)};
  j["exchanged"] = c.exchanged;
  j["probe_offset"] = c.probe_offset;
  j["slopes"] = {{"lower_before", c.slopes.lower_before},
                 {"upper_before", c.slopes.upper_before},
                 {"lower_after", c.slopes.lower_after},
                 {"upper_after", c.slopes.upper_after}};
  j["resolved"] = c.resolved;
  j["refinement_levels"] = c.refinement_levels;
  return j;
}

json dual_json(const DualForm& d) {
  return {{"integral", d.integral},
          {"integral_adjusted", d.integral_adjusted},
          {"spectral", d.spectral},
          {"near_degenerate", d.near_degenerate},
          {"near_degenerate_pairs", d.near_degenerate_pairs},
          {"relative_difference", d.relative_difference},
          {"drift", d.drift},
          {"converged", d.converged}};
}

struct Output {
  fs::path dir;
  RunManifest manifest;
  Stopwatch total;

  Output(const RunConfig& config, const std::string& command)
      : dir(config.output_directory), manifest(command, config.to_yaml()) {
    fs::create_directories(dir);
    manifest.write_file(dir / "config.resolved.yaml", config.to_yaml());
  }
  void write(const std::string& name, const std::string& content) { manifest.write_file(dir / name, content); }
  void finish() {
    manifest.add_timing("total", total.seconds());
    manifest.save(dir / "manifest.json");
  }
};

std::vector<AvoidedCrossing> run_detection(const Model& model, const RunConfig& config, SpectralScan* scan_out,
                                           std::ostream& log) {
  SpectralScan scan = scan_spectrum(model, config.scan_config());
  for (const auto& w : scan.warnings) log << "warning: " << w << "\n";
  auto crossings = detect_crossings(model, scan, config.detect_config());
  if (scan_out) *scan_out = std::move(scan);
  return crossings;
}

}  // namespace

int cmd_spectrum(const RunConfig& config, std::ostream& log) {
  Output out(config, "spectrum");
  Stopwatch sw;
  const Model model(config.model);
  out.manifest.add_timing("model", sw.seconds());
  log << "basis " << model.basis().size() << " states, even block " << model.block_dimension(Parity::Even)
      << ", odd block " << model.block_dimension(Parity::Odd) << "\n";

  sw = Stopwatch();
  SpectralScan scan;
  const auto crossings = run_detection(model, config, &scan, log);
  out.manifest.add_timing("scan_and_detect", sw.seconds());

  const OrbitalLayout& layout = model.layout();
  CsvWriter csv({"omega_sq", "curve", "level", "energy", "parity", "label", "weight"});
  for (std::size_t p = 0; p < scan.points.size(); ++p) {
    const ScanPoint& pt = scan.points[p];
    for (int c = 0; c < config.scan.n_states; ++c) {
      const int level = scan.level_of_curve[p][c];
      csv.cell(pt.omega_sq).cell(c).cell(level).cell(pt.energies[level]).cell(config.scan.parity)
          .cell(format_label(pt.labels[level].label, layout)).cell(pt.labels[level].weight);
      csv.end_row();
    }
  }
  out.write("spectrum.csv", csv.str());

  json cj = json::array();
  for (const auto& c : crossings) cj.push_back(crossing_json(c, layout));
  json doc;
  doc["parity"] = config.scan.parity;
  doc["crossings"] = cj;
  doc["warnings"] = scan.warnings;
  out.write("crossings.json", dump(doc));

  if (config.model.n_sites >= 3) {
    CsvWriter bhm({"omega_sq", "J", "U", "eps", "e0"});
    for (const auto& pt : scan.points) {
      const BhmParams p = extract_params(model.integrals().one, model.integrals().two, pt.omega_sq, config.model.n_sites);
      bhm.cell(pt.omega_sq).cell(p.J).cell(p.U).cell(p.eps).cell(p.e0);
      bhm.end_row();
    }
    out.write("bhm_params.csv", bhm.str());
  }
  log << crossings.size() << " avoided crossings\n";
  for (const auto& c : crossings) {
    log << "  levels " << c.lower_level << "/" << c.lower_level + 1 << " at omega_sq=" << std::setprecision(6)
        << c.omega_sq_c << " gap=" << c.min_gap << " width=" << c.width << " " << to_string(c.cls) << "\n";
  }
  out.manifest.add_diagnostic("crossings", static_cast<double>(crossings.size()));
  out.finish();
  return kExitOk;
}

int cmd_quench(const RunConfig& config, std::ostream& log) {
  Output out(config, "quench");
  Stopwatch sw;
  const Model model(config.model);
  out.manifest.add_timing("model", sw.seconds());
  const OrbitalLayout& layout = model.layout();
  const QuenchProtocol protocol = config.protocol();
  const int n = config.model.n_particles;

  sw = Stopwatch();
  const GroundState gs = ground_state(model, protocol.omega_i_sq);
  const QuenchResult r = evolve(model, protocol, gs.vector, config.spectral_options());
  out.manifest.add_timing("evolve", sw.seconds());
  out.manifest.add_diagnostic("completeness_defect", r.defect);
  out.manifest.add_diagnostic("K", r.k);
  log << "ground state " << format_label(gs.dominant.label, layout) << " weight " << gs.dominant.weight
      << ", K=" << r.k << ", defect " << r.defect << "\n";

  sw = Stopwatch();
  const Matrix x2e = r.in_eigenbasis(model.x2_block(Parity::Even));
  const auto sigma2 = whole_line_variance(r, x2e, n);
  const auto pairs = variance_pair_terms(r, x2e, n);
  const int core = std::min(config.multiwell.core_wells, config.model.n_sites);
  const MomentSeries core_series = region_moment_series(r, region_operators(model, RegionSpec::core(core)));

  CsvWriter ts({"t", "sigma2_L", "sigma2_core", "N_core_over_N", "mean_x_core"});
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    const RegionMoments& m = core_series.values[j];
    ts.cell(r.times[j]).cell(sigma2[j]);
    if (m.variance) ts.cell(*m.variance); else ts.missing();
    ts.cell(m.number / n);
    if (m.mean) ts.cell(*m.mean); else ts.missing();
    ts.end_row();
  }
  out.write("timeseries.csv", ts.str());

  std::vector<std::string> header = {"t"};
  std::vector<std::vector<double>> pops;
  json prep = json::array();
  for (const auto& text : config.quench.targets) {
    StateLabel label;
    try {
      label = parse_label(text, layout);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("quench target '" + text + "': " + e.what());
    }
    const auto loc = model.parity_basis().locate(label, model.basis(), model.parity());
    if (!loc) throw ConfigError("quench target '" + text + "' is not in the basis");
    header.push_back(format_label(label, layout));
    pops.push_back(population_timeseries(r, *loc));
    const auto t = state_prep_search(r.times, pops.back(), config.quench.prep_threshold);
    double best = 0.0;
    for (double v : pops.back()) best = std::max(best, v);
    prep.push_back({{"target", format_label(label, layout)},
                    {"threshold", config.quench.prep_threshold},
                    {"first_time", t ? json(*t) : json(nullptr)},
                    {"max_population", best}});
  }
  CsvWriter pc(header);
  for (std::size_t j = 0; j < r.times.size(); ++j) {
    pc.cell(r.times[j]);
    for (const auto& p : pops) pc.cell(p[j]);
    pc.end_row();
  }
  out.write("populations.csv", pc.str());

  const BranchSpectrum br = fourier_branches(r.times, sigma2, pairs);
  CsvWriter fc({"omega", "amplitude"});
  for (std::size_t k = 0; k < br.dft.frequency.size(); ++k) {
    fc.cell(br.dft.frequency[k]).cell(br.dft.amplitude[k]);
    fc.end_row();
  }
  out.write("fourier.csv", fc.str());

  json lines = json::array();
  for (std::size_t k = 0; k < br.lines.size() && k < 50; ++k) {
    const auto& l = br.lines[k];
    lines.push_back({{"frequency", l.frequency}, {"amplitude", l.amplitude}, {"i", l.i}, {"j", l.j},
                     {"multiplicity", l.multiplicity}});
  }
  json peaks = json::array();
  for (const auto& p : br.peaks) {
    peaks.push_back({{"frequency", p.frequency}, {"amplitude", p.amplitude},
                     {"line_frequency", p.line_frequency ? json(*p.line_frequency) : json(nullptr)},
                     {"distance", p.distance}, {"matched", p.matched}});
  }
  json branches;
  branches["lines_above_1pct"] = br.lines_above_1pct;
  branches["parseval_variance"] = br.parseval_variance;
  branches["lines"] = lines;
  branches["peaks"] = peaks;
  out.write("branches.json", dump(branches));

  json summary;
  summary["ground_state"] = {{"energy", gs.energy}, {"gap", gs.gap},
                             {"dominant", format_label(gs.dominant.label, layout)}, {"weight", gs.dominant.weight}};
  summary["K"] = r.k;
  summary["full"] = r.full;
  summary["completeness_defect"] = r.defect;
  summary["sigma2_initial"] = sigma2.front();
  summary["time_average"] = dual_json(time_averaged_variance(r.times, sigma2, pairs));
  summary["temporal_variance"] = dual_json(temporal_variance(r.times, sigma2, pairs));
  summary["state_preparation"] = prep;
  out.write("quench.json", dump(summary));
  out.manifest.add_timing("observables", sw.seconds());
  out.finish();
  return kExitOk;
}

int cmd_response_scan(const RunConfig& config, std::ostream& log) {
  Output out(config, "response-scan");
  Stopwatch sw;
  const Model model(config.model);
  out.manifest.add_timing("model", sw.seconds());

  sw = Stopwatch();
  const auto crossings = run_detection(model, config, nullptr, log);
  out.manifest.add_timing("crossings", sw.seconds());

  ResponseScanConfig rc;
  rc.omega_i_sq = config.quench.omega_i_sq;
  rc.t_final = config.quench.t_final;
  rc.dt_sample = config.quench.dt_sample;
  rc.spectral = config.spectral_options();
  rc.threads = config.threads;
  const bool with_core = config.multiwell.core_wells < config.model.n_sites;
  if (with_core) rc.core_wells = config.multiwell.core_wells;
  const std::vector<double> uniform = config.response_grid();
  for (double w : uniform) {
    if (w > rc.omega_i_sq) throw ConfigError("response range must stay at or below quench.omega_i_sq");
  }

  // crossings met by the curve of the initial state's dominant label
  const GroundState gs = ground_state(model, rc.omega_i_sq);
  const StateLabel initial = gs.dominant.label;
  std::vector<std::pair<double, double>> centres;
  std::vector<const AvoidedCrossing*> relevant;
  const double resolution = 2.0 * std::numbers::pi / rc.t_final;
  for (const auto& c : crossings) {
    const bool touches = c.lower_before == initial || c.upper_before == initial || c.lower_after == initial ||
                         c.upper_after == initial;
    if (!touches) continue;
    relevant.push_back(&c);
    const double scale = std::max(c.width, c.slope_difference > 0.0 ? resolution / c.slope_difference : 0.0);
    centres.emplace_back(c.omega_sq_c, scale);
  }
  std::vector<std::pair<double, bool>> grid;
  for (double w : uniform) grid.emplace_back(w, false);
  if (config.response.refine_near_crossings) {
    const double hi = std::min(config.response.omega_f_max, rc.omega_i_sq);
    for (double w : refinement_points(centres, config.response.omega_f_min, hi)) grid.emplace_back(w, true);
  }
  std::sort(grid.begin(), grid.end());
  std::vector<std::pair<double, bool>> unique;
  for (const auto& g : grid) {
    if (!unique.empty() && std::abs(g.first - unique.back().first) <= 1e-12) {
      unique.back().second = unique.back().second && g.second;
      continue;
    }
    unique.push_back(g);
  }
  for (const auto& g : unique) rc.omega_f.push_back(g.first);

  sw = Stopwatch();
  const auto points = response_scan(model, rc);
  out.manifest.add_timing("response", sw.seconds());

  CsvWriter csv({"omega_f_sq", "refined", "dT_integral", "dT_integral_adjusted", "dT_spectral", "avg_integral",
                 "avg_integral_adjusted", "avg_spectral", "sigma2_initial", "max_deviation", "lines_above_1pct",
                 "defect", "K", "dT_core"});
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    csv.cell(p.omega_f_sq).cell(unique[i].second ? 1 : 0).cell(p.temporal.integral).cell(p.temporal.integral_adjusted)
        .cell(p.temporal.spectral).cell(p.average.integral).cell(p.average.integral_adjusted).cell(p.average.spectral)
        .cell(p.sigma2_initial).cell(p.max_deviation).cell(p.lines_above_1pct).cell(p.defect).cell(p.k);
    if (p.core_temporal) csv.cell(*p.core_temporal); else csv.missing();
    csv.end_row();
  }
  out.write("response.csv", csv.str());

  std::vector<double> positions;
  for (const auto& c : crossings) positions.push_back(c.omega_sq_c);
  const auto peaks = response_peaks(points, positions, ResponseForm::Integral);

  json pj = json::array();
  for (const auto& p : peaks) {
    pj.push_back({{"omega_f_sq", p.omega_f_sq}, {"dT_integral", p.value},
                  {"dT_spectral", points[p.index].temporal.spectral}, {"half_width", p.half_width},
                  {"bounded", p.bounded},
                  {"nearest_crossing", p.nearest_crossing ? json(*p.nearest_crossing) : json(nullptr)}});
  }
  json core_pj = json::array();
  if (with_core) {
    for (const auto& p : response_peaks(points, positions, ResponseForm::Core)) {
      core_pj.push_back({{"omega_f_sq", p.omega_f_sq}, {"dT_core", p.value}, {"half_width", p.half_width},
                         {"bounded", p.bounded},
                         {"nearest_crossing", p.nearest_crossing ? json(*p.nearest_crossing) : json(nullptr)}});
    }
  }
  json cj = json::array();
  for (const auto& c : crossings) cj.push_back(crossing_json(c, model.layout()));
  json rj = json::array();
  for (const auto* c : relevant) rj.push_back(c->omega_sq_c);
  json doc;
  doc["omega_i_sq"] = rc.omega_i_sq;
  doc["t_final"] = rc.t_final;
  doc["initial_dominant"] = format_label(initial, model.layout());
  doc["peak_form"] = "integral";
  doc["peaks"] = pj;
  if (with_core) {
    doc["core_wells"] = config.multiwell.core_wells;
    doc["core_peaks"] = core_pj;
  }
  doc["initial_curve_crossings"] = rj;
  doc["crossings"] = cj;
  out.write("peaks.json", dump(doc));
  log << peaks.size() << " response peaks\n";
  for (const auto& p : peaks) log << "  omega_f_sq=" << p.omega_f_sq << " dT=" << p.value << " hw=" << p.half_width << "\n";
  out.finish();
  return kExitOk;
}

int cmd_multiwell(const RunConfig& config, std::ostream& log) {
  Output out(config, "multiwell");
  Stopwatch sw;
  const Model model(config.model);
  out.manifest.add_timing("model", sw.seconds());
  const int n = config.model.n_particles;
  const double wf = config.quench.omega_f_sq;
  log << "basis " << model.basis().size() << " states, even block " << model.block_dimension(Parity::Even) << "\n";

  std::vector<GroundState> initial;
  for (double wi : config.multiwell.omega_i_list) initial.push_back(ground_state(model, wi));

  // one post-quench basis shared by all initial traps, grown until every
  // initial state is resolved
  sw = Stopwatch();
  const SpectralOptions opt = config.spectral_options();
  const auto dim = static_cast<int>(model.block_dimension(Parity::Even));
  int k = dim <= opt.full_limit ? dim : std::min(opt.initial_k, dim);
  EigenBasis basis;
  while (true) {
    basis = even_eigenbasis(model, wf, k);
    double worst = 0.0;
    for (const auto& gs : initial) {
      worst = std::max(worst, 1.0 - (basis.vectors.transpose() * gs.vector).squaredNorm());
    }
    log << "post-quench K=" << k << " worst defect " << worst << "\n";
    if (worst <= opt.defect_threshold || basis.complete) break;
    const int next = next_k(k, dim);
    if (opt.max_k > 0 && next > opt.max_k) {
      throw ConvergenceError("completeness defect " + std::to_string(worst) + " with K=" + std::to_string(k) +
                             "; raise spectral.max_k or reduce the system size");
    }
    k = next;
  }
  out.manifest.add_timing("post_quench_diagonalisation", sw.seconds());
  out.manifest.add_diagnostic("K", k);

  sw = Stopwatch();
  const RegionOperators core = region_operators(model, RegionSpec::core(config.multiwell.core_wells));
  // the basis is shared, so the operator is transformed once
  const Matrix core_eigen = [&] {
    const Matrix m = basis.vectors.transpose() * (core.number * basis.vectors);
    return Matrix(0.5 * (m + m.transpose()));
  }();
  std::vector<std::vector<double>> fractions;
  CsvWriter summary({"omega_i_sq", "ground_energy", "dominant", "N_core_over_N_initial", "N_core_over_N_final",
                     "N_core_over_N_min", "escaped_final", "escaped_mean", "defect", "K"});
  CsvWriter density({"omega_i_sq", "t", "x", "rho", "sqrt_rho"});
  std::vector<double> times;
  for (std::size_t a = 0; a < initial.size(); ++a) {
    QuenchProtocol protocol = config.protocol();
    protocol.omega_i_sq = config.multiwell.omega_i_list[a];
    protocol.validate();
    const QuenchResult r = evolve(basis, protocol, initial[a].vector, basis.complete ? 1.0 : opt.defect_threshold);
    times = r.times;
    const auto nd = r.expectation_series(core_eigen);
    std::vector<double> f(nd.size());
    double mn = 1.0, mean_escape = 0.0;
    for (std::size_t j = 0; j < nd.size(); ++j) {
      f[j] = nd[j] / n;
      mn = std::min(mn, f[j]);
      mean_escape += 1.0 - f[j];
    }
    mean_escape /= static_cast<double>(f.size());
    summary.cell(protocol.omega_i_sq).cell(initial[a].energy).cell(format_label(initial[a].dominant.label, model.layout()))
        .cell(f.front()).cell(f.back()).cell(mn).cell(1.0 - f.back()).cell(mean_escape).cell(r.defect).cell(r.k);
    summary.end_row();
    log << "omega_i_sq=" << protocol.omega_i_sq << " N_core/N final " << f.back() << " min " << mn << "\n";
    fractions.push_back(std::move(f));

    for (double t : config.multiwell.density_times) {
      if (t > protocol.t_final + 1e-12) continue;
      const ComplexVector block = r.state_at(t);
      const ComplexVector full = model.parity_basis().even.cast<std::complex<double>>() * block;
      const Vector rho = one_body_density(model, full);
      for (int j = 0; j < model.grid().n_points; ++j) {
        density.cell(protocol.omega_i_sq).cell(t).cell(model.grid().points[j]).cell(rho[j])
            .cell(std::sqrt(std::max(0.0, rho[j])));
        density.end_row();
      }
    }
  }
  std::vector<std::string> header = {"t"};
  for (double wi : config.multiwell.omega_i_list) header.push_back("N_core_over_N@" + format_double(wi));
  CsvWriter cf(header);
  for (std::size_t j = 0; j < times.size(); ++j) {
    cf.cell(times[j]);
    for (const auto& f : fractions) cf.cell(f[j]);
    cf.end_row();
  }
  out.write("core_fraction.csv", cf.str());
  out.write("density.csv", density.str());
  out.write("multiwell_summary.csv", summary.str());
  out.manifest.add_timing("observables", sw.seconds());
  out.finish();
  return kExitOk;
}

int cmd_wannier_dump(const RunConfig& config, std::ostream& log) {
  Output out(config, "wannier-dump");
  const Model model(config.model);
  const OrbitalSet& w = model.orbitals();
  const Grid& grid = model.grid();
  std::vector<std::string> header = {"x"};
  for (int o = 0; o < w.size(); ++o) {
    header.push_back("phi_b" + std::to_string(w.band_of[o]) + "_s" + std::to_string(w.site_of[o]));
  }
  CsvWriter amp(header);
  for (int j = 0; j < grid.n_points; ++j) {
    amp.cell(grid.points[j]);
    for (int o = 0; o < w.size(); ++o) amp.cell(w.vectors(j, o));
    amp.end_row();
  }
  out.write("wannier.csv", amp.str());

  CsvWriter meta({"orbital", "band", "site", "center", "spread", "energy"});
  for (int o = 0; o < w.size(); ++o) {
    meta.cell(o).cell(w.band_of[o]).cell(w.site_of[o]).cell(w.centers[o]).cell(w.spreads[o]).cell(w.energies[o]);
    meta.end_row();
  }
  out.write("orbitals.csv", meta.str());

  const OrbitalSet& e = model.eigen_orbitals();
  CsvWriter eig({"index", "energy", "parity"});
  for (int i = 0; i < e.size(); ++i) {
    double refl = 0.0;
    for (int j = 0; j < grid.n_points; ++j) refl += e.vectors(j, i) * e.vectors(grid.mirror(j), i);
    eig.cell(i).cell(e.energies[i]).cell(refl * grid.weight > 0 ? "even" : "odd");
    eig.end_row();
  }
  out.write("eigen.csv", eig.str());
  log << "wrote " << w.size() << " Wannier orbitals on " << grid.n_points << " points\n";
  out.finish();
  return kExitOk;
}

namespace {

double max_diff(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

Vector sorted_spectrum(const SparseMatrix& h) { return symmetric_eigenvalues(Matrix(h)); }

}  // namespace

std::vector<OracleCheck> oracle_checks(const ModelConfig& base) {
  std::vector<OracleCheck> checks;
  // closed-form two-site model against the sparse assembly
  for (const auto& [J, U, eps] : std::vector<std::array<double, 3>>{{1.0, 0.0, 0.0}, {0.02, 0.6, 0.1}, {0.3, 2.0, -0.5}}) {
    const FockBasis basis(2, OrbitalLayout{2, 1});
    Matrix h(2, 2);
    h << 0.0, -J, -J, eps;
    TwoBodyIntegrals w(2);
    w(0, 0, 0, 0) = U;
    w(1, 1, 1, 1) = U;
    const Vector sparse = sorted_spectrum(assemble_operator(basis, h, &w).matrix);
    const auto closed = oracle::two_site_two_boson(J, U, eps);
    checks.push_back({"two-site closed form J=" + format_double(J), max_diff(sparse, Vector::Map(closed.data(), 3)), 1e-12});
  }

  // dense first-quantised oracle against the full pipeline
  struct Case { int n, s, nb; double g, w2; };
  for (const Case& c : {Case{4, 3, 3, 1.0, 0.8}, Case{2, 3, 2, 4.0, 0.3}, Case{3, 3, 1, 0.0, 0.5}, Case{2, 5, 1, 1.0, 0.2}}) {
    ModelConfig mc = base;
    mc.n_particles = c.n;
    mc.n_sites = c.s;
    mc.n_bands = c.nb;
    mc.g = c.g;
    mc.n_grid = std::max(mc.n_grid, 60 * c.s);
    mc.wannier_at_initial_trap = false;
    const Model model(mc);
    const Vector sparse = sorted_spectrum(model.hamiltonian(c.w2));
    oracle::Config oc{c.n, c.s, c.nb, mc.n_grid, mc.v0, c.g, c.w2};
    const Vector dense = oracle::dense_brute_force(oc);
    checks.push_back({"dense oracle N=" + std::to_string(c.n) + " S=" + std::to_string(c.s) + " bands=" +
                          std::to_string(c.nb) + " g=" + format_double(c.g),
                      max_diff(sparse, dense), 1e-9});
  }
  return checks;
}

int cmd_selftest(const RunConfig& config, const SelftestOptions& options, std::ostream& log) {
  Output out(config, "selftest");
  json derived;

  std::vector<OracleCheck> checks = oracle_checks(config.model);

  if (options.emit_derived) {
    ModelConfig mc = config.model;
    mc.n_particles = 4;
    mc.n_sites = 3;
    mc.n_bands = 3;
    mc.g = 1.0;
    const Model model(mc);
    std::size_t self = 0;
    for (std::size_t i = 0; i < model.basis().size(); ++i) self += model.parity().self_symmetric(i) ? 1 : 0;
    derived["basis_N4_M9"] = model.basis().size();
    derived["self_mirrored_N4_M9"] = self;
    derived["even_block_N4_M9"] = model.block_dimension(Parity::Even);
    derived["odd_block_N4_M9"] = model.block_dimension(Parity::Odd);
    const Grid g3 = build_grid(mc.n_grid, 3);
    const OrbitalSet e3 = single_particle_eigs(g3, model.potential(0.0), 10);
    derived["single_particle_S3"] = e3.energies;
    const BandAssignment b3 = classify_bands(e3, 3, 3);
    const Vector x0 = symmetric_eigenvalues(band_position_operator(e3, g3, b3, 0).position_matrix);
    derived["band0_position_eigenvalues_S3"] = std::vector<double>(x0.data(), x0.data() + x0.size());
    const Grid g7 = build_grid(std::max(mc.n_grid, 560), 7);
    const OrbitalSet e7 = single_particle_eigs(g7, model.potential(0.0), 8);
    derived["gap_7th_8th_S7"] = e7.energies[7] - e7.energies[6];
    derived["spread_band0_S7"] = e7.energies[6] - e7.energies[0];
    const BhmParams p = extract_params(model.integrals().one, model.integrals().two, 0.0, 3);
    derived["bhm"] = {{"J", p.J}, {"U", p.U}, {"U_over_J", p.U / p.J}, {"eps_per_omega_sq", p.eps_per_omega_sq},
                      {"eps_wall", p.eps_wall}, {"e0", p.e0}};
    const FockBasis b0(4, OrbitalLayout{3, 1});
    const auto st = [](std::vector<int> v) { return NumberState{std::move(v)}; };
    derived["eps_star_121_130_over_U"] = diagonal_crossing(st({1, 2, 1}), st({1, 3, 0}), p) / p.U;
    derived["eps_star_040_130_over_U"] = diagonal_crossing(st({0, 4, 0}), st({1, 3, 0}), p) / p.U;
    derived["coupling_121_130S_over_J"] =
        bhm_matrix_element({st({1, 2, 1}), Combination::None}, {st({1, 3, 0}), Combination::Symmetric}, b0, p) / p.J;
    const auto zero_u = oracle::two_site_two_boson(1.0, 0.0, 0.0);
    derived["two_site_U0_J1"] = std::vector<double>(zero_u.begin(), zero_u.end());
    const auto strong = oracle::two_site_two_boson(0.01, 1.0, 0.0);
    derived["two_site_superexchange_shift"] = strong[0];
    derived["two_site_superexchange_estimate"] = -4.0 * 0.01 * 0.01 / 1.0;
    out.write("derived.json", dump(derived));
  }

  if (options.convergence) {
    std::vector<ConvergenceRung> grid_ladder, band_ladder;
    for (int ng : config.convergence.grid_ladder) {
      ModelConfig mc = config.model;
      mc.n_grid = ng;
      grid_ladder.push_back({"n_grid=" + std::to_string(ng), mc});
    }
    for (int nb : config.convergence.band_ladder) {
      ModelConfig mc = config.model;
      mc.n_bands = nb;
      band_ladder.push_back({"n_bands=" + std::to_string(nb), mc});
    }
    CsvWriter csv({"ladder", "rung", "ground_energy", "delta_energy", "max_relative_deviation"});
    for (const auto& [name, ladder] : {std::pair{"grid", grid_ladder}, std::pair{"bands", band_ladder}}) {
      const auto rep = convergence_report(ladder, config.protocol(), config.convergence.window, config.spectral_options());
      for (const auto& r : rep.rungs) {
        csv.cell(name).cell(r.label).cell(r.ground_energy).cell(r.delta_energy).cell(r.max_relative_deviation);
        csv.end_row();
        log << name << " " << r.label << " E0=" << r.ground_energy << " dE=" << r.delta_energy
            << " max rel dev sigma2=" << r.max_relative_deviation << "\n";
      }
    }
    out.write("convergence.csv", csv.str());
  }

  bool all = true;
  CsvWriter table({"check", "error", "tolerance", "pass"});
  for (const auto& c : checks) {
    log << (c.pass() ? "PASS " : "FAIL ") << c.name << "  error=" << c.error << " tol=" << c.tolerance << "\n";
    table.cell(c.name).cell(c.error).cell(c.tolerance).cell(c.pass() ? "yes" : "no");
    table.end_row();
    all = all && c.pass();
  }
  out.write("selftest.csv", table.str());
  out.finish();
  return all ? kExitOk : kExitFailure;
}

}  // namespace lq
