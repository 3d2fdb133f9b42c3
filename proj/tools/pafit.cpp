#include "pafit/boundstates.hpp"
#include "pafit/dataio.hpp"
#include "pafit/errors.hpp"
#include "pafit/fitter.hpp"
#include "pafit/potential.hpp"
#include "pafit/rotation.hpp"
#include "pafit/spectra.hpp"
#include "pafit/units.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace pafit;
using nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_numeric = 2;

struct GlobalOptions {
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  bool quiet = false;
};

// Thrown for flag combinations CLI11 cannot express.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

void emit(const GlobalOptions &g, const std::string &text) {
  if (g.out.empty())
    std::cout << text;
  else
    dataio::writeFile(g.out, text);
}

void note(const GlobalOptions &g, const std::string &msg) {
  if (!g.quiet)
    std::cerr << msg << '\n';
}

std::string formatFor(const GlobalOptions &g, const std::string &fallback,
                      std::initializer_list<std::string> allowed,
                      const std::string &command) {
  const std::string f = g.format.empty() ? fallback : g.format;
  if (std::find(allowed.begin(), allowed.end(), f) == allowed.end())
    throw UsageError(command + ": --format " + f + " is not supported");
  return f;
}

std::vector<IsotopologueSpec> loadIsotopologues(const std::string &path) {
  if (path.empty())
    return dataio::loadBundledIsotopologues();
  return dataio::parseIsotopologues(dataio::readFile(path));
}

std::vector<LineRecord> loadLines(const GlobalOptions &g,
                                  const std::string &path,
                                  const std::vector<IsotopologueSpec> &isos) {
  if (path.empty())
    return dataio::loadBundledTable1();
  auto list = dataio::parseLineList(dataio::readFile(path), isos);
  for (const auto &w : list.warnings)
    note(g, "warning: " + w);
  return std::move(list.records);
}

FitResult loadFit(const std::string &path) {
  return fitter::parseFitResultJson(dataio::readFile(path));
}

std::string defaultIsotopologue(const FitResult &fit) {
  for (const auto &iso : fit.isotopologues)
    if (fit.v_d.count(iso.id))
      return iso.id;
  throw UsageError("fit result has no isotopologues");
}

//------------------------------------------------------------------------------

struct FitArgs {
  std::string lines;
  std::string isotopologues;
  std::string residuals;
  bool fix_c8 = false;
  std::optional<double> c6;
  std::optional<double> c8;
  double quad_tol = 1e-10;
  int max_iterations = 500;
};

int cmdFit(const GlobalOptions &g, const FitArgs &a) {
  const auto format = formatFor(g, "json", {"json", "csv"}, "fit");
  const auto isos = loadIsotopologues(a.isotopologues);
  const auto records = loadLines(g, a.lines, isos);
  auto problem = fitter::makeFitProblem(records, isos);
  problem.fix_c8 = a.fix_c8;
  problem.quad_abs_tol = a.quad_tol;
  problem.max_iterations = a.max_iterations;
  if (a.c6)
    problem.initial = PotentialParams{*a.c6, a.c8.value_or(0.0)};

  const auto result = fitter::fitNde(problem);
  const auto rows = fitter::residualReport(result, problem);
  emit(g, format == "json" ? fitter::fitResultJson(result)
                           : fitter::residualCsv(rows));
  if (!a.residuals.empty())
    dataio::writeFile(a.residuals, fitter::residualCsv(rows));

  std::string summary = "c6 = " + dataio::formatNumber(result.params.c6) +
                        " a.u., c8 = " +
                        dataio::formatNumber(result.params.c8) + " a.u.";
  for (const auto &[id, vd] : result.v_d)
    summary += ", v_d(" + id + ") = " + dataio::formatNumber(vd);
  summary += ", rms = " + dataio::formatNumber(result.rms) + " cm^-1";
  note(g, summary);
  for (const auto &b : result.active_bounds)
    note(g, "bound: " + b);
  for (const auto &w : result.warnings)
    note(g, "warning: " + w);
  if (!result.converged) {
    std::cerr << "pafit fit: did not converge\n";
    return exit_numeric;
  }
  return exit_ok;
}

//------------------------------------------------------------------------------

struct PredictArgs {
  std::string fit;
  std::string isotopologue;
  int dv_from = 0;
  int dv_to = 0;
};

int cmdPredict(const GlobalOptions &g, const PredictArgs &a) {
  const auto format = formatFor(g, "csv", {"csv", "json"}, "predict");
  if (a.dv_from >= 0 || a.dv_to >= 0)
    throw UsageError("predict: dv must be <= -1");
  const auto fit = loadFit(a.fit);
  const auto id = a.isotopologue.empty() ? defaultIsotopologue(fit)
                                         : a.isotopologue;
  if (!fit.v_d.count(id))
    throw UsageError("predict: fit has no isotopologue '" + id + "'");
  const auto levels =
      nde::predictSeries(fit.model(id), fit.v_d.at(id),
                         std::min(a.dv_from, a.dv_to),
                         std::max(a.dv_from, a.dv_to));
  if (format == "csv") {
    std::string out = "isotopologue,dv,delta_pa_cm1\n";
    for (const auto &l : levels)
      out += id + ',' + std::to_string(l.dv) + ',' +
             dataio::formatNumber(units::hartreeToCm1(l.energy)) + '\n';
    emit(g, out);
  } else {
    ordered_json j;
    j["schema_version"] = 1;
    j["isotopologue"] = id;
    j["levels"] = ordered_json::array();
    for (const auto &l : levels)
      j["levels"].push_back(
          {{"dv", l.dv}, {"delta_pa_cm1", units::hartreeToCm1(l.energy)}});
    emit(g, j.dump(2) + '\n');
  }
  return exit_ok;
}

//------------------------------------------------------------------------------

struct LevelsArgs {
  std::string fit;
  std::string isotopologue;
  int anchor_dv = -11;
  std::optional<double> anchor_energy;
  int dv_from = -13;
  int dv_to = -5;
  double wall_lo = 8.0;
  double wall_hi = 12.0;
  double r_max = 400.0;
  std::size_t points = 320000;
  bool no_refinement_check = false;
  std::string wavefunctions;
};

int cmdLevels(const GlobalOptions &g, const LevelsArgs &a) {
  const auto format = formatFor(g, "csv", {"csv", "json"}, "levels");
  const auto fit = loadFit(a.fit);
  const auto id = a.isotopologue.empty() ? defaultIsotopologue(fit)
                                         : a.isotopologue;
  if (!fit.v_d.count(id))
    throw UsageError("levels: fit has no isotopologue '" + id + "'");

  double anchor_cm1 = 0.0;
  if (a.anchor_energy) {
    anchor_cm1 = *a.anchor_energy;
  } else {
    const auto it = std::find_if(fit.lines.begin(), fit.lines.end(),
                                 [&](const FitLine &l) {
                                   return l.isotopologue_id == id &&
                                          l.dv == a.anchor_dv;
                                 });
    if (it == fit.lines.end())
      throw UsageError("levels: no observed line at dv = " +
                       std::to_string(a.anchor_dv) +
                       "; pass --anchor-energy");
    anchor_cm1 = it->energy;
  }

  const auto model = fit.model(id);
  WallSearch search;
  search.wall_lo = a.wall_lo;
  search.wall_hi = a.wall_hi;
  search.r_max = a.r_max;
  search.n_points = a.points;
  const auto cal = boundstates::calibrateWall(
      fit.params, model.mu, a.anchor_dv, units::cm1ToHartree(anchor_cm1),
      search);
  note(g, "wall at " + dataio::formatNumber(cal.grid.r_min) + " a0, anchor " +
              std::to_string(a.anchor_dv) + " has " +
              std::to_string(cal.anchor_index) + " nodes");

  BoundStateOptions opt;
  opt.check_refinement = !a.no_refinement_check;
  const auto levels = boundstates::levelsByDv(
      fit.params, model.mu, cal, std::min(a.dv_from, a.dv_to),
      std::max(a.dv_from, a.dv_to), opt);

  struct Row {
    int dv;
    double energy, nde_energy, rel_diff, r_eff, r_turning;
    int nodes;
  };
  std::vector<Row> rows;
  for (const auto &l : levels) {
    const double e = units::hartreeToCm1(l.state.energy);
    double e_nde = 0.0;
    if (l.dv <= -1)
      e_nde = units::hartreeToCm1(
          nde::predictSeries(model, fit.v_d.at(id), l.dv, l.dv)[0].energy);
    rows.push_back({l.dv, e, e_nde, l.dv <= -1 ? (e - e_nde) / e_nde : 0.0,
                    l.state.r_eff_wf,
                    potential::outerTurningPoint(fit.params, l.state.energy),
                    l.state.nodes});
    if (!a.wavefunctions.empty()) {
      std::filesystem::create_directories(a.wavefunctions);
      dataio::writeFile(std::filesystem::path(a.wavefunctions) /
                            ("psi_dv" + std::to_string(l.dv) + ".csv"),
                        boundstates::wavefunctionCsv(l.state));
    }
  }

  if (format == "csv") {
    std::string out = "dv,energy_cm1,nde_energy_cm1,rel_diff,r_eff_wf_a0,"
                      "r_turning_a0,nodes\n";
    for (const auto &r : rows)
      out += std::to_string(r.dv) + ',' + dataio::formatNumber(r.energy) +
             ',' + dataio::formatNumber(r.nde_energy) + ',' +
             dataio::formatNumber(r.rel_diff) + ',' +
             dataio::formatNumber(r.r_eff) + ',' +
             dataio::formatNumber(r.r_turning) + ',' +
             std::to_string(r.nodes) + '\n';
    emit(g, out);
  } else {
    ordered_json j;
    j["schema_version"] = 1;
    j["isotopologue"] = id;
    j["wall_a0"] = cal.grid.r_min;
    j["anchor"] = {{"dv", cal.anchor_dv},
                   {"energy_cm1", anchor_cm1},
                   {"achieved_cm1", units::hartreeToCm1(cal.achieved_energy)},
                   {"nodes", cal.anchor_index}};
    j["levels"] = ordered_json::array();
    for (const auto &r : rows)
      j["levels"].push_back({{"dv", r.dv},
                             {"energy_cm1", r.energy},
                             {"nde_energy_cm1", r.nde_energy},
                             {"rel_diff", r.rel_diff},
                             {"r_eff_wf_a0", r.r_eff},
                             {"r_turning_a0", r.r_turning},
                             {"nodes", r.nodes}});
    emit(g, j.dump(2) + '\n');
  }
  return exit_ok;
}

//------------------------------------------------------------------------------

struct SpectrumArgs {
  std::string lines;
  std::string isotopologues;
  std::string isotopologue = "176Yb87Rb";
  std::optional<int> dv;
  std::optional<double> delta_pa;
  std::optional<double> b_rot;
  double delta_r = 0.0;
  std::optional<double> depth;
  int f_prime = 2;
  int r_prime_max = 2;
  std::vector<double> band_amplitudes{1.0, 0.6, 0.3};
  int hyperfine_sign = -1;
  std::optional<double> start;
  std::optional<double> stop;
  double step = 2e-5;
  double fwhm = 1.6e-4;
  std::string shape = "gaussian";
  double noise = 0.0;
  std::string components_out;
};

int cmdSpectrum(const GlobalOptions &g, const SpectrumArgs &a) {
  const auto format = formatFor(g, "csv", {"csv", "svg"}, "spectrum");
  double delta_pa = 0.0;
  RotationalLevel lvl;
  lvl.f_prime = a.f_prime;
  lvl.r_prime_max = a.r_prime_max;
  double depth = a.depth.value_or(0.1);

  if (a.delta_pa) {
    if (!a.b_rot)
      throw UsageError("spectrum: --delta-pa needs --b-rot");
    delta_pa = *a.delta_pa;
    lvl.b_rot = *a.b_rot;
    lvl.delta_r = a.delta_r;
  } else {
    if (!a.dv)
      throw UsageError("spectrum: give either --dv or --delta-pa");
    const auto isos = loadIsotopologues(a.isotopologues);
    const auto records = loadLines(g, a.lines, isos);
    const auto it = std::find_if(
        records.begin(), records.end(), [&](const LineRecord &r) {
          return r.isotopologue_id == a.isotopologue && r.dv == *a.dv &&
                 r.f_prime == 2 && r.observed;
        });
    if (it == records.end())
      throw UsageError("spectrum: no observed line for " + a.isotopologue +
                       " at dv = " + std::to_string(*a.dv));
    if (!it->bRotCm1())
      throw UsageError("spectrum: line has no rotational constant");
    delta_pa = *it->delta_pa;
    lvl.b_rot = *it->bRotCm1();
    lvl.delta_r = it->deltaR1Cm1().value_or(0.0);
    if (!it->deltaR1Cm1())
      note(g, "note: splitting not resolved for this line; using 0");
    if (!a.depth && it->rel_depth)
      depth = *it->rel_depth;
  }

  ComponentOptions copt;
  copt.band_amplitudes = a.band_amplitudes;
  copt.hyperfine_sign = a.hyperfine_sign;
  const auto comps = rotation::components(delta_pa, lvl, copt);
  const auto lines = spectra::toSpectralLines(comps, depth, copt.nu_res);
  if (!a.components_out.empty())
    dataio::writeFile(a.components_out, rotation::componentsCsv(comps));

  SpectrumConfig cfg;
  const auto [lo, hi] = std::minmax_element(
      lines.begin(), lines.end(), [](const auto &x, const auto &y) {
        return x.delta_pa < y.delta_pa;
      });
  const double pad = 10.0 * a.fwhm;
  cfg.grid_start = a.start.value_or(lo->delta_pa - pad);
  cfg.grid_stop = a.stop.value_or(hi->delta_pa + pad);
  cfg.grid_step = a.step;
  cfg.line_fwhm = a.fwhm;
  cfg.line_shape =
      a.shape == "lorentzian" ? LineShape::lorentzian : LineShape::gaussian;
  cfg.noise_rms = a.noise;
  cfg.seed = g.seed;
  try {
    cfg.validate();
  } catch (const DomainError &e) {
    throw UsageError(std::string("spectrum: ") + e.what());
  }
  const auto s = spectra::synthesize(lines, cfg);
  emit(g, format == "svg" ? spectra::spectrumSvg(s) : spectra::spectrumCsv(s));
  note(g, std::to_string(comps.size()) + " components over [" +
              dataio::formatNumber(cfg.grid_start) + ", " +
              dataio::formatNumber(cfg.grid_stop) + "] cm^-1");
  return exit_ok;
}

//------------------------------------------------------------------------------

struct BarrierArgs {
  double c6 = 0.0;
  double mu_amu = 0.0;
  int l = 0;
};

int cmdBarrier(const GlobalOptions &g, const BarrierArgs &a) {
  const auto format = formatFor(g, "json", {"json", "csv"}, "barrier");
  if (a.l < 1)
    throw UsageError("barrier: l must be >= 1");
  const PotentialParams p{a.c6, 0.0};
  const double mu = units::amuToMe(a.mu_amu);
  const auto b = potential::centrifugalBarrier(p, mu, a.l);
  const auto n = potential::numericBarrier(p, mu, a.l, 0.25 * b.r_barrier,
                                           4.0 * b.r_barrier);
  if (format == "json") {
    ordered_json j;
    j["schema_version"] = 1;
    j["c6_au"] = a.c6;
    j["mu_amu"] = a.mu_amu;
    j["l"] = a.l;
    j["r_b_a0"] = b.r_barrier;
    j["height_hartree"] = b.height;
    j["height_uK"] = b.heightMicroKelvin();
    j["numeric_r_b_a0"] = n.r_barrier;
    j["numeric_height_uK"] = n.heightMicroKelvin();
    emit(g, j.dump(2) + '\n');
  } else {
    emit(g, "c6_au,mu_amu,l,r_b_a0,height_hartree,height_uK\n" +
                dataio::formatNumber(a.c6) + ',' +
                dataio::formatNumber(a.mu_amu) + ',' + std::to_string(a.l) +
                ',' + dataio::formatNumber(b.r_barrier) + ',' +
                dataio::formatNumber(b.height) + ',' +
                dataio::formatNumber(b.heightMicroKelvin()) + '\n');
  }
  return exit_ok;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Near-dissociation analysis of photoassociation lines"};
  app.name("pafit");
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}));
  app.add_option("--seed", g.seed, "Seed for synthetic noise");
  app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");

  FitArgs fit_args;
  auto *fit = app.add_subcommand("fit", "Fit c6, c8 and v_d to a line list");
  fit->fallthrough();
  fit->add_option("--lines", fit_args.lines,
                  "Line list CSV (default: bundled Table I)");
  fit->add_option("--isotopologues", fit_args.isotopologues,
                  "Isotopologue CSV (default: bundled)");
  fit->add_option("--residuals", fit_args.residuals, "Write residual CSV");
  fit->add_flag("--fix-c8", fit_args.fix_c8, "Hold c8 at its initial value");
  auto *c6_opt = fit->add_option("--c6", fit_args.c6, "Initial c6 (a.u.)")
                     ->check(CLI::PositiveNumber);
  fit->add_option("--c8", fit_args.c8, "Initial c8 (a.u.)")
      ->check(CLI::NonNegativeNumber)
      ->needs(c6_opt);
  fit->add_option("--quad-tol", fit_args.quad_tol,
                  "Absolute quadrature tolerance on the count")
      ->check(CLI::PositiveNumber);
  fit->add_option("--max-iterations", fit_args.max_iterations)
      ->check(CLI::PositiveNumber);

  PredictArgs predict_args;
  auto *predict =
      app.add_subcommand("predict", "Predict line positions from a fit");
  predict->fallthrough();
  predict->add_option("--fit", predict_args.fit, "Fit result JSON")
      ->required();
  predict->add_option("--isotopologue", predict_args.isotopologue);
  predict->add_option("--dv-from", predict_args.dv_from)->required();
  predict->add_option("--dv-to", predict_args.dv_to)->required();

  LevelsArgs levels_args;
  auto *levels = app.add_subcommand(
      "levels", "Numerov levels in the fitted potential with a calibrated "
                "inner wall");
  levels->fallthrough();
  levels->add_option("--fit", levels_args.fit, "Fit result JSON")->required();
  levels->add_option("--isotopologue", levels_args.isotopologue);
  levels->add_option("--anchor-dv", levels_args.anchor_dv, "Default -11");
  levels->add_option("--anchor-energy", levels_args.anchor_energy,
                     "cm^-1 (default: the observed line at --anchor-dv)");
  levels->add_option("--dv-from", levels_args.dv_from, "Default -13");
  levels->add_option("--dv-to", levels_args.dv_to, "Default -5");
  levels->add_option("--wall-lo", levels_args.wall_lo, "a0")
      ->check(CLI::PositiveNumber);
  levels->add_option("--wall-hi", levels_args.wall_hi, "a0")
      ->check(CLI::PositiveNumber);
  levels->add_option("--r-max", levels_args.r_max, "a0")
      ->check(CLI::PositiveNumber);
  levels->add_option("--points", levels_args.points)
      ->check(CLI::Range(2000, 100000000));
  levels->add_flag("--no-refinement-check", levels_args.no_refinement_check);
  levels->add_option("--wavefunctions", levels_args.wavefunctions,
                     "Directory for per-level wavefunction CSVs");

  SpectrumArgs sa;
  auto *spectrum =
      app.add_subcommand("spectrum", "Synthesize a trap-loss spectrum");
  spectrum->fallthrough();
  spectrum->add_option("--lines", sa.lines,
                       "Line list CSV (default: bundled Table I)");
  spectrum->add_option("--isotopologues", sa.isotopologues);
  spectrum->add_option("--isotopologue", sa.isotopologue);
  spectrum->add_option("--dv", sa.dv, "Take the level from the line list");
  spectrum->add_option("--delta-pa", sa.delta_pa, "cm^-1");
  spectrum->add_option("--b-rot", sa.b_rot, "cm^-1")
      ->check(CLI::PositiveNumber);
  spectrum->add_option("--delta-r", sa.delta_r, "cm^-1");
  spectrum->add_option("--depth", sa.depth)->check(CLI::Range(0.0, 1.0));
  spectrum->add_option("--f-prime", sa.f_prime)
      ->check(CLI::IsMember({1, 2}));
  spectrum->add_option("--r-prime-max", sa.r_prime_max)
      ->check(CLI::NonNegativeNumber);
  spectrum->add_option("--band-amplitudes", sa.band_amplitudes,
                       "Relative amplitude per R'");
  spectrum->add_option("--hyperfine-sign", sa.hyperfine_sign)
      ->check(CLI::IsMember({-1, 1}));
  spectrum->add_option("--start", sa.start, "cm^-1");
  spectrum->add_option("--stop", sa.stop, "cm^-1");
  spectrum->add_option("--step", sa.step, "cm^-1");
  spectrum->add_option("--fwhm", sa.fwhm, "cm^-1");
  spectrum->add_option("--shape", sa.shape)
      ->check(CLI::IsMember({"gaussian", "lorentzian"}));
  spectrum->add_option("--noise", sa.noise, "Gaussian noise rms")
      ->check(CLI::NonNegativeNumber);
  spectrum->add_option("--components-out", sa.components_out,
                       "Write the component list as CSV");

  BarrierArgs barrier_args;
  auto *barrier =
      app.add_subcommand("barrier", "Centrifugal barrier of a -c6/r^6 well");
  barrier->fallthrough();
  barrier->add_option("--c6", barrier_args.c6, "a.u.")
      ->required()
      ->check(CLI::PositiveNumber);
  barrier->add_option("--mu", barrier_args.mu_amu, "Reduced mass (amu)")
      ->required()
      ->check(CLI::PositiveNumber);
  barrier->add_option("--l", barrier_args.l, "Partial wave")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "pafit: " << e.what() << '\n';
    return exit_input;
  }

  try {
    if (*fit)
      return cmdFit(g, fit_args);
    if (*predict)
      return cmdPredict(g, predict_args);
    if (*levels)
      return cmdLevels(g, levels_args);
    if (*spectrum)
      return cmdSpectrum(g, sa);
    if (*barrier)
      return cmdBarrier(g, barrier_args);
  } catch (const NumericError &e) {
    std::cerr << "pafit: " << e.what() << '\n';
    return exit_numeric;
  } catch (const CalibrationError &e) {
    std::cerr << "pafit: " << e.what() << '\n';
    return exit_numeric;
  } catch (const ResolutionError &e) {
    std::cerr << "pafit: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception &e) {
    std::cerr << "pafit: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}
