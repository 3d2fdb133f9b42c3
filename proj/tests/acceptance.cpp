#include "pafit/boundstates.hpp"
#include "pafit/dataio.hpp"
#include "pafit/fitter.hpp"
#include "pafit/nde.hpp"
#include "pafit/potential.hpp"
#include "pafit/rotation.hpp"
#include "pafit/spectra.hpp"
#include "pafit/units.hpp"
#include "table1_reff.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace pafit;
using Clock = std::chrono::steady_clock;
using test::table1_reff;

namespace {

namespace tol {
// 1: joint fit of the bundled lines
constexpr double c6_ref = 6190.0, c6_rel = 0.15;
constexpr double c8_ref = 403000.0, c8_factor = 2.0;
constexpr double vd176_ref = 0.365, vd174_ref = 0.991, vd_abs = 0.15;
constexpr double fit_rms_cm1 = 0.1;
constexpr double fit_seconds = 10.0;
// 2: pure-c6 law
constexpr double law_rel = 1e-3;
constexpr double i6_quoted = 0.43120, i6_quoted_rel = 1.2e-4;
constexpr double oracle_rel = 1e-9;
constexpr double law_seconds = 1.0;
// 3: spot check
constexpr double spot_count = 11.365;
constexpr double spot_energy = -4.80, spot_abs = 0.02;
constexpr double spot_observed = -4.897, spot_rel = 0.025;
// 4: rotational radii
constexpr double reff_abs_a0 = 0.1;
// 5: barrier
constexpr double barrier_c6 = 3186.0, barrier_mu_amu = 58.1737;
constexpr int barrier_l = 3;
constexpr double barrier_r = 114.0, barrier_r_abs = 0.5;
constexpr double barrier_uk = 916.0, barrier_uk_abs = 9.0;
constexpr double barrier_numeric_rel = 1e-9;
// 6: Numerov against NDE
constexpr int anchor_dv = -11;
constexpr int outer_from = -12, outer_to = -5;
constexpr double level_rel = 0.05;
// 7: band between the turning-point curve and 0.85 of it
constexpr double band_scale = 0.85;
constexpr int band_required = 12;
// 8: mass scaling
constexpr double mass_rms_cm1 = 0.1;
// 9: synthesis round trip
constexpr double center_abs = 2e-5;
constexpr int nine_required = 7;
constexpr double peak_min_depth = 0.005;
constexpr double window_pad_fwhm = 10.0;
// 10: property suites
constexpr double recovery_rel = 1e-6;
constexpr double unit_rel = 1e-12;
constexpr double refinement_cm1 = 1e-6;
constexpr double suite_seconds = 60.0;
} // namespace tol

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double relDiff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

const std::vector<IsotopologueSpec> &isotopologues() {
  static const auto isos = dataio::loadBundledIsotopologues();
  return isos;
}

double mu(std::string_view id) {
  return dataio::findIsotopologue(isotopologues(), id).reducedMassMe();
}

struct JointFit {
  FitProblem problem;
  FitResult result;
  double seconds;
};

const JointFit &jointFit() {
  static const JointFit fit = [] {
    const auto t0 = Clock::now();
    const auto records = dataio::loadBundledTable1();
    auto problem = fitter::makeFitProblem(records, isotopologues());
    auto result = fitter::fitNde(problem);
    return JointFit{std::move(problem), std::move(result), seconds(t0)};
  }();
  return fit;
}

//------------------------------------------------------------------------------

Outcome tableFit() {
  const auto &f = jointFit();
  const auto &r = f.result;
  const double vd176 = r.v_d.at("176Yb87Rb");
  const double vd174 = r.v_d.at("174Yb87Rb");
  const bool ok =
      r.converged && f.problem.lines.size() == 19 &&
      std::abs(r.params.c6 - tol::c6_ref) <= tol::c6_rel * tol::c6_ref &&
      r.params.c8 >= tol::c8_ref / tol::c8_factor &&
      r.params.c8 <= tol::c8_ref * tol::c8_factor &&
      std::abs(vd176 - tol::vd176_ref) <= tol::vd_abs &&
      std::abs(vd174 - tol::vd174_ref) <= tol::vd_abs &&
      r.rms <= tol::fit_rms_cm1 && f.seconds <= tol::fit_seconds;
  return {ok, fmt("%zu lines, converged=%d, c6=%.1f, c8=%.4g, v_d176=%.4f, "
                  "v_d174=%.4f, rms=%.4f cm-1, %.2f s",
                  f.problem.lines.size(), r.converged, r.params.c6,
                  r.params.c8, vd176, vd174, r.rms, f.seconds)};
}

Outcome pureC6Law() {
  const auto t0 = Clock::now();
  boost::math::quadrature::tanh_sinh<double> ts;
  const double inner = ts.integrate(
      [](double x) {
        const double x3 = x * x * x;
        return x3 / (1.0 + std::sqrt(1.0 - x3 * x3));
      },
      0.0, 1.0);
  const double i6 = (inner + 0.5) / 1.5;

  const double m = mu("176Yb87Rb");
  const NdeModel model{{tol::c6_ref, 0.0}, m};
  const double g6 = 1.5 * i6 * std::sqrt(2.0 * m) *
                    std::pow(tol::c6_ref, 1.0 / 6.0) / std::numbers::pi;
  double worst = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double e_cm1 = 0.1 * std::pow(300.0, i / 60.0);
    const double e = units::cm1ToHartree(-e_cm1);
    worst = std::max(worst,
                     relDiff(nde::quantumDefect(model, e), g6 * std::cbrt(-e)));
  }
  const double t = seconds(t0);
  const double i6_lib = nde::pureC6PhaseConstant() / 1.5;
  const bool ok = worst <= tol::law_rel &&
                  relDiff(i6, i6_lib) <= tol::oracle_rel &&
                  relDiff(i6, tol::i6_quoted) <= tol::i6_quoted_rel &&
                  t <= tol::law_seconds;
  return {ok, fmt("max rel dev %.2e over 61 energies in [0.1, 30] cm-1, "
                  "I6 by quadrature %.6f (quoted %.5f), %.3f s",
                  worst, i6, tol::i6_quoted, t)};
}

Outcome spotCheck() {
  const NdeModel model{{tol::c6_ref, 0.0}, mu("176Yb87Rb")};
  const double e =
      units::hartreeToCm1(nde::levelEnergy(model, tol::spot_count));
  const double off = std::abs(e - tol::spot_observed) / -tol::spot_observed;
  const bool ok =
      std::abs(e - tol::spot_energy) <= tol::spot_abs && off <= tol::spot_rel;
  return {ok, fmt("E(11.365) = %.4f cm-1, %.2f%% from the observed %.3f", e,
                  100.0 * off, tol::spot_observed)};
}

Outcome rotationalRadii() {
  double worst = 0.0;
  int worst_dv = 0;
  for (const auto &row : table1_reff) {
    const double r = rotation::radiusFromB(row.b_mcm1 * 1e-3,
                                           mu(row.isotopologue));
    if (std::abs(r - row.r_eff_a0) > worst) {
      worst = std::abs(r - row.r_eff_a0);
      worst_dv = row.dv;
    }
  }
  const auto records = dataio::loadBundledTable1();
  const auto with_b = std::count_if(records.begin(), records.end(),
                                    [](const auto &r) { return r.b_rot_mcm1; });
  const bool ok = worst <= tol::reff_abs_a0 &&
                  static_cast<std::size_t>(with_b) == table1_reff.size();
  return {ok, fmt("%zu tabulated radii (every row with B), max |dev| %.3f a0 "
                  "at dv=%d",
                  table1_reff.size(), worst, worst_dv)};
}

Outcome barrier() {
  const PotentialParams p{tol::barrier_c6, 0.0};
  const double m = units::amuToMe(tol::barrier_mu_amu);
  const auto b = potential::centrifugalBarrier(p, m, tol::barrier_l);
  const auto n = potential::numericBarrier(p, m, tol::barrier_l,
                                           0.25 * b.r_barrier,
                                           4.0 * b.r_barrier);
  const double dr = relDiff(b.r_barrier, n.r_barrier);
  const double dh = relDiff(b.height, n.height);
  const bool ok =
      std::abs(b.r_barrier - tol::barrier_r) <= tol::barrier_r_abs &&
      std::abs(b.heightMicroKelvin() - tol::barrier_uk) <=
          tol::barrier_uk_abs &&
      dr <= tol::barrier_numeric_rel && dh <= tol::barrier_numeric_rel;
  return {ok, fmt("r_b = %.2f a0, height = %.1f uK, closed vs numeric "
                  "%.1e / %.1e",
                  b.r_barrier, b.heightMicroKelvin(), dr, dh)};
}

struct Calibrated {
  WallCalibration cal;
  std::vector<LabelledState> levels;
};

const Calibrated &calibrated() {
  static const Calibrated c = [] {
    const auto &r = jointFit().result;
    const auto &lines = r.lines;
    const auto it = std::find_if(lines.begin(), lines.end(), [](const auto &l) {
      return l.isotopologue_id == "176Yb87Rb" && l.dv == tol::anchor_dv;
    });
    const double m = mu("176Yb87Rb");
    auto cal = boundstates::calibrateWall(r.params, m, tol::anchor_dv,
                                          units::cm1ToHartree(it->energy));
    auto levels = boundstates::levelsByDv(r.params, m, cal, tol::outer_from,
                                          tol::outer_to);
    return Calibrated{std::move(cal), std::move(levels)};
  }();
  return c;
}

Outcome numerovVsNde() {
  const auto &r = jointFit().result;
  const auto model = r.model("176Yb87Rb");
  const double vd = r.v_d.at("176Yb87Rb");
  const auto &c = calibrated();
  double worst = 0.0;
  bool inside = true, monotone = true;
  double prev_ratio = 0.0;
  std::string ratios;
  for (const auto &l : c.levels) {
    const double e = l.state.energy;
    const double e_nde = nde::predictSeries(model, vd, l.dv, l.dv)[0].energy;
    worst = std::max(worst, std::abs(e - e_nde) / std::abs(e_nde));
    const double ratio =
        l.state.r_eff_wf / potential::outerTurningPoint(r.params, e);
    inside = inside && ratio < 1.0;
    monotone = monotone && ratio > prev_ratio;
    prev_ratio = ratio;
    ratios += fmt("%s%.4f", ratios.empty() ? "" : " ", ratio);
  }
  const bool count_ok = c.levels.size() ==
                        static_cast<std::size_t>(tol::outer_to - tol::outer_from + 1);
  const bool ok = count_ok && worst <= tol::level_rel && inside && monotone;
  return {ok, fmt("wall %.4f a0, %zu levels, max rel dev %.2f%%, "
                  "r_eff<r_t: %s, ratio rising toward threshold: %s "
                  "(dv %d..%d: %s)",
                  c.cal.grid.r_min, c.levels.size(), 100.0 * worst,
                  inside ? "yes" : "no", monotone ? "yes" : "no",
                  tol::outer_from, tol::outer_to, ratios.c_str())};
}

Outcome turningPointBand() {
  const auto &r = jointFit().result;
  const double m = mu("176Yb87Rb");
  int in_band = 0, total = 0;
  std::string misses;
  for (const auto &rec : dataio::loadBundledTable1()) {
    if (rec.isotopologue_id != "176Yb87Rb" || !rec.bRotCm1() ||
        !rec.delta_pa)
      continue;
    ++total;
    const double rt = potential::outerTurningPoint(
        r.params, units::cm1ToHartree(*rec.delta_pa));
    const double reff = rotation::radiusFromB(*rec.bRotCm1(), m);
    if (reff <= rt && reff >= tol::band_scale * rt)
      ++in_band;
    else
      misses += fmt(" %d(%.3f)", *rec.dv, reff / rt);
  }
  const bool ok = in_band >= tol::band_required;
  return {ok, fmt("%d of %d levels with B in [0.85 r_t, r_t]; outside, "
                  "dv(r_eff/r_t):%s",
                  in_band, total, misses.c_str())};
}

Outcome massScaling() {
  const auto &f = jointFit();
  const auto rows = fitter::residualReport(f.result, f.problem);
  double sum = 0.0;
  int n = 0;
  for (const auto &row : rows)
    if (row.isotopologue_id == "174Yb87Rb") {
      sum += row.residual * row.residual;
      ++n;
    }
  const double rms = std::sqrt(sum / n);
  return {n == 6 && rms <= tol::mass_rms_cm1,
          fmt("%d lines, rms %.4f cm-1", n, rms)};
}

Outcome synthesisRoundTrip() {
  const auto records = dataio::loadBundledTable1();
  const auto &rec = *std::find_if(
      records.begin(), records.end(), [](const LineRecord &r) {
        return r.isotopologue_id == "176Yb87Rb" && r.dv == -8;
      });
  const RotationalLevel lvl{*rec.bRotCm1(), *rec.deltaR1Cm1(), 2, 2};
  const auto comps = rotation::components(*rec.delta_pa, lvl);
  const auto lines = spectra::toSpectralLines(comps, *rec.rel_depth);
  SpectrumConfig base;

  const auto window = [&](double lo, double hi) {
    SpectrumConfig cfg = base;
    cfg.grid_start = lo - tol::window_pad_fwhm * cfg.line_fwhm;
    cfg.grid_stop = hi + tol::window_pad_fwhm * cfg.line_fwhm;
    return cfg;
  };
  const auto near = [](const std::vector<Peak> &peaks, double x) {
    return std::any_of(peaks.begin(), peaks.end(), [&](const Peak &p) {
      return std::abs(p.delta_pa - x) <= tol::center_abs;
    });
  };

  // Keep isolated centres between grid points.
  const double off_grid = 0.37 * base.grid_step;
  double worst_isolated = 0.0;
  for (const auto &l : lines) {
    const auto peaks = spectra::findPeaks(
        spectra::synthesize({l}, window(l.delta_pa + off_grid,
                                        l.delta_pa + off_grid)),
        tol::peak_min_depth);
    double err = 1.0;
    for (const auto &p : peaks)
      err = std::min(err, std::abs(p.delta_pa - l.delta_pa));
    worst_isolated = std::max(worst_isolated, err);
  }

  const auto [lo, hi] = std::minmax_element(
      lines.begin(), lines.end(),
      [](const auto &a, const auto &b) { return a.delta_pa < b.delta_pa; });
  const auto peaks = spectra::findPeaks(
      spectra::synthesize(lines, window(lo->delta_pa, hi->delta_pa)),
      tol::peak_min_depth);
  int recovered = 0;
  for (const auto &l : lines)
    recovered += near(peaks, l.delta_pa);

  const bool ok = worst_isolated <= tol::center_abs &&
                  lines.size() == 9 && recovered >= tol::nine_required;
  return {ok, fmt("isolated max error %.2e cm-1, dv=-8 structure %d of %zu "
                  "centres recovered",
                  worst_isolated, recovered, lines.size())};
}

double syntheticRecovery() {
  const PotentialParams truth{tol::c6_ref, tol::c8_ref};
  FitProblem pb;
  pb.isotopologues = isotopologues();
  for (const auto &[id, vd, first] :
       {std::tuple{"176Yb87Rb", tol::vd176_ref, -5},
        std::tuple{"174Yb87Rb", tol::vd174_ref, -4}}) {
    const NdeModel m{truth, mu(id)};
    for (const auto &lvl : nde::predictSeries(m, vd, first - 9, first))
      pb.lines.push_back({id, lvl.dv, units::hartreeToCm1(lvl.energy), 1.0});
  }
  const auto r = fitter::fitNde(pb);
  if (!r.converged)
    return 1.0;
  return std::max({relDiff(r.params.c6, truth.c6),
                   relDiff(r.params.c8, truth.c8),
                   relDiff(r.v_d.at("176Yb87Rb"), tol::vd176_ref),
                   relDiff(r.v_d.at("174Yb87Rb"), tol::vd174_ref)});
}

double unitRoundTrips() {
  using units::Unit;
  const std::vector<Unit> all{Unit::hartree,   Unit::wavenumber, Unit::joule,
                              Unit::kelvin,    Unit::megahertz,  Unit::bohr,
                              Unit::meter,     Unit::nanometer,  Unit::amu,
                              Unit::electron_mass};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(-8.0, 8.0);
  double worst = 0.0;
  for (const auto a : all)
    for (const auto b : all) {
      if (units::dimension(a) != units::dimension(b))
        continue;
      for (int i = 0; i < 100; ++i) {
        const double x = std::pow(10.0, exponent(rng));
        const auto back = units::convert(units::convert({x, a}, b), a);
        worst = std::max(worst, relDiff(back.value, x));
      }
    }
  return worst;
}

bool parseSerializeIdentity() {
  const std::filesystem::path dir = PAFIT_DATA_DIR;
  const auto iso_text = dataio::readFile(dir / "isotopologues.csv");
  const auto isos = dataio::parseIsotopologues(iso_text);
  const auto line_text = dataio::readFile(dir / "table1_lines.csv");
  const auto lines = dataio::parseLineList(line_text, isos).records;
  return dataio::writeIsotopologues(isos) == iso_text &&
         dataio::writeLineList(lines) == line_text;
}

double gridConvergence() {
  const auto &r = jointFit().result;
  const auto &c = calibrated();
  BoundStateOptions opt;
  opt.check_refinement = false;
  const auto fine = boundstates::solveByIndex(
      r.params, mu("176Yb87Rb"), c.cal.grid.refined(),
      c.levels.front().state.nodes, c.levels.back().state.nodes, opt);
  double worst = 0.0;
  for (std::size_t i = 0; i < fine.size(); ++i)
    worst = std::max(worst, std::abs(units::hartreeToCm1(
                                fine[i].energy - c.levels[i].state.energy)));
  return fine.size() == c.levels.size() ? worst : 1.0;
}

// Wall time of the other test binaries, run one after another.
double unitSuiteSeconds() {
  const std::filesystem::path dir = PAFIT_TEST_DIR;
  double total = 0.0;
  for (const char *name :
       {"test_units", "test_potential", "test_nde", "test_dataio",
        "test_rotation", "test_spectra", "test_fitter", "test_boundstates",
        "test_cli"}) {
    const auto t0 = Clock::now();
    const std::string cmd =
        "\"" + (dir / name).string() + "\" >/dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0)
      return -1.0;
    total += seconds(t0);
  }
  return total;
}

Outcome propertySuites(Clock::time_point start) {
  const double recovery = syntheticRecovery();
  const double round_trip = unitRoundTrips();
  const bool identity = parseSerializeIdentity();
  const double refinement = gridConvergence();
  const double others = unitSuiteSeconds();
  const double total = others + seconds(start);
  const bool ok = recovery <= tol::recovery_rel && round_trip <= tol::unit_rel &&
                  identity && refinement <= tol::refinement_cm1 &&
                  others >= 0.0 && total <= tol::suite_seconds;
  return {ok, fmt("synthetic recovery %.1e, unit round trip %.1e, "
                  "parse/serialize identity %s, refinement %.1e cm-1, "
                  "suite %s %.1f s",
                  recovery, round_trip, identity ? "yes" : "no", refinement,
                  others >= 0.0 ? "passed in" : "FAILED after", total)};
}

} // namespace

int main() {
  const auto start = Clock::now();
  const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
      {"joint fit of the bundled lines", tableFit},
      {"pure-c6 semiclassical law", pureC6Law},
      {"pure-c6 spot check at dv=-11", spotCheck},
      {"rotational radii", rotationalRadii},
      {"centrifugal barrier", barrier},
      {"Numerov against NDE", numerovVsNde},
      {"radii within the turning-point band", turningPointBand},
      {"mass scaling to 174", massScaling},
      {"synthesis round trip", synthesisRoundTrip},
      {"property suites", [&] { return propertySuites(start); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
