#include "pafit/boundstates.hpp"
#include "pafit/dataio.hpp"
#include "pafit/errors.hpp"
#include "pafit/units.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace pafit {

void RadialGrid::validate() const {
  if (!(r_min > 0.0) || !(r_min < r_max))
    throw DomainError("RadialGrid: need 0 < r_min < r_max");
  if (n_points < 2000)
    throw DomainError("RadialGrid: need at least 2000 points");
}

namespace boundstates {

namespace {

constexpr double big = 1e100;

// Numerov propagation of psi'' = 2 mu (V - E) psi on a fixed grid. Stores
// (h^2/12) 2 mu V(r_i) so that f_i = 1 + (h^2/12) 2 mu E - w_i.
class Numerov {
public:
  Numerov(const PotentialParams &p, double mu, const RadialGrid &grid)
      : grid_(grid), mu_(mu) {
    grid.validate();
    p.validate();
    if (!(mu > 0.0))
      throw DomainError("bound states: mass must be positive");
    const double h = grid.spacing();
    scale_ = h * h / 12.0 * 2.0 * mu;
    w_.resize(grid.n_points);
    for (std::size_t i = 0; i < grid.n_points; ++i)
      w_[i] = scale_ * potential::evaluate(p, grid.r(i));
    v_wall_ = potential::evaluate(p, grid.r_min);
  }

  double wallDepth() const { return v_wall_; }
  const RadialGrid &grid() const { return grid_; }

  // Sign changes of the outward solution = eigenvalues below e.
  int count(double e) const {
    const double g = 1.0 + scale_ * e;
    const std::size_t n = w_.size();
    double p0 = 0.0, p1 = 1e-10;
    double f0 = g - w_[0], f1 = g - w_[1];
    int nodes = 0;
    for (std::size_t i = 2; i < n; ++i) {
      const double f2 = g - w_[i];
      const double p2 = ((12.0 - 10.0 * f1) * p1 - f0 * p0) / f2;
      if ((p2 < 0.0) != (p1 < 0.0))
        ++nodes;
      p0 = p1;
      p1 = p2;
      f0 = f1;
      f1 = f2;
      if (std::abs(p1) > big) {
        p0 /= big;
        p1 /= big;
      }
    }
    return nodes;
  }

  // Eigenvalue with `index` nodes, bisecting on the node count.
  double eigenvalue(int index, double lo, double hi, double tol,
                    std::map<double, int> &cache) const {
    const auto counted = [&](double e) {
      auto it = cache.find(e);
      if (it != cache.end())
        return it->second;
      const int c = count(e);
      cache.emplace(e, c);
      return c;
    };
    // Tighten the bracket from earlier samples.
    for (const auto &[e, c] : cache) {
      if (c <= index && e > lo && e < hi)
        lo = e;
      if (c > index && e < hi && e > lo)
        hi = e;
    }
    if (!(counted(lo) <= index && counted(hi) > index))
      throw NumericError("Numerov: eigenvalue " + std::to_string(index) +
                             " is not bracketed",
                         hi - lo);
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi)
        break;
      (counted(mid) > index ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // Solution started from psi(r_max) = 0 and integrated down to index
  // `stop`. Entries below `stop` are zero.
  std::vector<double> inward(double e, std::size_t stop = 0) const {
    const std::size_t n = w_.size();
    const double g = 1.0 + scale_ * e;
    const auto f = [&](std::size_t i) { return g - w_[i]; };
    std::vector<double> in(n, 0.0);
    in[n - 2] = 1e-10;
    for (std::size_t i = n - 2; i > stop; --i) {
      in[i - 1] =
          ((12.0 - 10.0 * f(i)) * in[i] - f(i + 1) * in[i + 1]) / f(i - 1);
      if (std::abs(in[i - 1]) > big)
        for (std::size_t j = i - 1; j < n; ++j)
          in[j] /= big;
    }
    return in;
  }

  // Outward and inward solutions joined at the outer turning point.
  BoundState state(double e) const {
    const std::size_t n = w_.size();
    const double g = 1.0 + scale_ * e;
    const auto f = [&](std::size_t i) { return g - w_[i]; };

    std::size_t m = n - 3;
    for (std::size_t i = 1; i < n - 2; ++i)
      if (w_[i] >= scale_ * e) { // V(r_i) >= E: classically forbidden
        m = i;
        break;
      }
    m = std::clamp<std::size_t>(m, 2, n - 3);

    std::vector<double> psi(n, 0.0);
    psi[1] = 1e-10;
    for (std::size_t i = 1; i < m; ++i) {
      psi[i + 1] = ((12.0 - 10.0 * f(i)) * psi[i] - f(i - 1) * psi[i - 1]) /
                   f(i + 1);
      if (std::abs(psi[i + 1]) > big)
        for (std::size_t j = 0; j <= i + 1; ++j)
          psi[j] /= big;
    }

    const auto in = inward(e, m);
    if (in[m] == 0.0 || psi[m] == 0.0)
      throw NumericError("Numerov: matching point sits on a node", 0.0);
    const double ratio = psi[m] / in[m];
    for (std::size_t i = m + 1; i < n; ++i)
      psi[i] = in[i] * ratio;

    const double h = grid_.spacing();
    double norm = 0.0;
    for (double x : psi)
      norm += x * x;
    norm = std::sqrt(norm * h);
    int nodes = 0;
    for (std::size_t i = 0; i < n; ++i) {
      psi[i] /= norm;
      if (i >= 2 && (psi[i] < 0.0) != (psi[i - 1] < 0.0) && psi[i] != 0.0)
        ++nodes;
    }

    BoundState s;
    s.energy = e;
    s.psi = std::move(psi);
    s.nodes = nodes;
    s.grid = grid_;
    s.r_eff_wf = effectiveRadius(s);
    return s;
  }

private:
  RadialGrid grid_;
  double mu_;
  double scale_;
  double v_wall_;
  std::vector<double> w_;
};

void checkRefinement(const PotentialParams &p, double mu,
                     const RadialGrid &grid,
                     const std::vector<BoundState> &states,
                     const BoundStateOptions &opt) {
  if (!opt.check_refinement || states.empty())
    return;
  const Numerov fine(p, mu, grid.refined());
  const double delta = units::cm1ToHartree(opt.refinement_tol_cm1);
  for (const auto &s : states) {
    const double lo = s.energy - delta;
    const double hi = std::min(s.energy + delta, -1e-300);
    if (!(fine.count(lo) <= s.nodes && fine.count(hi) > s.nodes))
      throw ResolutionError(
          "grid too coarse: level with " + std::to_string(s.nodes) +
          " nodes at " + dataio::formatNumber(units::hartreeToCm1(s.energy)) +
          " cm^-1 moves by more than " +
          dataio::formatNumber(opt.refinement_tol_cm1) +
          " cm^-1 when the grid is refined");
  }
}

void checkGridExtent(const PotentialParams &p, const RadialGrid &grid,
                     const std::vector<BoundState> &states) {
  for (const auto &s : states) {
    const double rt = potential::outerTurningPoint(p, s.energy);
    if (3.0 * rt > grid.r_max)
      throw ResolutionError(
          "grid too short: r_max = " + dataio::formatNumber(grid.r_max) +
          " a0 is less than 3x the turning point " +
          dataio::formatNumber(rt) + " a0 of the level at " +
          dataio::formatNumber(units::hartreeToCm1(s.energy)) + " cm^-1");
  }
}

std::vector<BoundState> solveRange(const Numerov &solver, int first, int last,
                                   double lo, double hi,
                                   const BoundStateOptions &opt) {
  const double tol = units::cm1ToHartree(opt.energy_tol_cm1);
  std::map<double, int> cache;
  std::vector<BoundState> out;
  for (int k = first; k <= last; ++k) {
    const double e = solver.eigenvalue(k, lo, hi, tol, cache);
    auto s = solver.state(e);
    if (s.nodes != k)
      throw NumericError("Numerov: state " + std::to_string(k) + " has " +
                             std::to_string(s.nodes) + " nodes",
                         0.0);
    out.push_back(std::move(s));
  }
  return out;
}

} // namespace

int countStatesBelow(const PotentialParams &p, double mu,
                     const RadialGrid &grid, double e) {
  return Numerov(p, mu, grid).count(e);
}

std::vector<BoundState> solveBound(const PotentialParams &p, double mu,
                                   const RadialGrid &grid, double e_lo,
                                   double e_hi, const BoundStateOptions &opt) {
  if (!(e_lo < e_hi) || !(e_hi < 0.0))
    throw DomainError("solveBound: need e_lo < e_hi < 0");
  const Numerov solver(p, mu, grid);
  if (!(e_lo > solver.wallDepth()))
    throw DomainError("solveBound: window reaches below the well depth at "
                      "the wall");
  const int n_lo = solver.count(e_lo);
  const int n_hi = solver.count(e_hi);
  if (n_hi <= n_lo)
    return {};
  auto states = solveRange(solver, n_lo, n_hi - 1, e_lo, e_hi, opt);
  checkGridExtent(p, grid, states);
  checkRefinement(p, mu, grid, states, opt);
  return states;
}

std::vector<BoundState> solveByIndex(const PotentialParams &p, double mu,
                                     const RadialGrid &grid, int first,
                                     int last, const BoundStateOptions &opt) {
  if (first < 0 || first > last)
    throw DomainError("solveByIndex: need 0 <= first <= last");
  const Numerov solver(p, mu, grid);
  const double lo = solver.wallDepth() * (1.0 - 1e-12);
  const double hi = -1e-300;
  if (solver.count(hi) <= last)
    throw DomainError("solveByIndex: state " + std::to_string(last) +
                      " is not bound on this grid");
  auto states = solveRange(solver, first, last, lo, hi, opt);
  checkGridExtent(p, grid, states);
  checkRefinement(p, mu, grid, states, opt);
  return states;
}

double effectiveRadius(const BoundState &s) {
  const double h = s.grid.spacing();
  double acc = 0.0;
  for (std::size_t i = 0; i < s.psi.size(); ++i) {
    const double r = s.grid.r(i);
    acc += s.psi[i] * s.psi[i] * r * r;
  }
  return std::sqrt(acc * h);
}

WallCalibration calibrateWall(const PotentialParams &p, double mu,
                              int anchor_dv, double anchor_energy,
                              const WallSearch &search) {
  if (!(anchor_energy < 0.0))
    throw DomainError("calibrateWall: anchor energy must be negative");
  if (!(search.wall_lo > 0.0 && search.wall_lo < search.wall_hi))
    throw DomainError("calibrateWall: invalid wall range");
  p.validate();
  if (!(potential::evaluate(p, search.wall_lo) < anchor_energy))
    throw CalibrationError("calibrateWall: anchor lies above the potential at "
                           "the inner end of the wall range");

  // Zeros of the inward solution at the anchor energy are exactly the wall
  // positions for which the anchor is an eigenvalue.
  const RadialGrid scan{search.wall_lo, search.r_max, search.n_points};
  const auto inward = Numerov(p, mu, scan).inward(anchor_energy);
  double wall = -1.0;
  for (std::size_t i = scan.n_points - 1; i-- > 1;) {
    const double r0 = scan.r(i - 1), r1 = scan.r(i);
    if (r1 > search.wall_hi)
      continue;
    const double a = inward[i - 1], b = inward[i];
    if ((a < 0.0) != (b < 0.0)) {
      wall = r0 + a / (a - b) * (r1 - r0);
      break;
    }
  }
  if (wall < 0.0)
    throw CalibrationError("calibrateWall: no wall in [" +
                           dataio::formatNumber(search.wall_lo) + ", " +
                           dataio::formatNumber(search.wall_hi) +
                           "] a0 reproduces the anchor");

  // The scan used a slightly different grid; polish with secant steps on the
  // eigenvalue defect of the state nearest the anchor.
  const BoundStateOptions opt{1e-11, false, 0.0};
  const auto nearest = [&](double r_wall, int &index) {
    const RadialGrid g{r_wall, search.r_max, search.n_points};
    const Numerov solver(p, mu, g);
    const double span = std::abs(anchor_energy);
    std::map<double, int> cache;
    const double tol = units::cm1ToHartree(opt.energy_tol_cm1);
    const double lo = std::max(solver.wallDepth() * (1.0 - 1e-12),
                               anchor_energy - span);
    const double hi = std::min(anchor_energy + 0.5 * span, -1e-300);
    const int below = solver.count(anchor_energy);
    if (index < 0) {
      double best = 0.0;
      bool found = false;
      for (int k : {below - 1, below}) {
        if (k < 0 || solver.count(hi) <= k || solver.count(lo) > k)
          continue;
        const double e = solver.eigenvalue(k, lo, hi, tol, cache);
        if (!found || std::abs(e - anchor_energy) <
                          std::abs(best - anchor_energy)) {
          best = e;
          index = k;
          found = true;
        }
      }
      if (!found)
        throw CalibrationError("calibrateWall: no eigenvalue near the anchor");
      return best;
    }
    return solver.eigenvalue(index, lo, hi, tol, cache);
  };

  int index = -1;
  double e = nearest(wall, index);
  const double match = units::cm1ToHartree(search.match_tol_cm1);
  const double target = 1e-3 * match;
  for (int it = 0; it < 30 && std::abs(e - anchor_energy) > target; ++it) {
    const double dr = 1e-5;
    const double e2 = nearest(wall + dr, index);
    const double slope = (e2 - e) / dr;
    if (slope == 0.0)
      break;
    const double next = wall - (e - anchor_energy) / slope;
    if (!(next >= search.wall_lo && next <= search.wall_hi))
      throw CalibrationError("calibrateWall: wall left the search range");
    wall = next;
    e = nearest(wall, index);
  }
  if (std::abs(e - anchor_energy) > match)
    throw CalibrationError(
        "calibrateWall: anchor mismatch " +
        dataio::formatNumber(units::hartreeToCm1(e - anchor_energy)) +
        " cm^-1 exceeds tolerance");

  WallCalibration cal;
  cal.grid = {wall, search.r_max, search.n_points};
  cal.anchor_dv = anchor_dv;
  cal.anchor_index = index;
  cal.anchor_energy = anchor_energy;
  cal.achieved_energy = e;
  return cal;
}

std::vector<LabelledState> levelsByDv(const PotentialParams &p, double mu,
                                      const WallCalibration &cal, int dv_from,
                                      int dv_to, const BoundStateOptions &opt) {
  if (dv_from > dv_to)
    throw DomainError("levelsByDv: need dv_from <= dv_to");
  const int first = cal.anchor_index + (dv_from - cal.anchor_dv);
  const int last = cal.anchor_index + (dv_to - cal.anchor_dv);
  if (first < 0)
    throw DomainError("levelsByDv: dv range reaches below the ground state");
  auto states = solveByIndex(p, mu, cal.grid, first, last, opt);
  std::vector<LabelledState> out;
  out.reserve(states.size());
  for (auto &s : states)
    out.push_back({cal.anchor_dv + (s.nodes - cal.anchor_index), std::move(s)});
  return out;
}

std::string wavefunctionCsv(const BoundState &s) {
  std::string out = "r_a0,psi\n";
  for (std::size_t i = 0; i < s.psi.size(); ++i)
    out += dataio::formatNumber(s.grid.r(i)) + ',' +
           dataio::formatNumber(s.psi[i]) + '\n';
  return out;
}

} // namespace boundstates
} // namespace pafit
