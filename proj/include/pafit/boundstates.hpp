#pragma once

#include "pafit/potential.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace pafit {

/// Uniform radial grid with a hard wall (psi = 0) at r_min and at r_max.
struct RadialGrid {
  double r_min = 10.0;  // a0
  double r_max = 400.0; // a0
  std::size_t n_points = 320000;

  double spacing() const {
    return (r_max - r_min) / static_cast<double>(n_points - 1);
  }
  double r(std::size_t i) const {
    return r_min + static_cast<double>(i) * spacing();
  }
  // Same interval, half the spacing.
  RadialGrid refined() const { return {r_min, r_max, 2 * n_points - 1}; }
  void validate() const;
};

struct BoundState {
  double energy = 0.0; // hartree
  std::vector<double> psi; // sum psi^2 dr = 1
  int nodes = 0;
  double r_eff_wf = 0.0; // a0
  RadialGrid grid;
};

struct BoundStateOptions {
  double energy_tol_cm1 = 1e-10;
  // Re-check every eigenvalue on grid.refined(); a shift larger than
  // refinement_tol_cm1 raises ResolutionError.
  bool check_refinement = true;
  double refinement_tol_cm1 = 1e-4;
};

struct WallSearch {
  double wall_lo = 8.0;  // a0
  double wall_hi = 12.0; // a0
  double r_max = 400.0;
  std::size_t n_points = 320000;
  double match_tol_cm1 = 1e-4;
};

struct WallCalibration {
  RadialGrid grid;      // r_min is the calibrated wall
  int anchor_dv = 0;
  int anchor_index = 0; // node count of the anchor state
  double anchor_energy = 0.0; // hartree, the requested anchor
  double achieved_energy = 0.0; // hartree, the eigenvalue after calibration
};

struct LabelledState {
  int dv;
  BoundState state;
};

namespace boundstates {

/// Number of Dirichlet eigenvalues below e on the grid (Sturm node count of
/// the outward Numerov solution).
int countStatesBelow(const PotentialParams &p, double mu,
                     const RadialGrid &grid, double e);

/// All eigenstates with energy in [e_lo, e_hi] (hartree), ascending.
std::vector<BoundState> solveBound(const PotentialParams &p, double mu,
                                   const RadialGrid &grid, double e_lo,
                                   double e_hi,
                                   const BoundStateOptions &opt = {});

/// Eigenstates with node counts first..last inclusive.
std::vector<BoundState> solveByIndex(const PotentialParams &p, double mu,
                                     const RadialGrid &grid, int first,
                                     int last,
                                     const BoundStateOptions &opt = {});

/// sqrt(sum psi^2 r^2 dr)
double effectiveRadius(const BoundState &s);

/// Places the inner wall so that one eigenvalue equals the anchor energy
/// (hartree). Throws CalibrationError if no wall in range does.
WallCalibration calibrateWall(const PotentialParams &p, double mu,
                              int anchor_dv, double anchor_energy,
                              const WallSearch &search = {});

/// States of a calibrated well labelled by dv relative to the anchor.
std::vector<LabelledState> levelsByDv(const PotentialParams &p, double mu,
                                      const WallCalibration &cal, int dv_from,
                                      int dv_to,
                                      const BoundStateOptions &opt = {});

std::string wavefunctionCsv(const BoundState &s);

} // namespace boundstates
} // namespace pafit
