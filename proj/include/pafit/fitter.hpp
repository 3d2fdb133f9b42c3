#pragma once

#include "pafit/dataio.hpp"
#include "pafit/nde.hpp"
#include "pafit/potential.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pafit {

struct FitLine {
  std::string isotopologue_id;
  int dv = -1;
  double energy = 0.0; // observed delta_pa, cm^-1
  double weight = 1.0;
  bool operator==(const FitLine &) const = default;
};

/// Joint fit of (c6, c8) shared by all isotopologues and one v_d per
/// isotopologue to observed level energies.
struct FitProblem {
  std::vector<FitLine> lines;
  std::vector<IsotopologueSpec> isotopologues;

  std::optional<PotentialParams> initial; // default: pure-c6 LeRoy-Bernstein seed
  std::map<std::string, double> initial_v_d; // default 0.5
  bool fix_c8 = false; // c8 held at initial->c8 (0 without an initial guess)

  double v_d_lower = 0.0;
  double v_d_upper = std::nextafter(1.0, 0.0);
  double c8_scale = 1e5; // a.u.; c8 is optimized as log(1 + c8/c8_scale)

  int max_iterations = 500;
  double param_tol = 1e-8; // relative parameter change
  double cost_tol = 1e-10; // relative cost change
  // Relative decrease still promised by the undamped Gauss-Newton step.
  double model_tol = 1e-8;
  double fd_step = 1e-6;   // relative central-difference step
  double quad_abs_tol = 1e-10;

  void validate() const;
  std::size_t freeParameterCount() const;
};

struct FitResult {
  PotentialParams params;
  std::map<std::string, double> v_d;
  std::vector<IsotopologueSpec> isotopologues;
  std::vector<FitLine> lines;     // in the order of the problem
  std::vector<double> predicted;  // cm^-1
  std::vector<double> residuals;  // observed - predicted, cm^-1
  double rms = 0.0;
  double cost = 0.0;         // 1/2 sum w (observed - predicted)^2
  double initial_cost = 0.0;
  std::vector<std::string> parameter_names; // c6, c8, v_d:<id>...
  Eigen::MatrixXd covariance;               // physical parameters
  double condition_number = 0.0;
  bool converged = false;
  int iterations = 0;
  std::vector<std::string> active_bounds;
  std::vector<std::string> warnings;
  double quad_abs_tol = 1e-10;

  NdeModel model(std::string_view isotopologue_id) const;
};

struct Assignment {
  std::vector<int> dv;
  // (index of the line after the gap, number of missing levels)
  std::vector<std::pair<std::size_t, int>> gaps;
  std::vector<std::string> warnings;
};

struct ResidualRow {
  std::string isotopologue_id;
  int dv;
  double observed;  // cm^-1
  double predicted; // cm^-1
  double residual;  // cm^-1
  double mass_scale;   // sqrt(mu_ref / mu)
  double scaled_count; // (v_d - dv) * mass_scale
};

namespace fitter {

/// Observed, assigned F'=2 lines of the list; unobserved rows are skipped.
FitProblem makeFitProblem(std::span<const LineRecord> records,
                          std::span<const IsotopologueSpec> isotopologues);

FitResult fitNde(const FitProblem &problem);

/// Assigns dv to a strictly decreasing energy sequence (cm^-1) by rounding
/// differences of the quantum defect. Throws AssignmentError when adjacent
/// lines are not 1..3 levels apart.
Assignment autoAssign(std::span<const double> energies, const NdeModel &model,
                      double v_d_guess);

std::vector<ResidualRow> residualReport(const FitResult &result,
                                        const FitProblem &problem);
std::string residualCsv(const std::vector<ResidualRow> &rows);

std::string fitResultJson(const FitResult &result);
FitResult parseFitResultJson(std::string_view text);

} // namespace fitter
} // namespace pafit
