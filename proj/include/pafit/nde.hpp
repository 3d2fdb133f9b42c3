#pragma once

#include "pafit/potential.hpp"

#include <vector>

namespace pafit {

/// Near-dissociation expansion over the two-term long-range potential.
///
/// The vibrational count below the dissociation limit is the semiclassical
/// phase lost between E = 0 and the level energy,
///
///   v_d - v = sqrt(2 mu)/pi * [ int_0^rt (sqrt(-V) - sqrt(E - V)) dr
///                               + int_rt^inf sqrt(-V) dr ],
///
/// which depends only on the tail of the potential. For c8 = 0 it reduces to
/// the LeRoy-Bernstein law v_d - v = G6 |E|^(1/3).
struct NdeModel {
  PotentialParams params;
  double mu = 0.0;             // reduced mass, electron masses
  double quad_abs_tol = 1e-10; // on the dimensionless count
  int quad_max_depth = 60;

  void validate() const;
};

struct PredictedLevel {
  int dv;
  double energy; // hartree
};

namespace nde {

/// Closed-form constant of the pure-c6 law: int_0^inf (x^-3 - sqrt(x^-6 - 1)+) dx
/// = Gamma(2/3) Gamma(1/2) / (4 Gamma(7/6)).
double pureC6PhaseConstant();

/// G6 in v_d - v = G6 |E|^(1/3), E in hartree.
double pureC6Coefficient(double c6, double mu);

/// v_d - v at energy e (hartree, e < 0). Positive and decreasing in e.
double quantumDefect(const NdeModel &m, double e);

/// Inverse of quantumDefect: the e < 0 whose count is `count`, to 1e-10 cm^-1.
double levelEnergy(const NdeModel &m, double count);

/// Energies of the levels dv_from..dv_to (dv <= -1) for a given v_d.
std::vector<PredictedLevel> predictSeries(const NdeModel &m, double v_d,
                                          int dv_from, int dv_to);

} // namespace nde
} // namespace pafit
