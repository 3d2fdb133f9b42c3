#pragma once

#include <map>
#include <string>
#include <vector>

namespace pafit {

// Rotational structure of one vibrational level in Hund's case (e): the atomic
// F' couples to the nuclear rotation R', giving 2 min(R', F') + 1 components.
struct RotationalLevel {
  double b_rot = 0.0;   // cm^-1
  double delta_r = 0.0; // cm^-1, spacing of adjacent m' components
  int f_prime = 2;
  int r_prime_max = 2;

  void validate() const;
};

struct LineComponent {
  double wavenumber; // absolute laser wavenumber, cm^-1
  int r_prime;
  int m_prime;
  int f_prime;
  double rel_amplitude;
};

struct ComponentOptions {
  double nu_res = 12578.862;          // cm^-1, D1 F=1 -> F'=2 reference
  double hyperfine_splitting = 0.0273; // cm^-1, 5P1/2 F'=1 <-> F'=2
  // F'=1 progression sits hyperfine_sign * splitting from F'=2.
  int hyperfine_sign = -1;
  std::vector<double> band_amplitudes{1.0, 0.6, 0.3}; // per R'; last repeats
};

namespace rotation {

// Fixed-rotor relations B = 1/(2 mu r^2) (atomic units). B in cm^-1, r in a0,
// mu in electron masses.
double radiusFromB(double b_rot, double mu);
double bFromRadius(double r, double mu);

std::vector<LineComponent> components(double delta_pa,
                                      const RotationalLevel &lvl,
                                      const ComponentOptions &opt = {});

// Largest R such that every partial wave 1..R has a barrier below
// barrier_factor * k_B T. Barrier heights in hartree, keyed by l.
int maxThermalR(double temperature_k, const std::map<int, double> &barrier_by_l,
                double barrier_factor = 2.0);

std::string componentsCsv(const std::vector<LineComponent> &comps);

} // namespace rotation
} // namespace pafit
