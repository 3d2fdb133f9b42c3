#pragma once

#include <string_view>

namespace pafit {

struct PotentialParams;

namespace units {

//==============================================================================
// CODATA 2018 values. Everything inside the library is in atomic units
// (hbar = m_e = E_h = a0 = 1); spectroscopic units appear only at I/O.
namespace constants {
inline constexpr double hartree_to_cm1 = 219474.6313632;
inline constexpr double hartree_to_joule = 4.3597447222071e-18;
inline constexpr double hartree_to_kelvin = 315775.02480407;
inline constexpr double hartree_to_mhz = 6.579683920502e9;
inline constexpr double bohr_to_meter = 5.29177210903e-11;
inline constexpr double bohr_to_nm = 5.29177210903e-2;
inline constexpr double amu_to_me = 1822.888486209;
} // namespace constants

enum class Dimension { energy, length, mass };

enum class Unit {
  hartree,
  wavenumber, // cm^-1
  joule,
  kelvin,
  megahertz,
  bohr,
  meter,
  nanometer,
  amu,
  electron_mass
};

struct Quantity {
  double value;
  Unit unit;
};

Dimension dimension(Unit u);
std::string_view symbol(Unit u);

// Linear rescaling between units of the same dimension.
// Throws DomainError on a dimension mismatch.
Quantity convert(Quantity q, Unit target);

// m1*m2/(m1+m2), in whatever mass unit the inputs share.
double reducedMass(double m1, double m2);

// Dispersion coefficients given in (energy unit)·(length unit)^n, returned in
// hartree·a0^6 and hartree·a0^8.
PotentialParams dispersionToAtomic(double c6, double c8, Unit energy,
                                   Unit length);

struct DispersionPair {
  double c6;
  double c8;
};
DispersionPair dispersionFromAtomic(const PotentialParams &p, Unit energy,
                                    Unit length);

// Shorthands for the hot paths.
constexpr double cm1ToHartree(double e) {
  return e / constants::hartree_to_cm1;
}
constexpr double hartreeToCm1(double e) {
  return e * constants::hartree_to_cm1;
}
constexpr double amuToMe(double m) { return m * constants::amu_to_me; }
constexpr double hartreeToMicroKelvin(double e) {
  return e * constants::hartree_to_kelvin * 1e6;
}

} // namespace units
} // namespace pafit
