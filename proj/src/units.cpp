#include "pafit/units.hpp"
#include "pafit/errors.hpp"
#include "pafit/potential.hpp"

#include <cmath>
#include <string>

namespace pafit::units {

namespace {

// Size of one `u` in the dimension's atomic unit.
double toAtomic(Unit u) {
  using namespace constants;
  switch (u) {
  case Unit::hartree:
  case Unit::bohr:
  case Unit::electron_mass:
    return 1.0;
  case Unit::wavenumber:
    return 1.0 / hartree_to_cm1;
  case Unit::joule:
    return 1.0 / hartree_to_joule;
  case Unit::kelvin:
    return 1.0 / hartree_to_kelvin;
  case Unit::megahertz:
    return 1.0 / hartree_to_mhz;
  case Unit::meter:
    return 1.0 / bohr_to_meter;
  case Unit::nanometer:
    return 1.0 / bohr_to_nm;
  case Unit::amu:
    return amu_to_me;
  }
  throw DomainError("unknown unit");
}

} // namespace

Dimension dimension(Unit u) {
  switch (u) {
  case Unit::hartree:
  case Unit::wavenumber:
  case Unit::joule:
  case Unit::kelvin:
  case Unit::megahertz:
    return Dimension::energy;
  case Unit::bohr:
  case Unit::meter:
  case Unit::nanometer:
    return Dimension::length;
  case Unit::amu:
  case Unit::electron_mass:
    return Dimension::mass;
  }
  throw DomainError("unknown unit");
}

std::string_view symbol(Unit u) {
  switch (u) {
  case Unit::hartree:
    return "hartree";
  case Unit::wavenumber:
    return "cm^-1";
  case Unit::joule:
    return "J";
  case Unit::kelvin:
    return "K";
  case Unit::megahertz:
    return "MHz";
  case Unit::bohr:
    return "a0";
  case Unit::meter:
    return "m";
  case Unit::nanometer:
    return "nm";
  case Unit::amu:
    return "amu";
  case Unit::electron_mass:
    return "m_e";
  }
  return "?";
}

Quantity convert(Quantity q, Unit target) {
  if (dimension(q.unit) != dimension(target))
    throw DomainError("cannot convert " + std::string(symbol(q.unit)) +
                      " to " + std::string(symbol(target)));
  if (q.unit == target)
    return q;
  return {q.value * (toAtomic(q.unit) / toAtomic(target)), target};
}

double reducedMass(double m1, double m2) {
  if (!(m1 > 0.0) || !(m2 > 0.0))
    throw DomainError("reducedMass: masses must be positive");
  return m1 * m2 / (m1 + m2);
}

PotentialParams dispersionToAtomic(double c6, double c8, Unit energy,
                                   Unit length) {
  if (dimension(energy) != Dimension::energy ||
      dimension(length) != Dimension::length)
    throw DomainError("dispersionToAtomic: expected energy and length units");
  const double e = toAtomic(energy);
  const double l = toAtomic(length);
  return {c6 * e * std::pow(l, 6), c8 * e * std::pow(l, 8)};
}

DispersionPair dispersionFromAtomic(const PotentialParams &p, Unit energy,
                                    Unit length) {
  if (dimension(energy) != Dimension::energy ||
      dimension(length) != Dimension::length)
    throw DomainError("dispersionFromAtomic: expected energy and length units");
  const double e = toAtomic(energy);
  const double l = toAtomic(length);
  return {p.c6 / (e * std::pow(l, 6)), p.c8 / (e * std::pow(l, 8))};
}

} // namespace pafit::units
