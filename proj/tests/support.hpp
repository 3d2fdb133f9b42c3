#pragma once
#include "pafit/dataio.hpp"
#include "pafit/potential.hpp"
#include "pafit/units.hpp"

#include <cmath>

namespace pafit::test {

inline double mu176() {
  return units::amuToMe(units::reducedMass(175.9426, 86.9092));
}
inline double mu174() {
  return units::amuToMe(units::reducedMass(173.9389, 86.9092));
}
inline PotentialParams referenceParams() { return {6190.0, 403000.0}; }
inline PotentialParams pureC6() { return {6190.0, 0.0}; }

inline double relDiff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace pafit::test
