#pragma once

namespace pafit {

// Long-range excited-state potential V(r) = -c6/r^6 - c8/r^8.
// Coefficients in hartree·a0^6 and hartree·a0^8.
struct PotentialParams {
  double c6 = 0.0;
  double c8 = 0.0;

  // Throws DomainError unless c6 > 0, c8 >= 0 and both finite.
  void validate() const;
  bool operator==(const PotentialParams &) const = default;
};

struct BarrierInfo {
  double r_barrier;      // a0
  double height;         // hartree
  int l;
  double heightMicroKelvin() const;
};

namespace potential {

// All energies in hartree, lengths in a0, masses in electron masses.

double evaluate(const PotentialParams &p, double r);

// dV/dr
double derivative(const PotentialParams &p, double r);

// The unique r with evaluate(p, r) == e, for e < 0. Bracketed bisection to
// 1e-12 relative.
double outerTurningPoint(const PotentialParams &p, double e);

// V(r) + l(l+1)/(2 mu r^2)
double effectivePotential(const PotentialParams &p, double mu, int l,
                          double r);

// Closed-form maximum of the centrifugal barrier of a pure -c6/r^6 well.
// Requires c8 == 0 and l >= 1.
BarrierInfo centrifugalBarrier(const PotentialParams &p, double mu, int l);

// Numerical maximum of effectivePotential inside [r_lo, r_hi], found from
// the zero of its slope. Cross-checks centrifugalBarrier; works for any c8.
BarrierInfo numericBarrier(const PotentialParams &p, double mu, int l,
                           double r_lo, double r_hi);

} // namespace potential
} // namespace pafit
