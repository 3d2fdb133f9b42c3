#include "pafit/potential.hpp"
#include "pafit/errors.hpp"
#include "pafit/units.hpp"

#include <cmath>
#include <string>

namespace pafit {

void PotentialParams::validate() const {
  if (!std::isfinite(c6) || !std::isfinite(c8))
    throw DomainError("PotentialParams: coefficients must be finite");
  if (!(c6 > 0.0))
    throw DomainError("PotentialParams: c6 must be positive, got " +
                      std::to_string(c6));
  if (c8 < 0.0)
    throw DomainError("PotentialParams: c8 must be non-negative, got " +
                      std::to_string(c8));
}

double BarrierInfo::heightMicroKelvin() const {
  return units::hartreeToMicroKelvin(height);
}

namespace potential {

double evaluate(const PotentialParams &p, double r) {
  if (!(r > 0.0))
    throw DomainError("potential: r must be positive");
  const double r2 = r * r;
  const double r6 = r2 * r2 * r2;
  return -(p.c6 + p.c8 / r2) / r6;
}

double derivative(const PotentialParams &p, double r) {
  if (!(r > 0.0))
    throw DomainError("potential: r must be positive");
  const double r2 = r * r;
  const double r7 = r2 * r2 * r2 * r;
  return (6.0 * p.c6 + 8.0 * p.c8 / r2) / r7;
}

double outerTurningPoint(const PotentialParams &p, double e) {
  p.validate();
  if (!(e < 0.0))
    throw DomainError("outerTurningPoint: energy must be negative");
  // The pure-c6 root is a lower bound; adding c8 only pushes the root out.
  double lo = std::pow(p.c6 / -e, 1.0 / 6.0);
  double hi = lo;
  while (evaluate(p, hi) < e)
    hi *= 1.25;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (evaluate(p, mid) < e)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double effectivePotential(const PotentialParams &p, double mu, int l,
                          double r) {
  if (l < 0)
    throw DomainError("effectivePotential: l must be >= 0");
  if (!(mu > 0.0))
    throw DomainError("effectivePotential: mass must be positive");
  return evaluate(p, r) + l * (l + 1.0) / (2.0 * mu * r * r);
}

BarrierInfo centrifugalBarrier(const PotentialParams &p, double mu, int l) {
  if (l < 1)
    throw DomainError("centrifugalBarrier: no barrier for l = " +
                      std::to_string(l));
  p.validate();
  if (p.c8 != 0.0)
    throw DomainError("centrifugalBarrier: closed form requires c8 = 0");
  if (!(mu > 0.0))
    throw DomainError("centrifugalBarrier: mass must be positive");
  const double ll = l * (l + 1.0);
  const double rb = std::pow(6.0 * p.c6 * mu / ll, 0.25);
  return {rb, ll / (3.0 * mu * rb * rb), l};
}

BarrierInfo numericBarrier(const PotentialParams &p, double mu, int l,
                           double r_lo, double r_hi) {
  if (l < 1)
    throw DomainError("numericBarrier: no barrier for l = " +
                      std::to_string(l));
  // Bisection on dVeff/dr, which is positive inside the barrier and negative
  // outside it.
  const double ll = l * (l + 1.0);
  const auto slope = [&](double r) {
    return derivative(p, r) - ll / (mu * r * r * r);
  };
  double a = r_lo, b = r_hi;
  if (!(slope(a) > 0.0 && slope(b) < 0.0))
    throw DomainError("numericBarrier: [r_lo, r_hi] does not bracket the "
                      "barrier maximum");
  while (b - a > 1e-15 * b) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b)
      break;
    (slope(mid) > 0.0 ? a : b) = mid;
  }
  const double rb = 0.5 * (a + b);
  return {rb, effectivePotential(p, mu, l, rb), l};
}

} // namespace potential
} // namespace pafit
