#include "pafit/nde.hpp"
#include "pafit/errors.hpp"
#include "pafit/quadrature.hpp"
#include "pafit/units.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <numbers>
#include <string>

namespace pafit {

void NdeModel::validate() const {
  params.validate();
  if (!(mu > 0.0))
    throw DomainError("NdeModel: reduced mass must be positive");
  if (!(quad_abs_tol > 0.0) || quad_max_depth < 1)
    throw DomainError("NdeModel: quadrature tolerances must be positive");
}

namespace nde {

namespace {

constexpr double energy_tol_cm1 = 1e-10;

// int_rt^inf sqrt(c6/r^6 + c8/r^8) dr. With u = 1/r^2 this is
// sqrt(c6)/2 int_0^(1/rt^2) sqrt(1 + a u) du, a = c8/c6.
double tailIntegral(const PotentialParams &p, double rt) {
  const double ut = 1.0 / (rt * rt);
  if (p.c8 == 0.0)
    return 0.5 * std::sqrt(p.c6) * ut;
  const double a = p.c8 / p.c6;
  return std::sqrt(p.c6) / (3.0 * a) * std::expm1(1.5 * std::log1p(a * ut));
}

} // namespace

double pureC6PhaseConstant() {
  return std::tgamma(2.0 / 3.0) * std::sqrt(std::numbers::pi) /
         (4.0 * std::tgamma(7.0 / 6.0));
}

double pureC6Coefficient(double c6, double mu) {
  return pureC6PhaseConstant() * std::sqrt(2.0 * mu) * std::pow(c6, 1.0 / 6.0) /
         std::numbers::pi;
}

double quantumDefect(const NdeModel &m, double e) {
  m.validate();
  if (!(e < 0.0))
    throw DomainError("quantumDefect: energy must be negative");
  const PotentialParams &p = m.params;
  const double rt = potential::outerTurningPoint(p, e);
  const double prefactor = std::sqrt(2.0 * m.mu) / std::numbers::pi;

  // Inner part written as |E| / (sqrt(-V) + sqrt(E - V)) to avoid the
  // cancellation, then r = rt (1 - s^2) to smooth the square-root edge at rt.
  const double binding = -e;
  const auto integrand = [&](double s) {
    const double r = rt * (1.0 - s * s);
    if (r <= 0.0)
      return 0.0;
    const double minus_v = -potential::evaluate(p, r);
    const double kinetic = std::max(minus_v - binding, 0.0);
    return 2.0 * rt * s / (std::sqrt(minus_v) + std::sqrt(kinetic));
  };
  const double tol = m.quad_abs_tol / (prefactor * binding);
  const auto inner =
      quadrature::gaussKronrod(integrand, 0.0, 1.0, tol, m.quad_max_depth);
  if (!inner.converged)
    throw NumericError("quantumDefect: quadrature did not converge (error " +
                           std::to_string(inner.error * prefactor * binding) +
                           ")",
                       inner.error * prefactor * binding);
  return prefactor * (binding * inner.value + tailIntegral(p, rt));
}

double levelEnergy(const NdeModel &m, double count) {
  m.validate();
  if (!(count > 0.0))
    throw DomainError("levelEnergy: count must be positive");
  const auto defect = [&](double e) { return quantumDefect(m, e) - count; };

  // Start from the pure-c6 level and widen until the root is bracketed.
  const double g6 = pureC6Coefficient(m.params.c6, m.mu);
  double lo = -std::pow(count / g6, 3.0);
  double f_lo = defect(lo);
  while (f_lo < 0.0) {
    lo *= 2.0;
    f_lo = defect(lo);
  }
  double hi = 0.5 * lo;
  double f_hi = defect(hi);
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi *= 0.5;
    f_hi = defect(hi);
  }
  if (f_lo == 0.0)
    return lo;
  if (f_hi == 0.0)
    return hi;

  const double tol = units::cm1ToHartree(energy_tol_cm1);
  const auto close_enough = [tol](double a, double b) {
    return std::abs(b - a) <= tol;
  };
  std::uintmax_t max_iter = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(
      defect, lo, hi, f_lo, f_hi, close_enough, max_iter);
  if (std::abs(b - a) > tol)
    throw NumericError("levelEnergy: root bracket did not shrink to tolerance",
                       units::hartreeToCm1(std::abs(b - a)));
  return 0.5 * (a + b);
}

std::vector<PredictedLevel> predictSeries(const NdeModel &m, double v_d,
                                          int dv_from, int dv_to) {
  if (dv_from > dv_to || dv_to > -1)
    throw DomainError("predictSeries: need dv_from <= dv_to <= -1");
  std::vector<PredictedLevel> out;
  out.reserve(static_cast<std::size_t>(dv_to - dv_from + 1));
  for (int dv = dv_from; dv <= dv_to; ++dv)
    out.push_back({dv, levelEnergy(m, v_d - dv)});
  return out;
}

} // namespace nde
} // namespace pafit
