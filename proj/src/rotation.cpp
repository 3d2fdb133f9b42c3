#include "pafit/rotation.hpp"
#include "pafit/dataio.hpp"
#include "pafit/errors.hpp"
#include "pafit/units.hpp"

#include <algorithm>
#include <cmath>

namespace pafit {

void RotationalLevel::validate() const {
  if (!(b_rot > 0.0))
    throw DomainError("RotationalLevel: b_rot must be positive");
  if (!std::isfinite(delta_r))
    throw DomainError("RotationalLevel: delta_r must be finite");
  if (f_prime != 1 && f_prime != 2)
    throw DomainError("RotationalLevel: f_prime must be 1 or 2");
  if (r_prime_max < 0)
    throw DomainError("RotationalLevel: r_prime_max must be >= 0");
}

namespace rotation {

double radiusFromB(double b_rot, double mu) {
  if (!(b_rot > 0.0))
    throw DomainError("radiusFromB: B must be positive");
  if (!(mu > 0.0))
    throw DomainError("radiusFromB: mass must be positive");
  return 1.0 / std::sqrt(2.0 * mu * units::cm1ToHartree(b_rot));
}

double bFromRadius(double r, double mu) {
  if (!(r > 0.0))
    throw DomainError("bFromRadius: r must be positive");
  if (!(mu > 0.0))
    throw DomainError("bFromRadius: mass must be positive");
  return units::hartreeToCm1(1.0 / (2.0 * mu * r * r));
}

std::vector<LineComponent> components(double delta_pa,
                                      const RotationalLevel &lvl,
                                      const ComponentOptions &opt) {
  lvl.validate();
  if (opt.band_amplitudes.empty())
    throw DomainError("components: band_amplitudes must not be empty");
  const double origin =
      opt.nu_res + delta_pa +
      (lvl.f_prime == 1 ? opt.hyperfine_sign * opt.hyperfine_splitting : 0.0);

  std::vector<LineComponent> out;
  for (int r = 0; r <= lvl.r_prime_max; ++r) {
    const double center = origin + lvl.b_rot * r * (r + 1);
    const double amp = opt.band_amplitudes[std::min<std::size_t>(
        r, opt.band_amplitudes.size() - 1)];
    const int m_max = std::min(r, lvl.f_prime);
    for (int m = -m_max; m <= m_max; ++m)
      out.push_back({center + m * lvl.delta_r, r, m, lvl.f_prime, amp});
  }
  return out;
}

int maxThermalR(double temperature_k, const std::map<int, double> &barrier_by_l,
                double barrier_factor) {
  if (!(temperature_k > 0.0))
    return 0;
  const double threshold =
      barrier_factor * temperature_k / units::constants::hartree_to_kelvin;
  int r_max = 0;
  for (const auto &[l, height] : barrier_by_l) {
    if (l < 1)
      continue;
    if (l != r_max + 1 || !(height < threshold))
      break;
    r_max = l;
  }
  return r_max;
}

std::string componentsCsv(const std::vector<LineComponent> &comps) {
  std::string out = "wavenumber_cm1,r_prime,m_prime,f_prime,amplitude\n";
  for (const auto &c : comps)
    out += dataio::formatNumber(c.wavenumber) + ',' +
           std::to_string(c.r_prime) + ',' + std::to_string(c.m_prime) + ',' +
           std::to_string(c.f_prime) + ',' +
           dataio::formatNumber(c.rel_amplitude) + '\n';
  return out;
}

} // namespace rotation
} // namespace pafit
