#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pafit/dataio.hpp"
#include "pafit/errors.hpp"
#include "pafit/potential.hpp"
#include "pafit/rotation.hpp"
#include "pafit/units.hpp"
#include "support.hpp"
#include "table1_reff.hpp"

#include <random>

using namespace pafit;

TEST_CASE("fixed-rotor radius") {
  const double mu = test::mu176();
  CHECK(mu == doctest::Approx(106044.5).epsilon(1e-5));
  CHECK(rotation::radiusFromB(0.85e-3, mu) == doctest::Approx(34.9).epsilon(0.05 / 34.9));
  CHECK(rotation::radiusFromB(2.05e-3, mu) == doctest::Approx(22.5).epsilon(0.05 / 22.5));
  CHECK(rotation::bFromRadius(34.9, mu) == doctest::Approx(0.85e-3).epsilon(5e-3));
  CHECK(rotation::bFromRadius(22.5, mu) == doctest::Approx(2.05e-3).epsilon(5e-3));
  CHECK(rotation::bFromRadius(40.0, mu) ==
        doctest::Approx(rotation::bFromRadius(20.0, mu) / 4.0).epsilon(1e-14));
  CHECK_THROWS_AS(rotation::radiusFromB(0.0, mu), DomainError);
  CHECK_THROWS_AS(rotation::bFromRadius(-1.0, mu), DomainError);
}

TEST_CASE("published effective radii follow from B") {
  const auto isos = dataio::loadBundledIsotopologues();
  for (const auto &row : test::table1_reff) {
    const double mu = dataio::findIsotopologue(isos, row.isotopologue).reducedMassMe();
    CAPTURE(row.dv);
    CHECK(std::abs(rotation::radiusFromB(row.b_mcm1 * 1e-3, mu) - row.r_eff_a0) <= 0.1);
  }
}

TEST_CASE("component counts") {
  RotationalLevel lvl{1.7e-3, 0.4e-3, 2, 0};
  auto c = rotation::components(-1.938, lvl);
  REQUIRE(c.size() == 1);
  CHECK(c[0].wavenumber == 12578.862 - 1.938);

  lvl.r_prime_max = 1;
  c = rotation::components(-1.938, lvl);
  REQUIRE(c.size() == 4);
  CHECK(c[2].wavenumber == doctest::Approx(12578.862 - 1.938 + 2 * 1.7e-3).epsilon(1e-15));
  CHECK(c[3].wavenumber - c[2].wavenumber == doctest::Approx(0.4e-3).epsilon(1e-6));
  CHECK(c[2].wavenumber - c[1].wavenumber == doctest::Approx(0.4e-3).epsilon(1e-6));

  lvl.r_prime_max = 2;
  c = rotation::components(-1.938, lvl);
  CHECK(c.size() == 9);
  CHECK(std::count_if(c.begin(), c.end(), [](const auto &x) { return x.r_prime == 2; }) == 5);

  RotationalLevel f1{1.7e-3, 0.4e-3, 1, 2};
  c = rotation::components(-1.938, f1);
  CHECK(std::count_if(c.begin(), c.end(), [](const auto &x) { return x.r_prime == 2; }) == 3);
  CHECK(c[0].wavenumber == doctest::Approx(12578.862 - 1.938 - 0.0273).epsilon(1e-15));
}

TEST_CASE("invalid rotational levels") {
  CHECK_THROWS_AS(rotation::components(-1.0, {0.0, 0.0, 2, 2}), DomainError);
  CHECK_THROWS_AS(rotation::components(-1.0, {1e-3, 0.0, 3, 2}), DomainError);
  CHECK_THROWS_AS(rotation::components(-1.0, {1e-3, 0.0, 2, -1}), DomainError);
}

TEST_CASE("thermally accessible partial waves") {
  const double mu = 106044.6;
  const PotentialParams p{3186.0, 0.0};
  std::map<int, double> barriers;
  for (int l = 1; l <= 6; ++l)
    barriers[l] = potential::centrifugalBarrier(p, mu, l).height;
  CHECK(units::hartreeToMicroKelvin(barriers[3]) == doctest::Approx(916.0).epsilon(1e-2));
  CHECK(rotation::maxThermalR(450e-6, barriers, 1.0) == 2);
  CHECK(rotation::maxThermalR(1e-3, barriers, 1.0) == 3);
  CHECK(rotation::maxThermalR(0.0, barriers) == 0);
  CHECK(rotation::maxThermalR(1e-12, barriers) == 0);
  // 2 k_B T = 900 uK, just under the 916 uK barrier of l = 3.
  CHECK(rotation::maxThermalR(450e-6, barriers, 2.0) == 2);
  CHECK(rotation::maxThermalR(460e-6, barriers, 2.0) == 3);
}

TEST_CASE("components csv") {
  const auto csv = rotation::componentsCsv(rotation::components(-1.0, {1e-3, 0.0, 2, 0}));
  CHECK(csv == "wavenumber_cm1,r_prime,m_prime,f_prime,amplitude\n12577.862,0,0,2,1\n");
}

TEST_CASE("property: sub-bands are symmetric and counted by min(R, F)") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const RotationalLevel lvl{1e-4 + 4e-3 * u(rng), 3e-3 * u(rng),
                              u(rng) < 0.5 ? 1 : 2, static_cast<int>(u(rng) * 5)};
    const auto c = rotation::components(-20.0 * u(rng), lvl);
    std::size_t expected = 0;
    for (int r = 0; r <= lvl.r_prime_max; ++r)
      expected += 2 * static_cast<std::size_t>(std::min(r, lvl.f_prime)) + 1;
    REQUIRE(c.size() == expected);
    for (const auto &a : c) {
      const auto mirror = std::find_if(c.begin(), c.end(), [&](const auto &b) {
        return b.r_prime == a.r_prime && b.m_prime == -a.m_prime;
      });
      REQUIRE(mirror != c.end());
      const auto center = std::find_if(c.begin(), c.end(), [&](const auto &b) {
        return b.r_prime == a.r_prime && b.m_prime == 0;
      });
      REQUIRE(std::abs((a.wavenumber + mirror->wavenumber) / 2 - center->wavenumber) < 1e-9);
    }
  }
}

TEST_CASE("property: radius and B are inverse") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> lb(std::log(1e-5), std::log(1e-1));
  for (int i = 0; i < 1000; ++i) {
    const double b = std::exp(lb(rng));
    const double back = rotation::bFromRadius(rotation::radiusFromB(b, test::mu176()), test::mu176());
    REQUIRE(std::abs(back - b) <= 1e-12 * b);
  }
}
