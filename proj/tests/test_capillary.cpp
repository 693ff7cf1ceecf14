#include <doctest.h>

#include "caplab/capillary.hpp"
#include "test_oracles.hpp"

using namespace caplab;

namespace {
const double kTheta = 2.0 * kPi / 3.0;
const double kCapVolume = cap_volume(1.0, kTheta);  // 0.65449846949787352
}  // namespace

TEST_CASE("Gauss energy of the unit cap") {
  const MeridianProfile p = cap_profile({2, 1.0, kTheta}, 4000);
  CapillaryConfig cfg{-0.5, 0.0, kCapVolume};
  CHECK(gauss_energy(p, cfg) == doctest::Approx(0.625 * kPi).epsilon(1e-7));

  CapillaryConfig heavy{-0.5, 1.0, kCapVolume};
  CHECK(gauss_energy(p, heavy) > gauss_energy(p, cfg));

  const MeridianProfile hemi = cap_profile({2, 1.0, kPi / 2.0 + 1e-9}, 4000);
  CapillaryConfig neutral{-1e-12, 0.0, 1.0};
  CHECK(gauss_energy(hemi, neutral) == doctest::Approx(2.0 * kPi).epsilon(1e-7));
}

TEST_CASE("zero-gravity shooting reproduces circular arcs") {
  const MeridianProfile p = shoot_profile(1.5, 2.0, 0.0);
  CHECK(p.phi.back() == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-8 / 2.0));
  CHECK(p.theta_contact() == doctest::Approx(kPi / 3.0).epsilon(1e-8));
  // every node sits on the unit circle centered at (0, 0.5)
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    worst = std::max(worst,
                     std::abs(std::hypot(p.rho[i], p.z[i] - 0.5) - 1.0));
  CHECK(worst < 1e-9);

  // lambda -> 2 lambda shrinks the same shape by two
  const MeridianProfile q = shoot_profile(0.75, 4.0, 0.0);
  CHECK(q.phi.back() == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-8));
  CHECK(q.contact_radius() == doctest::Approx(0.5 * p.contact_radius()).epsilon(1e-9));
}

TEST_CASE("gravity shooting satisfies the equilibrium relation pointwise") {
  const MeridianProfile p = shoot_profile(1.2, 2.0, 0.5);
  CapillaryConfig cfg{-0.5, 0.5, 1.0};
  const ElResidualsReport r = el_residuals(p, cfg);
  CHECK(r.max_mc_residual <= 1e-8);
  CHECK(p.theta_contact() != doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-3));
}

TEST_CASE("shooting error paths") {
  // circle closes above the substrate
  CHECK_THROWS_AS(shoot_profile(5.0, 2.0, 0.0), Error);
  try {
    shoot_profile(5.0, 2.0, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSubstrateHit);
  }
  CHECK_THROWS_AS(shoot_profile(-1.0, 2.0, 0.0), Error);
}

TEST_CASE("el_residuals on exact and mismatched caps") {
  const MeridianProfile p = cap_profile({2, 1.0, kTheta}, 4000);
  const ElResidualsReport ok = el_residuals(p, {-0.5, 0.0, kCapVolume});
  CHECK(ok.max_mc_residual <= 1e-10);
  CHECK(ok.young_residual <= 1e-10);
  const ElResidualsReport off = el_residuals(p, {-0.6, 0.0, kCapVolume});
  CHECK(off.young_residual == doctest::Approx(0.1).epsilon(1e-9));
}

TEST_CASE("zero-gravity droplet solve recovers the unit cap") {
  const DropletSolution sol = solve_droplet({-0.5, 0.0, kCapVolume});
  CHECK(sol.lagrange_multiplier == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sol.contact_angle == doctest::Approx(kTheta).epsilon(1e-8));
  CHECK(std::abs(sol.volume - kCapVolume) <= 1e-8);
  CHECK(sol.el_residual <= 1e-8);
  CHECK(sol.young_residual <= 1e-8);

  // pointwise round trip against the analytic cap
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.profile.size(); ++i)
    worst = std::max(
        worst, std::abs(std::hypot(sol.profile.rho[i], sol.profile.z[i] + 0.5) - 1.0));
  CHECK(worst <= 1e-7);
}

TEST_CASE("volume scaling law of the zero-gravity solve") {
  const DropletSolution sol = solve_droplet({-0.5, 0.0, 8.0 * kCapVolume});
  CHECK(sol.lagrange_multiplier == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(sol.contact_angle == doctest::Approx(kTheta).epsilon(1e-8));
}

TEST_CASE("gravity shifts the equilibrium but keeps the contact angle exact") {
  const DropletSolution sol = solve_droplet({-0.5, 0.2, kCapVolume});
  CHECK(sol.young_residual <= 1e-8);
  CHECK(sol.el_residual <= 1e-8);
  // gravity adds positive potential energy relative to the weightless cap
  const DropletSolution flat = solve_droplet({-0.5, 0.0, kCapVolume});
  CHECK(sol.energy > flat.energy);
}

TEST_CASE("the equilibrium cap energy is a local minimum among same-volume profiles") {
  const CapillaryConfig cfg{-0.5, 0.0, kCapVolume};
  const MeridianProfile capp = cap_profile({2, 1.0, kTheta}, 4000);
  const double base = gauss_energy(capp, cfg);
  for (const int mode : {2, 3}) {
    for (const double amp : {0.02, 0.05}) {
      MeridianProfile p = perturbed_cap_profile({2, 1.0, kTheta}, amp, mode, 4000);
      // rescale to the exact target volume
      const GeometryReport g = profile_report(p);
      const double scale = std::cbrt(cfg.volume_target / g.volume);
      for (std::size_t i = 0; i < p.size(); ++i) {
        p.s[i] *= scale;
        p.rho[i] *= scale;
        p.z[i] *= scale;
      }
      for (auto& k : p.kappa_m) k /= scale;
      CHECK(gauss_energy(p, cfg) > base + 1e-5);
    }
  }
}

TEST_CASE("scaling study without gravity collapses to the cap at every volume") {
  std::vector<double> ms;
  for (int i = 0; i < 4; ++i) ms.push_back(kCapVolume / std::pow(2.0, i));
  const auto rows = scaling_study({-0.5, 0.0, kCapVolume}, ms);
  for (const auto& r : rows) {
    CHECK(r.sym_diff <= 1e-6);
    CHECK(r.theta_star == doctest::Approx(std::acos(-0.5)).epsilon(1e-3));
  }
}

TEST_CASE("a large droplet with gravity flattens away from the cap") {
  std::vector<double> ms = {2.0, 1.0, 0.5, 0.25};
  const auto rows = scaling_study({-0.5, 1.0, 2.0}, ms);
  CHECK(rows.front().sym_diff > 1e-3);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    CHECK(rows[i + 1].sym_diff <= rows[i].sym_diff);
}

TEST_CASE("scaling study input validation") {
  CHECK_THROWS_AS(scaling_study({-0.5, 0.0, 1.0}, {1.0, 0.5}), Error);
  CHECK_THROWS_AS(scaling_study({-0.5, 0.0, 1.0}, {1.0, 2.0, 0.5, 0.25}), Error);
}

TEST_CASE("wedge gap closed form against facet areas") {
  const WedgeGapReport w = wedge_gap(1.0, 0.1, -0.5);
  CHECK(w.gap == doctest::Approx(0.1136068).epsilon(1e-7 / 0.1136));
  CHECK(w.positivity_threshold == doctest::Approx(1.2360680).epsilon(1e-7));
  CHECK(std::abs(w.gap - w.direct_gap) <= 1e-12);

  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      const double l = 0.2 * i;
      const double r = 0.03 * j * l;
      const WedgeGapReport g = wedge_gap(l, r, -0.5);
      CHECK(std::abs(g.gap - g.direct_gap) <= 1e-12 * std::max(1.0, std::abs(g.gap)));
    }
  }
}

TEST_CASE("wedge gap is positive below the threshold and linear as r -> 0") {
  const double l = 1.0, sigma = -0.5;
  const WedgeGapReport at = wedge_gap(l, 0.99 * wedge_gap(l, 0.1, sigma).positivity_threshold,
                                      sigma);
  CHECK(at.gap > 0.0);
  const WedgeGapReport beyond =
      wedge_gap(l, 1.01 * wedge_gap(l, 0.1, sigma).positivity_threshold, sigma);
  CHECK(beyond.gap < 0.0);

  const double slope = 2.0 * (std::sqrt(1.25) - 0.5);
  CHECK(wedge_gap(l, 1e-6, sigma).gap / 1e-6 == doctest::Approx(slope).epsilon(1e-4));
  CHECK_THROWS_AS(wedge_gap(1.0, 0.1, 0.0), Error);
  CHECK_THROWS_AS(wedge_gap(1.0, 0.1, -1.5), Error);
}
