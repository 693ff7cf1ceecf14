#include <doctest.h>

#include "caplab/heintze_karcher.hpp"
#include "test_oracles.hpp"

using namespace caplab;

TEST_CASE("deficit vanishes on exact caps in both regimes") {
  {
    const DeficitReport d = hk_deficit(cap_report({2, 1.0, kPi / 3.0}));
    CHECK(d.signed_volume == doctest::Approx(3.0 * kPi).epsilon(1e-12));
    CHECK(d.int_n_over_H == doctest::Approx(3.0 * kPi).epsilon(1e-12));
    CHECK(std::abs(d.relative_deficit) < 1e-12);
    CHECK(d.equality_case);
  }
  {
    const DeficitReport d = hk_deficit(cap_report({2, 1.0, 2.0 * kPi / 3.0}));
    CHECK(d.signed_volume == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(std::abs(d.relative_deficit) < 1e-12);
  }
}

TEST_CASE("hemispheroid caps have a strictly positive deficit") {
  for (const double c : {1.2, 1.5, 2.0}) {
    const GeometryReport g1 = profile_report(spheroid_profile(1.0, c, 2000));
    const GeometryReport g2 = profile_report(spheroid_profile(1.0, c, 4000));
    const DeficitReport d1 = hk_deficit(g1);
    const DeficitReport d2 = hk_deficit(g2);
    // discretization error estimate by Richardson between N and 2N
    const double est = std::abs(d1.deficit - d2.deficit);
    CHECK(d2.deficit > 0.0);
    CHECK(d2.deficit > 10.0 * est);
  }
}

TEST_CASE("deficit stays above minus ten discretization errors on curved profiles") {
  // hydrophilic ellipsoidal cap (center below the substrate)
  const MeridianProfile p1 = spheroid_profile(1.0, 1.3, 1000, -0.4);
  const MeridianProfile p2 = spheroid_profile(1.0, 1.3, 2000, -0.4);
  const DeficitReport d1 = hk_deficit(profile_report(p1));
  const DeficitReport d2 = hk_deficit(profile_report(p2));
  const double est = std::abs(d1.deficit - d2.deficit);
  CHECK(d2.deficit >= -10.0 * est);
  CHECK(d2.deficit > 0.0);
}

TEST_CASE("regime is required as soon as Lambda is nonzero") {
  GeometryReport g = cap_report({2, 1.0, 2.0 * kPi / 3.0});
  g.regime.reset();
  try {
    hk_deficit(g);
    FAIL("expected RegimeMissing");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegimeMissing);
  }
  // hemispheroids carry |Lambda| ~ 0, where both signs agree
  const GeometryReport gh = profile_report(spheroid_profile(1.0, 1.5, 2000));
  CHECK_NOTHROW(hk_deficit(gh));
}

TEST_CASE("classical inequality on closed profiles") {
  {
    const ClassicalHkReport r = classical_hk_ball(1.0);
    CHECK(r.lhs == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(4.0 * kPi).epsilon(1e-12));
    CHECK(r.cmc_identity_residual < 1e-12);
  }
  {
    const ClassicalHkReport r = classical_hk(sphere_profile(1.0, 2000, 2.0));
    CHECK(r.lhs == doctest::Approx(4.0 * kPi).epsilon(1e-4));
    CHECK(r.rhs == doctest::Approx(4.0 * kPi).epsilon(1e-4));
    CHECK(r.cmc_identity_residual < 1e-4);
    CHECK(r.max_H_deviation < 1e-6);
  }
  {
    const ClassicalHkReport r = classical_hk_ball(2.0);
    CHECK(r.lhs == doctest::Approx(32.0 * kPi).epsilon(1e-12));
    CHECK(r.rhs == doctest::Approx(32.0 * kPi).epsilon(1e-12));
  }
  {
    const ClassicalHkReport r = classical_hk(spheroid_profile(1.0, 2.0, 4000, 3.0, true));
    CHECK(r.rhs - r.lhs > 0.1);  // strict away from the ball
  }
  CHECK_THROWS_AS(classical_hk(cap_profile({2, 1.0, kPi / 3.0}, 256)), Error);
}

TEST_CASE("normal-map integral and its mean inequality") {
  {
    const MontielRosReport r = montiel_ros_integral(sphere_profile(1.0, 2000, 2.0));
    CHECK(r.gamma_integral == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-5));
    CHECK(std::abs(r.gamma_integral - r.amgm_bound) < 1e-10);
    CHECK(r.max_anisotropy < 1e-8);
  }
  {
    const MontielRosReport r = montiel_ros_integral(cap_profile({2, 1.0, 2.0 * kPi / 3.0}, 2000));
    CHECK(r.gamma_integral == doctest::Approx(kPi / 3.0).epsilon(1e-5));
    CHECK(std::abs(r.gamma_integral - r.amgm_bound) < 1e-10);
  }
  {
    const MeridianProfile p = spheroid_profile(1.0, 2.0, 4000, 3.0, true);
    const MontielRosReport r = montiel_ros_integral(p);
    CHECK(r.gamma_integral < r.amgm_bound);
    CHECK(r.gap > 1e-3);
    const oracle::Spheroid os{1.0, 2.0, 3.0, true};
    CHECK(r.gamma_integral == doctest::Approx(os.montiel_ros_integral()).epsilon(1e-6));
  }
}

TEST_CASE("volume-to-normal-map chain on substrate geometries") {
  // (n+1)(|Omega| -/+ |Lambda|) <= (n+1) * gamma_integral <= int n/H
  for (const double theta : {kPi / 3.0, 2.0 * kPi / 3.0}) {
    const MeridianProfile p = cap_profile({2, 1.0, theta}, 2000);
    const GeometryReport g = profile_report(p);
    const DeficitReport d = hk_deficit(g);
    const MontielRosReport mr = montiel_ros_integral(p);
    CHECK(d.signed_volume <= 3.0 * mr.gamma_integral + 1e-6);
    CHECK(3.0 * mr.gamma_integral <= g.int_n_over_H + 1e-6);
  }
  const MeridianProfile sp = spheroid_profile(1.0, 1.5, 2000);
  const GeometryReport g = profile_report(sp);
  const MontielRosReport mr = montiel_ros_integral(sp);
  CHECK(3.0 * (g.volume - g.signed_lambda_volume()) <= 3.0 * mr.gamma_integral + 1e-6);
  CHECK(3.0 * mr.gamma_integral <= g.int_n_over_H + 1e-6);
}

TEST_CASE("coverage sampling sees full inclusion on caps") {
  {
    const MeridianProfile p = cap_profile({2, 1.0, 2.0 * kPi / 3.0}, 4000);
    const GeometryReport g = profile_report(p);
    const CoverageReport r = coverage_sample(p, g, 20000, 7);
    CHECK(r.covered_fraction == 1.0);
    CHECK(r.violations.empty());
  }
  {
    const MeridianProfile p = cap_profile({2, 1.0, kPi / 3.0}, 4000);
    const GeometryReport g = profile_report(p);
    const CoverageReport r = coverage_sample(p, g, 20000, 7);
    CHECK(r.covered_fraction == 1.0);
  }
}

TEST_CASE("coverage of the Lambda cone alone (hydrophilic)") {
  const MeridianProfile p = cap_profile({2, 1.0, 2.0 * kPi / 3.0}, 4000);
  const GeometryReport g = profile_report(p);
  CoverageOptions opt;
  opt.region = CoverageRegion::LambdaOnly;
  const CoverageReport r = coverage_sample(p, g, 5000, 11, opt);
  CHECK(r.covered_fraction == 1.0);
}

TEST_CASE("coverage sampling is deterministic in the seed") {
  const MeridianProfile p = cap_profile({2, 1.0, 2.0 * kPi / 3.0}, 2000);
  const GeometryReport g = profile_report(p);
  const CoverageReport a = coverage_sample(p, g, 2000, 42);
  const CoverageReport b = coverage_sample(p, g, 2000, 42);
  CHECK(a.covered_fraction == b.covered_fraction);
  CHECK(a.violations.size() == b.violations.size());
}

TEST_CASE("coverage preconditions") {
  const MeridianProfile p = cap_profile({2, 1.0, 2.0 * kPi / 3.0}, 2000);
  const GeometryReport g = profile_report(p);
  CHECK_THROWS_AS(coverage_sample(p, g, 10, 1), Error);
  GeometryReport no_regime = g;
  no_regime.regime.reset();
  CHECK_THROWS_AS(coverage_sample(p, no_regime, 2000, 1), Error);
}
