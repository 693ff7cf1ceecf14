#pragma once

#include <cstdint>
#include <vector>

#include "caplab/geometry.hpp"

namespace caplab {

// Deficit of the substrate inequality (n+1)(|Omega| -/+ |Lambda|) <= int n/H,
// sign chosen by the regime. Nonnegative up to discretization, zero exactly on
// caps.
struct DeficitReport {
  std::optional<Regime> regime;
  double int_n_over_H = 0.0;
  double signed_volume = 0.0;  // (n+1)(|Omega| - signed Lambda volume)
  double deficit = 0.0;
  double relative_deficit = 0.0;
  bool equality_case = false;
};

DeficitReport hk_deficit(const GeometryReport& g, double cap_tolerance = 1e-9);

struct ClassicalHkReport {
  double lhs = 0.0;  // (n+1)|Omega|
  double rhs = 0.0;  // int n/H
  double cmc_identity_residual = 0.0;  // |(n+1)|Omega| - n H^n(bd)/H| at mean H
  double mean_H = 0.0;
  double max_H_deviation = 0.0;
};

ClassicalHkReport classical_hk(const MeridianProfile& closed_profile);
// Closed-form equality case for a ball of radius r in R^{n+1}.
ClassicalHkReport classical_hk_ball(double r, int n = 2);

// Normal-map integral of the inward map psi(x,t) = x - t nu(x) over
// Gamma = {0 < t <= 1/kappa_max}, and its arithmetic-geometric mean bound.
struct MontielRosReport {
  double gamma_integral = 0.0;  // int_N dH^n int_0^{1/kmax} prod(1 - t k_i) dt
  double amgm_bound = 0.0;      // (1/(n+1)) int n/H
  double gap = 0.0;
  double max_anisotropy = 0.0;  // max |kappa_m - kappa_p|
};

MontielRosReport montiel_ros_integral(const MeridianProfile& p);

// Monte Carlo check of the nearest-point inclusions behind the deficit
// inequality: every sampled y in the test region must see its nearest surface
// point x with (x-y) aligned to nu(x) and |x-y| <= 1/kappa_max(x); when the
// nearest point is the contact circle, the obtuseness test sin(theta - alpha)
// <= 0 applies instead.
struct CoverageViolation {
  double y_rho = 0.0;
  double y_z = 0.0;
  double nearest_s = 0.0;
  double t = 0.0;
  double kappa_max = 0.0;
};

enum class CoverageRegion {
  Default,     // Omega \ closure(Lambda) hydrophobic, Omega u Lambda hydrophilic
  LambdaOnly,  // the Lambda cone alone (hydrophilic)
};

struct CoverageReport {
  double covered_fraction = 0.0;
  long num_samples = 0;
  std::vector<CoverageViolation> violations;
};

struct CoverageOptions {
  CoverageRegion region = CoverageRegion::Default;
  double angular_tolerance = 1e-6;
  std::size_t max_recorded_violations = 1000;
};

CoverageReport coverage_sample(const MeridianProfile& p, const GeometryReport& g,
                               long num_samples, std::uint64_t seed,
                               const CoverageOptions& opt = {});

void save_violations_csv(const std::vector<CoverageViolation>& v, const std::string& path);

}  // namespace caplab
