#pragma once

#include <vector>

#include "caplab/geometry.hpp"

namespace caplab {

// Gauss energy configuration: surface energy + sigma-weighted wetting energy +
// gravitational potential with density B*z. sigma in (-1,0) targets a
// hydrophilic equilibrium angle theta0 = arccos(sigma).
struct CapillaryConfig {
  double sigma = -0.5;
  double bond = 0.0;  // B in g(x) = B z
  double volume_target = 0.65450;
};

struct DropletSolution {
  MeridianProfile profile;
  double lagrange_multiplier = 0.0;
  double contact_angle = 0.0;
  double volume = 0.0;
  double energy = 0.0;
  double el_residual = 0.0;     // max |H + B z - lambda|
  double young_residual = 0.0;  // |cos(theta) - sigma|
  int newton_iterations = 0;
};

double gauss_energy(const MeridianProfile& p, const CapillaryConfig& cfg);

struct ShootOptions {
  double rk_tol = 1e-12;
  double max_arclength = 0.0;  // 0: derived from the inputs
  double max_step_fraction = 1.0 / 400.0;  // node spacing relative to arclength budget
};

// Integrate the equilibrium profile ODE
//   drho/ds = cos(phi), dz/ds = -sin(phi), dphi/ds = (lambda - B z) - sin(phi)/rho
// from the apex down to the substrate, with the regularized apex value
// dphi/ds = (lambda - B z_apex)/2 and event detection at z = 0.
MeridianProfile shoot_profile(double apex_height, double lambda, double B,
                              const ShootOptions& opt = {});

struct DropletSolveOptions {
  double tol = 1e-10;
  int max_iterations = 50;
  ShootOptions shoot;
};

DropletSolution solve_droplet(const CapillaryConfig& cfg,
                              const DropletSolveOptions& opt = {});

struct ElResidualsReport {
  double max_mc_residual = 0.0;
  double young_residual = 0.0;
  double lambda_hat = 0.0;  // area-weighted mean of H + B z
};
ElResidualsReport el_residuals(const MeridianProfile& p, const CapillaryConfig& cfg);

struct ScalingRow {
  double m = 0.0;
  double sym_diff = 0.0;  // m^{-1} |Omega_m symdiff (m^{1/3} best cap)|
  double theta_star = 0.0;
  double lambda = 0.0;
  double energy = 0.0;
};
std::vector<ScalingRow> scaling_study(const CapillaryConfig& base,
                                      const std::vector<double>& m_sequence);

// Energy gap between the tangency-point wedge and its prism competitor,
// closed form and (for n=2) an independent facet-area computation.
struct WedgeGapReport {
  double gap = 0.0;
  double positivity_threshold = 0.0;  // gap > 0 for r below this
  double direct_gap = 0.0;            // n=2 only; facet-area route
};
WedgeGapReport wedge_gap(double l, double r, double sigma, int n = 2);

// Exact volume of the spherical cap with contact angle theta and radius r.
double cap_volume(double r, double theta);

// Normalized symmetric-difference volume between two axisymmetric bodies
// sitting on the substrate (both profiles are graphs rho(z)).
double symmetric_difference(const MeridianProfile& a, const MeridianProfile& b);

}  // namespace caplab
