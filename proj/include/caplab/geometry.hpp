#pragma once

#include <optional>
#include <string>
#include <vector>

#include "caplab/types.hpp"

namespace caplab {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Contact-angle regime of the substrate, theta strictly inside (0,pi/2) or
// (pi/2,pi). cos(theta) = nu_M . nu_K at the contact line, with nu_K the outer
// normal of the container (-e3 on a flat substrate).
enum class Regime { Hydrophobic, Hydrophilic };

inline const char* to_string(Regime r) {
  return r == Regime::Hydrophobic ? "hydrophobic" : "hydrophilic";
}

// Exact spherical-cap droplet: Omega = H ∩ B_r(r cos(theta) e3), center height
// r cos(theta) (positive hydrophobic, negative hydrophilic). n is the surface
// dimension (ambient dimension minus 1).
struct CapSpec {
  int n = 2;
  double r = 1.0;
  double theta = 2.0 * kPi / 3.0;
};

struct ContainerModel {
  enum class Kind { FlatSubstrate, SphericalBowl };
  Kind kind = Kind::FlatSubstrate;
  double bowl_radius = 0.0;

  static ContainerModel flat() { return {}; }
  static ContainerModel bowl(double radius);

  // Wall height above z=0 at meridian coordinate rho.
  double wall_z(double rho) const;
  double wall_z_deriv(double rho) const;
  // Outer container normal nu_K at a wall point (meridian components).
  Vec2 wall_normal(double rho) const;
  // Scalar mean curvature of the wall w.r.t. nu_K (n=2).
  double wall_mean_curvature() const;
  // A_{dK}[t,t] = coeff * |t|^2 for tangent vectors t.
  double wall_shape_coeff() const;
};

// Generating curve of an axisymmetric droplet surface, ordered from the apex
// (rho=0, z=z_apex) to the contact point. The tangent direction along
// increasing arclength is (cos(phi), -sin(phi)), so phi=0 at the apex and the
// contact angle is theta = pi - phi_end. Principal curvatures w.r.t. the outer
// normal (sin(phi), cos(phi)) are kappa_m = dphi/ds and kappa_p = sin(phi)/rho,
// both 1/r on a cap of radius r.
struct MeridianProfile {
  std::vector<double> s;
  std::vector<double> rho;
  std::vector<double> z;
  std::vector<double> phi;
  // Analytic meridian curvature when the builder knows it; otherwise empty and
  // finite differences of phi are used.
  std::vector<double> kappa_m;
  bool closed = false;

  std::size_t size() const { return s.size(); }
  double contact_radius() const { return rho.back(); }
  double theta_contact() const { return kPi - phi.back(); }
  Vec2 point(std::size_t i) const { return {rho[i], z[i]}; }
  Vec2 normal(std::size_t i) const { return {std::sin(phi[i]), std::cos(phi[i])}; }

  void validate(const ContainerModel& c = ContainerModel::flat()) const;
  std::vector<double> meridian_curvature() const;
  std::vector<double> parallel_curvature() const;
};

// All scalar geometric quantities of one droplet geometry.
struct GeometryReport {
  int n = 2;
  double volume = 0.0;        // |Omega|
  double area_M = 0.0;        // H^n(M)
  double area_Sigma = 0.0;    // H^n(Sigma)
  double len_bdSigma = 0.0;   // H^{n-1}(bd Sigma)
  double int_n_over_H = 0.0;  // integral of n/H_M over M
  double lambda_volume = 0.0; // |Lambda| (unsigned)
  double gamma = 0.0;         // Neumann datum of the torsion potential
  double theta_min = 0.0;
  double theta_max = 0.0;
  std::optional<Regime> regime;
  double diameter = 0.0;
  double mean_H = 0.0;           // area-weighted mean of H_M
  double max_H_deviation = 0.0;  // max |H_M - mean_H|
  bool lambda_slope_literal_tan = false;

  double theta0() const { return 0.5 * (theta_min + theta_max); }
  // +|Lambda| hydrophobic, -|Lambda| hydrophilic; for constant-angle
  // geometries gamma * area_Sigma = -signed_lambda_volume().
  double signed_lambda_volume() const;
  // |Omega| + gamma H^n(Sigma); equals |Omega| - signed Lambda volume for
  // constant-angle geometries and (1/(n+1)) of the deficit-side volume.
  double torsion_volume() const { return volume + gamma * area_Sigma; }
};

struct HypothesisCheck {
  Regime regime;
  double theta_min = 0.0;
  double theta_max = 0.0;
  bool h2_ok = false;
  double min_mean_curvature = 0.0;
};

struct CapReportOptions {
  bool lambda_slope_literal_tan = false;
};

GeometryReport cap_report(const CapSpec& cap, const CapReportOptions& opt = {});
GeometryReport profile_report(const MeridianProfile& p,
                              const ContainerModel& c = ContainerModel::flat(),
                              const CapReportOptions& opt = {});
HypothesisCheck check_hypotheses(const MeridianProfile& p);
double flatness_metrics(const ContainerModel& c, double region_radius);

// Profile builders. N is the number of sample points (>= 32).
MeridianProfile cap_profile(const CapSpec& cap, int N);
// Closed sphere of radius r centered at (0, center_z); for the classical
// (no-substrate) inequality checks.
MeridianProfile sphere_profile(double r, int N, double center_z = 0.0);
// Spheroid with equatorial semi-axis a and polar semi-axis c centered at
// (0, center_z); truncated at z=0 unless closed.
MeridianProfile spheroid_profile(double a, double c, int N, double center_z = 0.0,
                                 bool closed = false);
// Radial perturbation R(beta) = r (1 + amplitude cos(mode beta)) of the cap
// about its sphere center.
MeridianProfile perturbed_cap_profile(const CapSpec& cap, double amplitude, int mode,
                                      int N);
// Spherical free surface of radius r_free meeting a bowl of radius bowl_R at
// contact angle theta; the profile ends on the bowl wall.
MeridianProfile cap_on_bowl_profile(double r_free, double theta, double bowl_R, int N);

// Piecewise-linear profile samples at a given arclength.
struct ProfileSample {
  Vec2 pos;
  double phi = 0.0;
  double kappa_m = 0.0;
  double kappa_p = 0.0;
};

class ProfileInterpolator {
 public:
  explicit ProfileInterpolator(const MeridianProfile& p);
  ProfileSample at(double s) const;
  double length() const { return profile_.s.back(); }
  const MeridianProfile& profile() const { return profile_; }

 private:
  const MeridianProfile& profile_;
  std::vector<double> kappa_m_;
};

// CSV with header `s,rho,z,phi`, arclength-ordered.
void save_profile_csv(const MeridianProfile& p, const std::string& path);
MeridianProfile load_profile_csv(const std::string& path);

namespace detail {
// \int_0^x sin^k(t) dt for integer k >= 0.
double sin_power_integral(int k, double x);
// Volume of the unit ball in R^k.
double unit_ball_volume(int k);
// Trapezoid rule over arclength samples.
double trapz(const std::vector<double>& s, const std::vector<double>& f);
}  // namespace detail

}  // namespace caplab
