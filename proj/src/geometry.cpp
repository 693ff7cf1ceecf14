#include "caplab/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace caplab {

namespace detail {

double sin_power_integral(int k, double x) {
  if (k == 0) return x;
  if (k == 1) return 1.0 - std::cos(x);
  // d/dx [ -cos sin^{k-1} ] integrates by parts into the recurrence below.
  return (-std::cos(x) * std::pow(std::sin(x), k - 1) +
          (k - 1) * sin_power_integral(k - 2, x)) /
         static_cast<double>(k);
}

double unit_ball_volume(int k) {
  if (k == 0) return 1.0;
  if (k == 1) return 2.0;
  return unit_ball_volume(k - 2) * 2.0 * kPi / static_cast<double>(k);
}

double trapz(const std::vector<double>& s, const std::vector<double>& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    acc += 0.5 * (f[i] + f[i + 1]) * (s[i + 1] - s[i]);
  return acc;
}

// First derivative on a nonuniform 3-point stencil, one-sided at the ends.
std::vector<double> derivative_nonuniform(const std::vector<double>& x,
                                          const std::vector<double>& f) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 3) {
    if (n == 2) d[0] = d[1] = (f[1] - f[0]) / (x[1] - x[0]);
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = x[i] - x[i - 1];
    const double h2 = x[i + 1] - x[i];
    d[i] = (f[i + 1] * h1 * h1 - f[i - 1] * h2 * h2 + f[i] * (h2 * h2 - h1 * h1)) /
           (h1 * h2 * (h1 + h2));
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    d[0] = (-f[2] * h1 * h1 + f[1] * (h1 + h2) * (h1 + h2) -
            f[0] * (h2 * h2 + 2.0 * h1 * h2)) /
           (h1 * h2 * (h1 + h2));
  }
  {
    const std::size_t n1 = n - 1;
    const double h1 = x[n1 - 1] - x[n1 - 2];
    const double h2 = x[n1] - x[n1 - 1];
    d[n1] = (f[n1 - 2] * h2 * h2 - f[n1 - 1] * (h1 + h2) * (h1 + h2) +
             f[n1] * (h1 * h1 + 2.0 * h1 * h2)) /
            (h1 * h2 * (h1 + h2));
  }
  return d;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ContainerModel

ContainerModel ContainerModel::bowl(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidCap, "bowl radius must be positive");
  ContainerModel c;
  c.kind = Kind::SphericalBowl;
  c.bowl_radius = radius;
  return c;
}

double ContainerModel::wall_z(double rho) const {
  if (kind == Kind::FlatSubstrate) return 0.0;
  const double R = bowl_radius;
  return R - std::sqrt(std::max(0.0, R * R - rho * rho));
}

double ContainerModel::wall_z_deriv(double rho) const {
  if (kind == Kind::FlatSubstrate) return 0.0;
  const double R = bowl_radius;
  return rho / std::sqrt(std::max(1e-300, R * R - rho * rho));
}

Vec2 ContainerModel::wall_normal(double rho) const {
  if (kind == Kind::FlatSubstrate) return {0.0, -1.0};
  // Bowl wall is the lower cap of the sphere of radius R centered at (0, R);
  // nu_K points out of the fluid, toward the solid.
  const double R = bowl_radius;
  const double z = wall_z(rho);
  return {rho / R, (z - R) / R};
}

double ContainerModel::wall_mean_curvature() const {
  if (kind == Kind::FlatSubstrate) return 0.0;
  return 2.0 / bowl_radius;
}

double ContainerModel::wall_shape_coeff() const {
  if (kind == Kind::FlatSubstrate) return 0.0;
  return 1.0 / bowl_radius;
}

// ---------------------------------------------------------------------------
// MeridianProfile

void MeridianProfile::validate(const ContainerModel& c) const {
  const std::size_t n = size();
  if (n < 4) throw Error(ErrorCode::DegenerateProfile, "too few points");
  if (rho.size() != n || z.size() != n || phi.size() != n ||
      (!kappa_m.empty() && kappa_m.size() != n))
    throw Error(ErrorCode::DegenerateProfile, "inconsistent column lengths");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(s[i + 1] > s[i]))
      throw Error(ErrorCode::DegenerateProfile, "arclength not strictly increasing");
    if ((point(i + 1) - point(i)).norm() < 1e-15)
      throw Error(ErrorCode::DegenerateProfile, "repeated points");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i] < -1e-12) throw Error(ErrorCode::DegenerateProfile, "negative rho");
  }
  if (std::abs(rho.front()) > 1e-12)
    throw Error(ErrorCode::DegenerateProfile, "profile must start on the axis");
  if (closed) {
    if (std::abs(rho.back()) > 1e-12)
      throw Error(ErrorCode::DegenerateProfile, "closed profile must end on the axis");
    return;
  }
  if (!(rho.back() > 0.0))
    throw Error(ErrorCode::DegenerateProfile, "contact radius must be positive");
  const double z_end = c.wall_z(rho.back());
  if (std::abs(z.back() - z_end) > 1e-9)
    throw Error(ErrorCode::DegenerateProfile, "profile must end on the substrate");
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(z[i] > c.wall_z(rho[i]) - 1e-12))
      throw Error(ErrorCode::DegenerateProfile, "interior point at or below the substrate");
  }
  const double theta = theta_contact();
  if (!(theta > 0.0 && theta < kPi))
    throw Error(ErrorCode::DegenerateProfile, "contact angle outside (0, pi)");
}

std::vector<double> MeridianProfile::meridian_curvature() const {
  if (!kappa_m.empty()) return kappa_m;
  return detail::derivative_nonuniform(s, phi);
}

std::vector<double> MeridianProfile::parallel_curvature() const {
  const std::size_t n = size();
  const std::vector<double> km = meridian_curvature();
  std::vector<double> kp(n);
  const double scale = s.back() - s.front();
  for (std::size_t i = 0; i < n; ++i) {
    if (rho[i] < 1e-9 * scale)
      kp[i] = km[i];  // apex limit
    else
      kp[i] = std::sin(phi[i]) / rho[i];
  }
  return kp;
}

// ---------------------------------------------------------------------------
// Reports

double GeometryReport::signed_lambda_volume() const {
  if (!regime) return 0.0;
  return *regime == Regime::Hydrophobic ? lambda_volume : -lambda_volume;
}

static std::optional<Regime> classify_theta(double theta, double tol = 1e-12) {
  if (theta > tol && theta < kPi / 2.0 - tol) return Regime::Hydrophobic;
  if (theta > kPi / 2.0 + tol && theta < kPi - tol) return Regime::Hydrophilic;
  return std::nullopt;
}

GeometryReport cap_report(const CapSpec& cap, const CapReportOptions& opt) {
  if (cap.n < 2) throw Error(ErrorCode::InvalidCap, "n must be >= 2");
  if (!(cap.r > 0.0)) throw Error(ErrorCode::InvalidCap, "r must be positive");
  if (!(cap.theta > 0.0 && cap.theta < kPi))
    throw Error(ErrorCode::InvalidCap, "theta must be in (0, pi)");
  if (std::abs(cap.theta - kPi / 2.0) <= 1e-14)
    throw Error(ErrorCode::ThetaDegenerate, "theta = pi/2 is excluded");

  const int n = cap.n;
  const double r = cap.r;
  const double theta = cap.theta;
  const double beta_max = kPi - theta;
  const double a = r * std::sin(theta);
  const double omega_n = detail::unit_ball_volume(n);

  GeometryReport g;
  g.n = n;
  g.area_M = n * omega_n * std::pow(r, n) * detail::sin_power_integral(n - 1, beta_max);
  g.volume = omega_n * std::pow(r, n + 1) * detail::sin_power_integral(n + 1, beta_max);
  g.area_Sigma = omega_n * std::pow(a, n);
  g.len_bdSigma = n * omega_n * std::pow(a, n - 1);
  g.int_n_over_H = r * g.area_M;  // H = n/r on the whole cap
  const double slope = opt.lambda_slope_literal_tan ? std::abs(std::tan(theta))
                                                    : std::abs(1.0 / std::tan(theta));
  g.lambda_volume = slope * omega_n * std::pow(a, n + 1) / (n + 1);
  g.lambda_slope_literal_tan = opt.lambda_slope_literal_tan;
  g.gamma = -r * std::cos(theta) / (n + 1);
  g.theta_min = g.theta_max = theta;
  g.regime = classify_theta(theta);
  g.mean_H = n / r;
  g.max_H_deviation = 0.0;
  if (theta < kPi / 2.0) {
    g.diameter = 2.0 * r;  // equator lies inside the half-space
  } else {
    const double cap_height = r * (1.0 + std::cos(theta));
    g.diameter = std::max(2.0 * a, std::hypot(a, cap_height));
  }
  return g;
}

// Max pairwise distance of the solid of revolution: realized between points in
// opposite meridian half-planes, dist^2 = (rho_i + rho_j)^2 + (z_i - z_j)^2.
// Coarse scan over a subsample, then local refinement at full resolution.
static double profile_diameter(const MeridianProfile& p) {
  const std::size_t n = p.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 512);
  auto d2 = [&](std::size_t i, std::size_t j) {
    const double dr = p.rho[i] + p.rho[j];
    const double dz = p.z[i] - p.z[j];
    return dr * dr + dz * dz;
  };
  double best = 0.0;
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < n; i += stride)
    for (std::size_t j = i; j < n; j += stride)
      if (double v = d2(i, j); v > best) { best = v; bi = i; bj = j; }
  // include the last point in the scan
  for (std::size_t i = 0; i < n; i += stride)
    if (double v = d2(i, n - 1); v > best) { best = v; bi = i; bj = n - 1; }
  const std::size_t w = 2 * stride;
  const std::size_t i0 = bi > w ? bi - w : 0, i1 = std::min(n, bi + w + 1);
  const std::size_t j0 = bj > w ? bj - w : 0, j1 = std::min(n, bj + w + 1);
  for (std::size_t i = i0; i < i1; ++i)
    for (std::size_t j = j0; j < j1; ++j) best = std::max(best, d2(i, j));
  return std::sqrt(best);
}

GeometryReport profile_report(const MeridianProfile& p, const ContainerModel& c,
                              const CapReportOptions& opt) {
  if (p.closed) throw Error(ErrorCode::DegenerateProfile, "substrate profile expected");
  if (p.size() < 32) throw Error(ErrorCode::DegenerateProfile, "need at least 32 points");
  p.validate(c);

  const std::size_t n = p.size();
  const std::vector<double> km = p.meridian_curvature();
  const std::vector<double> kp = p.parallel_curvature();
  std::vector<double> f(n);

  for (std::size_t i = 0; i < n; ++i) {
    if (!(km[i] + kp[i] > 0.0))
      throw Error(ErrorCode::NonPositiveCurvature, "mean curvature not positive at s=" +
                                                       std::to_string(p.s[i]));
  }

  GeometryReport g;
  g.n = 2;

  for (std::size_t i = 0; i < n; ++i) f[i] = p.rho[i];
  g.area_M = 2.0 * kPi * detail::trapz(p.s, f);

  for (std::size_t i = 0; i < n; ++i) f[i] = 2.0 / (km[i] + kp[i]) * p.rho[i];
  g.int_n_over_H = 2.0 * kPi * detail::trapz(p.s, f);

  for (std::size_t i = 0; i < n; ++i) f[i] = (km[i] + kp[i]) * p.rho[i];
  g.mean_H = 2.0 * kPi * detail::trapz(p.s, f) / g.area_M;
  g.max_H_deviation = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    g.max_H_deviation = std::max(g.max_H_deviation, std::abs(km[i] + kp[i] - g.mean_H));

  // Meridian-plane area weighted by rho, via Green's theorem along the
  // boundary loop (the axis leg vanishes, the wall leg is subtracted).
  for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * p.rho[i] * p.rho[i] * std::sin(p.phi[i]);
  double vol2pi = detail::trapz(p.s, f);
  const double a = p.contact_radius();
  if (c.kind == ContainerModel::Kind::SphericalBowl) {
    const int m = 4096;
    double acc = 0.0;
    for (int i = 0; i < m; ++i) {
      const double r0 = a * i / m, r1 = a * (i + 1) / m, rm = 0.5 * (r0 + r1);
      acc += (0.5 * rm * rm * c.wall_z_deriv(rm)) * (r1 - r0);
    }
    vol2pi -= acc;
  }
  g.volume = 2.0 * kPi * vol2pi;

  // Contact angle against the container normal.
  const Vec2 nu_M = p.normal(n - 1);
  const Vec2 nu_K = c.wall_normal(a);
  const double cos_theta = std::clamp(nu_M.dot(nu_K), -1.0, 1.0);
  const double theta = std::acos(cos_theta);
  g.theta_min = g.theta_max = theta;
  g.regime = classify_theta(theta);

  if (c.kind == ContainerModel::Kind::SphericalBowl) {
    g.area_Sigma = 2.0 * kPi * c.bowl_radius * c.wall_z(a);
  } else {
    g.area_Sigma = kPi * a * a;
  }
  g.len_bdSigma = 2.0 * kPi * a;

  const bool degenerate = std::abs(theta - kPi / 2.0) <= 1e-12;
  double slope = 0.0;
  if (!degenerate)
    slope = opt.lambda_slope_literal_tan ? std::abs(std::tan(theta))
                                         : std::abs(1.0 / std::tan(theta));
  g.lambda_volume = slope * kPi * a * a * a / 3.0;
  g.lambda_slope_literal_tan = opt.lambda_slope_literal_tan;
  g.gamma = degenerate ? 0.0 : -(2.0 / 3.0) * g.area_Sigma / (std::tan(theta) * g.len_bdSigma);
  g.diameter = profile_diameter(p);
  return g;
}

HypothesisCheck check_hypotheses(const MeridianProfile& p) {
  p.validate();
  const std::vector<double> km = p.meridian_curvature();
  const std::vector<double> kp = p.parallel_curvature();
  double min_H = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) min_H = std::min(min_H, km[i] + kp[i]);

  const double theta = p.theta_contact();
  const auto regime = classify_theta(theta);
  if (!regime)
    throw Error(ErrorCode::MixedRegime, "theta range touches pi/2 or the ends of (0, pi)");

  HypothesisCheck hc;
  hc.regime = *regime;
  hc.theta_min = hc.theta_max = theta;
  hc.min_mean_curvature = min_H;
  hc.h2_ok = min_H > 0.0;
  return hc;
}

double flatness_metrics(const ContainerModel& c, double region_radius) {
  if (!(region_radius > 0.0))
    throw Error(ErrorCode::UsageError, "region_radius must be positive");
  if (c.kind == ContainerModel::Kind::FlatSubstrate) return 0.0;
  const double R = c.bowl_radius;
  const double rr = std::min(region_radius, 0.999 * R);
  double eps = 1.0 / R;  // ||A|| on the wetted region
  const int m = 4096;
  for (int i = 1; i <= m; ++i) {
    const double rho = rr * i / m;
    const double z = c.wall_z(rho);
    const Vec2 nu = c.wall_normal(rho);
    eps = std::max(eps, std::abs(1.0 + nu.z));
    const double xdot = rho * nu.rho + z * nu.z;
    eps = std::max(eps, std::abs(xdot) / std::hypot(rho, z));
  }
  return eps;
}

// ---------------------------------------------------------------------------
// Builders

MeridianProfile cap_profile(const CapSpec& cap, int N) {
  if (cap.n != 2) throw Error(ErrorCode::InvalidCap, "profiles are n=2 only");
  if (std::abs(cap.theta - kPi / 2.0) <= 1e-14)
    throw Error(ErrorCode::ThetaDegenerate, "theta = pi/2 is excluded");
  if (!(cap.r > 0.0) || !(cap.theta > 0.0 && cap.theta < kPi))
    throw Error(ErrorCode::InvalidCap, "invalid cap");
  const double r = cap.r, theta = cap.theta;
  const double h = r * std::cos(theta);
  const double beta_max = kPi - theta;
  MeridianProfile p;
  p.s.resize(N); p.rho.resize(N); p.z.resize(N); p.phi.resize(N); p.kappa_m.assign(N, 1.0 / r);
  for (int i = 0; i < N; ++i) {
    const double beta = beta_max * i / (N - 1);
    p.s[i] = r * beta;
    p.rho[i] = r * std::sin(beta);
    p.z[i] = h + r * std::cos(beta);
    p.phi[i] = beta;
  }
  p.rho.front() = 0.0;
  p.z.back() = 0.0;
  return p;
}

MeridianProfile spheroid_profile(double a, double c, int N, double center_z, bool closed) {
  if (!(a > 0.0 && c > 0.0)) throw Error(ErrorCode::InvalidCap, "semi-axes must be positive");
  double tau_end;
  if (closed) {
    tau_end = kPi;
  } else {
    if (!(std::abs(center_z) < c))
      throw Error(ErrorCode::InvalidCap, "truncation plane misses the spheroid");
    tau_end = std::acos(-center_z / c);
  }
  MeridianProfile p;
  p.closed = closed;
  p.s.resize(N); p.rho.resize(N); p.z.resize(N); p.phi.resize(N); p.kappa_m.resize(N);
  double s = 0.0;
  double prev_speed = 0.0;
  for (int i = 0; i < N; ++i) {
    const double tau = tau_end * i / (N - 1);
    const double g = std::hypot(a * std::cos(tau), c * std::sin(tau));
    if (i > 0) s += 0.5 * (prev_speed + g) * (tau_end / (N - 1));
    prev_speed = g;
    p.s[i] = s;
    p.rho[i] = a * std::sin(tau);
    p.z[i] = center_z + c * std::cos(tau);
    p.phi[i] = std::atan2(c * std::sin(tau), a * std::cos(tau));
    p.kappa_m[i] = a * c / (g * g * g);
  }
  p.rho.front() = 0.0;
  if (closed)
    p.rho.back() = 0.0;
  else
    p.z.back() = 0.0;
  return p;
}

MeridianProfile sphere_profile(double r, int N, double center_z) {
  return spheroid_profile(r, r, N, center_z, /*closed=*/true);
}

MeridianProfile perturbed_cap_profile(const CapSpec& cap, double amplitude, int mode, int N) {
  if (cap.n != 2) throw Error(ErrorCode::InvalidCap, "profiles are n=2 only");
  const double r0 = cap.r, theta = cap.theta;
  const double cz = r0 * std::cos(theta);
  auto R = [&](double b) { return r0 * (1.0 + amplitude * std::cos(mode * b)); };
  auto Rp = [&](double b) { return -r0 * amplitude * mode * std::sin(mode * b); };
  auto Rpp = [&](double b) { return -r0 * amplitude * mode * mode * std::cos(mode * b); };
  auto zf = [&](double b) { return cz + R(b) * std::cos(b); };

  // First crossing of the substrate.
  double b_lo = 0.0, b_hi = kPi;
  const int scan = 512;
  bool bracketed = false;
  for (int i = 1; i <= scan; ++i) {
    const double b = kPi * i / scan;
    if (zf(b) <= 0.0) { b_lo = kPi * (i - 1) / scan; b_hi = b; bracketed = true; break; }
  }
  if (!bracketed)
    throw Error(ErrorCode::DegenerateProfile, "perturbed cap never reaches the substrate");
  for (int it = 0; it < 100; ++it) {
    const double bm = 0.5 * (b_lo + b_hi);
    (zf(bm) > 0.0 ? b_lo : b_hi) = bm;
  }
  const double b_end = 0.5 * (b_lo + b_hi);

  MeridianProfile p;
  p.s.resize(N); p.rho.resize(N); p.z.resize(N); p.phi.resize(N); p.kappa_m.resize(N);
  double s = 0.0, prev_speed = 0.0;
  for (int i = 0; i < N; ++i) {
    const double b = b_end * i / (N - 1);
    const double rr = R(b), rp = Rp(b), rpp = Rpp(b);
    const double drho = rp * std::sin(b) + rr * std::cos(b);
    const double dz = rp * std::cos(b) - rr * std::sin(b);
    const double speed = std::hypot(drho, dz);
    if (i > 0) s += 0.5 * (prev_speed + speed) * (b_end / (N - 1));
    prev_speed = speed;
    p.s[i] = s;
    p.rho[i] = rr * std::sin(b);
    p.z[i] = cz + rr * std::cos(b);
    p.phi[i] = std::atan2(-dz, drho);
    p.kappa_m[i] = (rr * rr + 2.0 * rp * rp - rr * rpp) / (speed * speed * speed);
  }
  p.rho.front() = 0.0;
  p.z.back() = 0.0;
  return p;
}

MeridianProfile cap_on_bowl_profile(double r_free, double theta, double bowl_R, int N) {
  if (!(r_free > 0.0 && bowl_R > r_free))
    throw Error(ErrorCode::InvalidCap, "need 0 < r_free < bowl_R");
  const double R = bowl_R;

  // Contact circle of the free sphere centered at (0,h) with the bowl sphere
  // centered at (0,R); cos(theta) there as a function of h.
  auto contact = [&](double h, double* rho_i, double* z_i) -> bool {
    const double zi = 0.5 * ((r_free * r_free - R * R) / (R - h) + h + R);
    const double t = r_free * r_free - (zi - h) * (zi - h);
    if (t <= 0.0) return false;
    *z_i = zi;
    *rho_i = std::sqrt(t);
    return true;
  };
  auto cos_angle = [&](double h) -> double {
    double rho_i, z_i;
    if (!contact(h, &rho_i, &z_i)) return 2.0;  // no intersection
    return (rho_i * rho_i + (z_i - h) * (z_i - R)) / (r_free * R);
  };

  const double target = std::cos(theta);
  double h_lo = -0.999 * r_free, h_hi = 0.999 * r_free;
  // cos_angle is increasing in h on the admissible range; find a valid bracket.
  const int scan = 400;
  double prev_h = h_lo, prev_v = cos_angle(h_lo);
  bool found = false;
  for (int i = 1; i <= scan; ++i) {
    const double h = h_lo + (h_hi - h_lo) * i / scan;
    const double v = cos_angle(h);
    if (prev_v <= 1.0 && v <= 1.0 && (prev_v - target) * (v - target) <= 0.0) {
      h_lo = prev_h; h_hi = h; found = true; break;
    }
    prev_h = h; prev_v = v;
  }
  if (!found)
    throw Error(ErrorCode::InvalidCap, "no bowl contact with the requested angle");
  for (int it = 0; it < 100; ++it) {
    const double hm = 0.5 * (h_lo + h_hi);
    ((cos_angle(hm) - target) * (cos_angle(h_lo) - target) > 0.0 ? h_lo : h_hi) = hm;
  }
  const double h = 0.5 * (h_lo + h_hi);
  double rho_i = 0.0, z_i = 0.0;
  if (!contact(h, &rho_i, &z_i))
    throw Error(ErrorCode::InvalidCap, "bowl contact solve lost the intersection");
  const double beta_end = std::acos(std::clamp((z_i - h) / r_free, -1.0, 1.0));

  MeridianProfile p;
  p.s.resize(N); p.rho.resize(N); p.z.resize(N); p.phi.resize(N);
  p.kappa_m.assign(N, 1.0 / r_free);
  for (int i = 0; i < N; ++i) {
    const double beta = beta_end * i / (N - 1);
    p.s[i] = r_free * beta;
    p.rho[i] = r_free * std::sin(beta);
    p.z[i] = h + r_free * std::cos(beta);
    p.phi[i] = beta;
  }
  p.rho.front() = 0.0;
  p.rho.back() = rho_i;
  p.z.back() = z_i;
  return p;
}

ProfileInterpolator::ProfileInterpolator(const MeridianProfile& p)
    : profile_(p), kappa_m_(p.meridian_curvature()) {}

ProfileSample ProfileInterpolator::at(double s) const {
  const auto& sv = profile_.s;
  const double sc = std::clamp(s, sv.front(), sv.back());
  const auto it = std::upper_bound(sv.begin(), sv.end(), sc);
  std::size_t i1 = std::min<std::size_t>(std::distance(sv.begin(), it), sv.size() - 1);
  if (i1 == 0) i1 = 1;
  const std::size_t i0 = i1 - 1;
  const double t = (sc - sv[i0]) / (sv[i1] - sv[i0]);

  const MeridianProfile& p = profile_;
  ProfileSample out;
  out.pos = {p.rho[i0] + t * (p.rho[i1] - p.rho[i0]), p.z[i0] + t * (p.z[i1] - p.z[i0])};
  out.phi = p.phi[i0] + t * (p.phi[i1] - p.phi[i0]);
  out.kappa_m = kappa_m_[i0] + t * (kappa_m_[i1] - kappa_m_[i0]);
  const double scale = sv.back() - sv.front();
  out.kappa_p = out.pos.rho < 1e-9 * scale ? out.kappa_m : std::sin(out.phi) / out.pos.rho;
  return out;
}

// ---------------------------------------------------------------------------
// CSV

void save_profile_csv(const MeridianProfile& p, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  f << "s,rho,z,phi\n";
  char buf[160];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.s[i], p.rho[i], p.z[i],
                  p.phi[i]);
    f << buf;
  }
}

MeridianProfile load_profile_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line.rfind("s,rho,z,phi", 0) != 0)
    throw Error(ErrorCode::IoError, "expected header 's,rho,z,phi' in " + path);
  MeridianProfile p;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    double v[4];
    char comma;
    for (int k = 0; k < 4; ++k) {
      if (!(ss >> v[k])) throw Error(ErrorCode::IoError, "bad row in " + path);
      if (k < 3 && !(ss >> comma)) throw Error(ErrorCode::IoError, "bad row in " + path);
    }
    p.s.push_back(v[0]);
    p.rho.push_back(v[1]);
    p.z.push_back(v[2]);
    p.phi.push_back(v[3]);
  }
  return p;
}

}  // namespace caplab
