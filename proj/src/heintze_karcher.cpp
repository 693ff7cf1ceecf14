#include "caplab/heintze_karcher.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>

namespace caplab {

DeficitReport hk_deficit(const GeometryReport& g, double cap_tolerance) {
  if (!g.regime && g.lambda_volume > 1e-12 * std::max(1.0, g.volume))
    throw Error(ErrorCode::RegimeMissing, "regime required when |Lambda| > 0");
  DeficitReport d;
  d.regime = g.regime;
  d.int_n_over_H = g.int_n_over_H;
  d.signed_volume = (g.n + 1) * (g.volume - g.signed_lambda_volume());
  d.deficit = d.int_n_over_H - d.signed_volume;
  d.relative_deficit = d.deficit / d.int_n_over_H;
  d.equality_case = std::abs(d.relative_deficit) < cap_tolerance;
  return d;
}

ClassicalHkReport classical_hk(const MeridianProfile& p) {
  if (!p.closed) throw Error(ErrorCode::NotClosed, "profile must close on the axis");
  p.validate();

  const std::size_t n = p.size();
  const std::vector<double> km = p.meridian_curvature();
  const std::vector<double> kp = p.parallel_curvature();
  std::vector<double> f(n), w(n), Hv(n);
  for (std::size_t i = 0; i < n; ++i) {
    Hv[i] = km[i] + kp[i];
    if (!(Hv[i] > 0.0))
      throw Error(ErrorCode::NonPositiveCurvature, "mean curvature not positive");
  }

  ClassicalHkReport r;
  for (std::size_t i = 0; i < n; ++i) f[i] = 0.5 * p.rho[i] * p.rho[i] * std::sin(p.phi[i]);
  const double volume = 2.0 * kPi * detail::trapz(p.s, f);
  r.lhs = 3.0 * volume;

  for (std::size_t i = 0; i < n; ++i) f[i] = 2.0 / Hv[i] * p.rho[i];
  r.rhs = 2.0 * kPi * detail::trapz(p.s, f);

  for (std::size_t i = 0; i < n; ++i) w[i] = p.rho[i];
  const double area = 2.0 * kPi * detail::trapz(p.s, w);
  for (std::size_t i = 0; i < n; ++i) f[i] = Hv[i] * p.rho[i];
  r.mean_H = 2.0 * kPi * detail::trapz(p.s, f) / area;
  r.max_H_deviation = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    r.max_H_deviation = std::max(r.max_H_deviation, std::abs(Hv[i] - r.mean_H));
  r.cmc_identity_residual = std::abs(r.lhs - 2.0 * area / r.mean_H);
  return r;
}

ClassicalHkReport classical_hk_ball(double r, int n) {
  if (!(r > 0.0) || n < 2) throw Error(ErrorCode::InvalidCap, "invalid ball");
  const double ball = detail::unit_ball_volume(n + 1) * std::pow(r, n + 1);
  const double sphere = (n + 1) * detail::unit_ball_volume(n + 1) * std::pow(r, n);
  ClassicalHkReport out;
  out.lhs = (n + 1) * ball;
  out.rhs = r * sphere;  // H = n/r
  out.mean_H = n / r;
  out.max_H_deviation = 0.0;
  out.cmc_identity_residual = std::abs(out.lhs - n * sphere / out.mean_H);
  return out;
}

MontielRosReport montiel_ros_integral(const MeridianProfile& p) {
  p.validate();
  const std::size_t n = p.size();
  const std::vector<double> km = p.meridian_curvature();
  const std::vector<double> kp = p.parallel_curvature();

  MontielRosReport r;
  std::vector<double> fg(n), fb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double H = km[i] + kp[i];
    if (!(H > 0.0)) throw Error(ErrorCode::H2Violation, "mean curvature not positive");
    double k1 = std::min(km[i], kp[i]);
    double k2 = std::max(km[i], kp[i]);
    if (std::abs(km[i] - kp[i]) <= 1e-12 * std::max(1.0, std::abs(km[i]))) {
      k1 = k2 = 0.5 * H;  // umbilical: upper limit is n/H
    }
    r.max_anisotropy = std::max(r.max_anisotropy, std::abs(km[i] - kp[i]));
    const double T = 1.0 / k2;
    // inner integral of (1 - t k1)(1 - t k2) dt from 0 to T, closed form
    const double inner = T - 0.5 * (k1 + k2) * T * T + k1 * k2 * T * T * T / 3.0;
    fg[i] = inner * p.rho[i];
    fb[i] = (2.0 / H) * p.rho[i] / 3.0;
  }
  r.gamma_integral = 2.0 * kPi * detail::trapz(p.s, fg);
  r.amgm_bound = 2.0 * kPi * detail::trapz(p.s, fb);
  r.gap = r.amgm_bound - r.gamma_integral;
  return r;
}

// ---------------------------------------------------------------------------
// Coverage sampling

namespace {

double next_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// z is strictly decreasing along a valid profile, so the surface is a graph
// rho = rho_p(z) over z in [z_end, z_apex].
struct SurfaceGraph {
  const MeridianProfile& p;
  double rho_at(double z) const {
    const auto& zv = p.z;  // descending
    if (z >= zv.front()) return p.rho.front();
    if (z <= zv.back()) return p.rho.back();
    std::size_t lo = 0, hi = zv.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (zv[mid] > z ? lo : hi) = mid;
    }
    const double t = (z - zv[lo]) / (zv[hi] - zv[lo]);
    return p.rho[lo] + t * (p.rho[hi] - p.rho[lo]);
  }
};

struct NearestHit {
  double s = 0.0;
  Vec2 x;
  double dist = 0.0;
  bool at_contact_end = false;
};

double dist_at(const ProfileInterpolator& interp, double s, const Vec2& y) {
  return (interp.at(s).pos - y).norm();
}

NearestHit nearest_on_profile(const MeridianProfile& p, const ProfileInterpolator& interp,
                              const Vec2& y) {
  const std::size_t n = p.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 256);
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; i += stride) {
    const double d = (p.point(i) - y).norm();
    if (d < best) { best = d; best_i = i; }
  }
  if (const double d = (p.point(n - 1) - y).norm(); d < best) { best = d; best_i = n - 1; }
  const std::size_t lo = best_i > 2 * stride ? best_i - 2 * stride : 0;
  const std::size_t hi = std::min(n - 1, best_i + 2 * stride);
  for (std::size_t i = lo; i <= hi; ++i) {
    const double d = (p.point(i) - y).norm();
    if (d < best) { best = d; best_i = i; }
  }
  // golden-section refinement on the arclength interval around the best node
  double a = p.s[best_i > 0 ? best_i - 1 : 0];
  double b = p.s[std::min(n - 1, best_i + 1)];
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = dist_at(interp, x1, y), f2 = dist_at(interp, x2, y);
  for (int it = 0; it < 60 && (b - a) > 1e-15 * interp.length(); ++it) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - gr * (b - a); f1 = dist_at(interp, x1, y);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + gr * (b - a); f2 = dist_at(interp, x2, y);
    }
  }
  NearestHit hit;
  hit.s = 0.5 * (a + b);
  hit.x = interp.at(hit.s).pos;
  hit.dist = (hit.x - y).norm();
  hit.at_contact_end = hit.s > p.s[n - 1] - 1e-9 * interp.length();
  return hit;
}

}  // namespace

CoverageReport coverage_sample(const MeridianProfile& p, const GeometryReport& g,
                               long num_samples, std::uint64_t seed,
                               const CoverageOptions& opt) {
  if (num_samples < 1000)
    throw Error(ErrorCode::UsageError, "need at least 1000 samples");
  p.validate();
  if (!g.regime) throw Error(ErrorCode::RegimeMissing, "regime required for coverage");
  const Regime regime = *g.regime;
  if (opt.region == CoverageRegion::LambdaOnly && regime != Regime::Hydrophilic)
    throw Error(ErrorCode::RegimeViolation, "LambdaOnly region is hydrophilic-only");

  const double theta = g.theta0();
  const double a = p.contact_radius();
  const double slope = std::abs(1.0 / std::tan(theta));
  const double lambda_depth = a * slope;
  const double z_apex = p.z.front();
  const double rho_max = *std::max_element(p.rho.begin(), p.rho.end());

  double z_lo = 0.0, z_hi = z_apex;
  if (opt.region == CoverageRegion::LambdaOnly) {
    z_lo = -lambda_depth;
    z_hi = 0.0;
  } else if (regime == Regime::Hydrophilic) {
    z_lo = -lambda_depth;
  }

  const SurfaceGraph graph{p};
  auto in_lambda = [&](double rho, double z) {
    if (rho >= a) return false;
    const double height = (a - rho) * slope;
    if (regime == Regime::Hydrophobic) return z >= 0.0 && z <= height;
    return z <= 0.0 && z >= -height;
  };
  auto in_omega = [&](double rho, double z) {
    return z > 0.0 && z < z_apex && rho < graph.rho_at(z);
  };
  auto in_region = [&](double rho, double z) {
    switch (opt.region) {
      case CoverageRegion::LambdaOnly:
        return z < 0.0 && in_lambda(rho, z);
      case CoverageRegion::Default:
        if (regime == Regime::Hydrophobic) return in_omega(rho, z) && !in_lambda(rho, z);
        return in_omega(rho, z) || (z < 0.0 && in_lambda(rho, z));
    }
    return false;
  };

  std::mt19937_64 rng(seed);
  const ProfileInterpolator interp(p);

  CoverageReport report;
  report.num_samples = num_samples;
  long passed = 0;
  const double scale = interp.length();
  for (long k = 0; k < num_samples; ++k) {
    // rejection sampling, uniform w.r.t. the rotational volume (weight ~ rho)
    Vec2 y;
    long tries = 0;
    for (;;) {
      const double rho = rho_max * next_uniform(rng);
      const double z = z_lo + (z_hi - z_lo) * next_uniform(rng);
      const double w = next_uniform(rng);
      if (w * rho_max <= rho && in_region(rho, z)) { y = {rho, z}; break; }
      if (++tries > 200000)
        throw Error(ErrorCode::EmptyTestRegion, "rejection sampling found no points");
    }

    const NearestHit hit = nearest_on_profile(p, interp, y);
    bool ok;
    double kmax = 0.0;
    if (hit.at_contact_end) {
      // boundary obtuseness test at the contact circle
      const Vec2 d = (hit.x - y) * (1.0 / hit.dist);
      const double alpha = std::atan2(d.rho, -d.z);
      ok = std::sin(theta - alpha) <= opt.angular_tolerance;
    } else {
      const ProfileSample ps = interp.at(hit.s);
      kmax = std::max(ps.kappa_m, ps.kappa_p);
      const Vec2 nu = {std::sin(ps.phi), std::cos(ps.phi)};
      const Vec2 d = (hit.x - y) * (1.0 / hit.dist);
      const double mis = std::atan2(std::abs(d.cross(nu)), d.dot(nu));
      ok = mis <= opt.angular_tolerance &&
           hit.dist <= 1.0 / kmax + 1e-9 * scale;
    }
    if (ok) {
      ++passed;
    } else if (report.violations.size() < opt.max_recorded_violations) {
      report.violations.push_back({y.rho, y.z, hit.s, hit.dist, kmax});
    }
  }
  report.covered_fraction = static_cast<double>(passed) / static_cast<double>(num_samples);
  return report;
}

void save_violations_csv(const std::vector<CoverageViolation>& v, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  f << "y_rho,y_z,nearest_s,t,kappa_max\n";
  char buf[200];
  for (const auto& row : v) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.y_rho, row.y_z,
                  row.nearest_s, row.t, row.kappa_max);
    f << buf;
  }
}

}  // namespace caplab
