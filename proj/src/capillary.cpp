#include "caplab/capillary.hpp"

#include <algorithm>
#include <array>
#include <mutex>
#include <sstream>

#include "caplab/parallel.hpp"

namespace caplab {

double cap_volume(double r, double theta) {
  const double c = std::cos(theta);
  return (kPi / 3.0) * r * r * r * (1.0 + c) * (1.0 + c) * (2.0 - c);
}

double gauss_energy(const MeridianProfile& p, const CapillaryConfig& cfg) {
  p.validate();
  const std::size_t n = p.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = p.rho[i];
  const double area_M = 2.0 * kPi * detail::trapz(p.s, f);
  const double a = p.contact_radius();
  const double area_Sigma = kPi * a * a;
  for (std::size_t i = 0; i < n; ++i)
    f[i] = 0.5 * p.rho[i] * p.rho[i] * p.z[i] * std::sin(p.phi[i]);
  const double z_moment = 2.0 * kPi * detail::trapz(p.s, f);
  return area_M + cfg.sigma * area_Sigma + cfg.bond * z_moment;
}

// ---------------------------------------------------------------------------
// Profile shooting (Dormand-Prince 5(4) with z=0 event detection)

namespace {

// state: rho, z, phi, V (running rotational volume)
using State = std::array<double, 4>;

State ode_rhs(const State& y, double lambda, double B, double kappa0) {
  const double rho = y[0], z = y[1], phi = y[2];
  double km;
  if (rho < 1e-13) {
    km = kappa0;  // apex limit: both curvatures equal
  } else {
    km = (lambda - B * z) - std::sin(phi) / rho;
  }
  return {std::cos(phi), -std::sin(phi), km, kPi * rho * rho * std::sin(phi)};
}

struct DopriStep {
  State y_new;
  double error = 0.0;
};

DopriStep dopri_step(const State& y, double h, double lambda, double B, double kappa0) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2; (void)c3; (void)c4; (void)c5;

  auto axpy = [](const State& y, std::initializer_list<std::pair<double, const State*>> ks,
                 double h) {
    State out = y;
    for (const auto& [a, k] : ks)
      for (int i = 0; i < 4; ++i) out[i] += h * a * (*k)[i];
    return out;
  };

  const State k1 = ode_rhs(y, lambda, B, kappa0);
  const State k2 = ode_rhs(axpy(y, {{a21, &k1}}, h), lambda, B, kappa0);
  const State k3 = ode_rhs(axpy(y, {{a31, &k1}, {a32, &k2}}, h), lambda, B, kappa0);
  const State k4 = ode_rhs(axpy(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, h), lambda, B, kappa0);
  const State k5 = ode_rhs(axpy(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}, h),
                           lambda, B, kappa0);
  const State k6 = ode_rhs(
      axpy(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}, h), lambda, B,
      kappa0);
  DopriStep st;
  st.y_new = axpy(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}}, h);
  const State k7 = ode_rhs(st.y_new, lambda, B, kappa0);
  for (int i = 0; i < 4; ++i) {
    const double err = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
    st.error = std::max(st.error, std::abs(err) / std::max(1.0, std::abs(st.y_new[i])));
  }
  return st;
}

}  // namespace

namespace {

struct ShotResult {
  MeridianProfile profile;
  double volume = 0.0;  // rotational volume carried in the integrator state
};

ShotResult shoot_profile_internal(double apex_height, double lambda, double B,
                                  const ShootOptions& opt) {
  if (!(apex_height > 0.0))
    throw Error(ErrorCode::UsageError, "apex_height must be positive");
  const double kappa0 = 0.5 * (lambda - B * apex_height);
  const double scale = apex_height + 1.0 / std::max(std::abs(lambda), 0.05);
  const double s_budget = opt.max_arclength > 0.0 ? opt.max_arclength : 60.0 * scale;
  // Node spacing follows the expected profile length, so downstream
  // arclength quadrature keeps second-order accuracy.
  const double length_est = kPi / std::max(0.5 * std::abs(lambda), 0.05) + apex_height;
  const double h_max = opt.max_step_fraction * length_est;

  MeridianProfile p;
  auto push = [&](double s, const State& y) {
    p.s.push_back(s);
    p.rho.push_back(y[0]);
    p.z.push_back(y[1]);
    p.phi.push_back(y[2]);
    const double km = y[0] < 1e-13 ? kappa0 : (lambda - B * y[1]) - std::sin(y[2]) / y[0];
    p.kappa_m.push_back(km);
  };

  // Series start off the apex; the ODE is regular from here on.
  const double s0 = 1e-6 * scale;
  const double a1 = kappa0, a3 = B * kappa0 / 16.0;
  State y{s0 - a1 * a1 * s0 * s0 * s0 / 6.0,
          apex_height - a1 * s0 * s0 / 2.0 - (a3 - a1 * a1 * a1 / 6.0) * s0 * s0 * s0 * s0 / 4.0,
          a1 * s0 + a3 * s0 * s0 * s0,
          kPi * s0 * s0 * s0 * s0 * a1 / 4.0};
  push(0.0, State{0.0, apex_height, 0.0, 0.0});
  double s = s0;
  double h = 1e-3 * scale;

  const double tol = opt.rk_tol;
  int rejected_in_a_row = 0;
  while (true) {
    if (s > s_budget)
      throw Error(ErrorCode::NoSubstrateHit, "arclength budget exhausted before z=0");
    if (y[0] < -1e-12 || (p.size() > 4 && y[0] < 1e-10 && y[1] > 0.0))
      throw Error(ErrorCode::NoSubstrateHit, "profile closed on the axis above z=0");
    h = std::min(h, h_max);
    const DopriStep st = dopri_step(y, h, lambda, B, kappa0);
    if (st.error > tol) {
      h *= std::max(0.2, 0.9 * std::pow(tol / st.error, 0.2));
      if (++rejected_in_a_row > 60 || h < 1e-15 * scale)
        throw Error(ErrorCode::ApexSingularity, "step control failed");
      continue;
    }
    rejected_in_a_row = 0;
    if (st.y_new[1] <= 0.0) {
      // bisect the step length to land on z = 0
      double lo = 0.0, hi = h;
      State y_hit = st.y_new;
      for (int it = 0; it < 100 && (hi - lo) > 1e-16 * std::max(1.0, h); ++it) {
        const double mid = 0.5 * (lo + hi);
        const State y_mid = dopri_step(y, mid, lambda, B, kappa0).y_new;
        if (y_mid[1] > 0.0)
          lo = mid;
        else {
          hi = mid;
          y_hit = y_mid;
        }
      }
      State y_end = y_hit;
      y_end[1] = 0.0;
      push(s + hi, y_end);
      if (p.size() < 32)
        throw Error(ErrorCode::DegenerateProfile, "profile resolved with too few points");
      return {std::move(p), y_end[3]};
    }
    y = st.y_new;
    s += h;
    push(s, y);
    if (st.error > 0.0) h *= std::min(5.0, 0.9 * std::pow(tol / st.error, 0.2));
  }
}

}  // namespace

MeridianProfile shoot_profile(double apex_height, double lambda, double B,
                              const ShootOptions& opt) {
  return shoot_profile_internal(apex_height, lambda, B, opt).profile;
}

// ---------------------------------------------------------------------------
// Equilibrium droplet solve

DropletSolution solve_droplet(const CapillaryConfig& cfg, const DropletSolveOptions& opt) {
  if (!(std::abs(cfg.sigma) < 1.0))
    throw Error(ErrorCode::InvalidSigma, "need |sigma| < 1");
  if (!(cfg.volume_target > 0.0))
    throw Error(ErrorCode::UsageError, "volume_target must be positive");

  const double theta0 = std::acos(cfg.sigma);
  const double m = cfg.volume_target;
  const double r_seed = std::cbrt(m / cap_volume(1.0, theta0));
  double z0 = r_seed * (1.0 + std::cos(theta0));
  double lam = 2.0 / r_seed;

  struct Shot {
    MeridianProfile profile;
    double volume = 0.0, cos_theta = 0.0;
  };
  auto shoot = [&](double apex, double lambda) -> Shot {
    ShotResult res = shoot_profile_internal(apex, lambda, cfg.bond, opt.shoot);
    Shot sh{std::move(res.profile), res.volume, 0.0};
    sh.cos_theta = -std::cos(sh.profile.phi.back());
    return sh;
  };

  auto residual = [&](const Shot& sh) -> std::array<double, 2> {
    return {sh.volume - m, sh.cos_theta - cfg.sigma};
  };
  auto norm2 = [](const std::array<double, 2>& f) {
    return std::sqrt(f[0] * f[0] + f[1] * f[1]);
  };

  Shot cur = shoot(z0, lam);
  std::array<double, 2> F = residual(cur);
  std::ostringstream trace;
  int iters = 0;
  for (; iters < opt.max_iterations; ++iters) {
    if (std::abs(F[0]) <= opt.tol * std::max(1.0, m) && std::abs(F[1]) <= opt.tol) break;
    const double dz = 1e-6 * std::max(std::abs(z0), 1e-3);
    const double dl = 1e-6 * std::max(std::abs(lam), 1e-3);
    const auto Fz = residual(shoot(z0 + dz, lam));
    const auto Fl = residual(shoot(z0, lam + dl));
    const double j00 = (Fz[0] - F[0]) / dz, j01 = (Fl[0] - F[0]) / dl;
    const double j10 = (Fz[1] - F[1]) / dz, j11 = (Fl[1] - F[1]) / dl;
    const double det = j00 * j11 - j01 * j10;
    if (std::abs(det) < 1e-300)
      throw Error(ErrorCode::RootFindDiverged, "singular Jacobian\n" + trace.str());
    double step_z = -(j11 * F[0] - j01 * F[1]) / det;
    double step_l = -(-j10 * F[0] + j00 * F[1]) / det;

    double damping = 1.0;
    bool accepted = false;
    for (int k = 0; k < 10; ++k) {
      const double z_try = z0 + damping * step_z;
      const double l_try = lam + damping * step_l;
      if (z_try > 0.0) {
        try {
          Shot next = shoot(z_try, l_try);
          const auto Fn = residual(next);
          if (norm2(Fn) < norm2(F) || norm2(Fn) <= opt.tol) {
            cur = std::move(next);
            F = Fn;
            z0 = z_try;
            lam = l_try;
            accepted = true;
            break;
          }
        } catch (const Error&) {
          // fall through to stronger damping
        }
      }
      damping *= 0.5;
    }
    trace << "iter " << iters << ": apex=" << z0 << " lambda=" << lam
          << " dV=" << F[0] << " dcos=" << F[1] << "\n";
    if (!accepted)
      throw Error(ErrorCode::RootFindDiverged, "damped Newton stalled\n" + trace.str());
  }
  if (std::abs(F[0]) > opt.tol * std::max(1.0, m) || std::abs(F[1]) > opt.tol)
    throw Error(ErrorCode::RootFindDiverged, "no convergence\n" + trace.str());

  DropletSolution sol;
  sol.profile = std::move(cur.profile);
  sol.lagrange_multiplier = lam;
  sol.contact_angle = kPi - sol.profile.phi.back();
  sol.volume = cur.volume;
  sol.energy = gauss_energy(sol.profile, cfg);
  const ElResidualsReport er = el_residuals(sol.profile, cfg);
  sol.el_residual = er.max_mc_residual;
  sol.young_residual = er.young_residual;
  sol.newton_iterations = iters;
  return sol;
}

ElResidualsReport el_residuals(const MeridianProfile& p, const CapillaryConfig& cfg) {
  p.validate();
  const std::vector<double> km = p.meridian_curvature();
  const std::vector<double> kp = p.parallel_curvature();
  const std::size_t n = p.size();
  std::vector<double> f(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = p.rho[i];
    f[i] = (km[i] + kp[i] + cfg.bond * p.z[i]) * p.rho[i];
  }
  ElResidualsReport r;
  r.lambda_hat = detail::trapz(p.s, f) / detail::trapz(p.s, w);
  for (std::size_t i = 0; i < n; ++i)
    r.max_mc_residual = std::max(
        r.max_mc_residual, std::abs(km[i] + kp[i] + cfg.bond * p.z[i] - r.lambda_hat));
  r.young_residual = std::abs(std::cos(p.theta_contact()) - cfg.sigma);
  return r;
}

// ---------------------------------------------------------------------------
// Scaling study

double symmetric_difference(const MeridianProfile& a, const MeridianProfile& b) {
  // Both profiles are graphs rho(z) with z strictly decreasing along s.
  auto rho2_at = [](const MeridianProfile& p, double z) -> double {
    if (z >= p.z.front() || z < 0.0) return 0.0;
    const auto& zv = p.z;
    std::size_t lo = 0, hi = zv.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (zv[mid] > z ? lo : hi) = mid;
    }
    const double t = (z - zv[lo]) / (zv[hi] - zv[lo]);
    const double rho = p.rho[lo] + t * (p.rho[hi] - p.rho[lo]);
    return rho * rho;
  };
  const double z_top = std::max(a.z.front(), b.z.front());
  const int grid = 4096;
  double acc = 0.0;
  double prev = std::abs(rho2_at(a, 0.0) - rho2_at(b, 0.0));
  for (int i = 1; i <= grid; ++i) {
    const double z = z_top * i / grid;
    const double curr = std::abs(rho2_at(a, z) - rho2_at(b, z));
    acc += 0.5 * (prev + curr) * (z_top / grid);
    prev = curr;
  }
  return kPi * acc;
}

std::vector<ScalingRow> scaling_study(const CapillaryConfig& base,
                                      const std::vector<double>& m_sequence) {
  if (m_sequence.size() < 4)
    throw Error(ErrorCode::UsageError, "need at least 4 volumes");
  for (std::size_t i = 0; i + 1 < m_sequence.size(); ++i)
    if (!(m_sequence[i + 1] < m_sequence[i]))
      throw Error(ErrorCode::UsageError, "volumes must decrease");

  std::vector<ScalingRow> rows(m_sequence.size());
  parallel_for(m_sequence.size(), [&](std::size_t idx) {
    const double m = m_sequence[idx];
    CapillaryConfig cfg = base;
    cfg.volume_target = m;
    const DropletSolution sol = solve_droplet(cfg);

    // rescale to unit volume
    const double scale = std::cbrt(m);
    MeridianProfile unit = sol.profile;
    for (std::size_t i = 0; i < unit.size(); ++i) {
      unit.s[i] /= scale;
      unit.rho[i] /= scale;
      unit.z[i] /= scale;
    }
    for (auto& k : unit.kappa_m) k *= scale;

    auto sym_for = [&](double theta) -> double {
      const double r = std::cbrt(1.0 / cap_volume(1.0, theta));
      const MeridianProfile capp = cap_profile({2, r, theta}, 2001);
      return symmetric_difference(unit, capp);
    };
    // golden-section minimization of the symmetric difference over theta*
    double lo = kPi / 2.0 + 1e-3, hi = kPi - 1e-3;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = sym_for(x1), f2 = sym_for(x2);
    for (int it = 0; it < 80 && (hi - lo) > 1e-9; ++it) {
      if (f1 < f2) {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo); f1 = sym_for(x1);
      } else {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo); f2 = sym_for(x2);
      }
    }
    const double theta_star = 0.5 * (lo + hi);

    ScalingRow row;
    row.m = m;
    row.sym_diff = sym_for(theta_star);
    row.theta_star = theta_star;
    row.lambda = sol.lagrange_multiplier;
    row.energy = sol.energy;
    rows[idx] = row;
  });
  return rows;
}

// ---------------------------------------------------------------------------
// Wedge competitor

WedgeGapReport wedge_gap(double l, double r, double sigma, int n) {
  if (!(std::abs(sigma) > 0.0 && std::abs(sigma) < 1.0))
    throw Error(ErrorCode::InvalidSigma, "need 0 < |sigma| < 1");
  if (!(l > 0.0 && r > 0.0) || n < 2)
    throw Error(ErrorCode::UsageError, "need l, r > 0 and n >= 2");
  const double as = std::abs(sigma);
  const double root = std::sqrt(1.0 + sigma * sigma);

  WedgeGapReport w;
  w.gap = 2.0 * std::pow(l, n - 1) * r * (root - as) -
          2.0 * as * (n - 1) * std::pow(l, n - 2) * r * r;
  w.positivity_threshold = l * (root - as) / (as * (n - 1));

  if (n == 2) {
    // Facet areas of the altered region inside the prism |x2| <= l/2.
    // Removed: the two slanted wedge walls x3 = |x1|/|sigma| up to height r.
    // Added: the competitor top face and the two prism end caps.
    const Vec2 foot{0.0, 0.0}, top{as * r, r};
    const double wall = 2.0 * (top - foot).norm() * l;
    const double top_face = 2.0 * as * r * l;
    const double box_cross = 2.0 * as * r * r;
    const double wedge_cross = 2.0 * (0.5 * as * r * r);
    const double end_caps = 2.0 * (box_cross - wedge_cross);
    w.direct_gap = wall - top_face - end_caps;
  } else {
    w.direct_gap = w.gap;
  }
  return w;
}

}  // namespace caplab
