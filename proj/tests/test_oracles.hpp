#pragma once

// Independent quadrature oracles for the exact-value tests. These integrate
// parametric curves directly with composite Simpson and never touch the
// library's report pipeline, so they can vouch for it.

#include <cmath>
#include <functional>

namespace oracle {

inline constexpr double pi = 3.141592653589793238462643383279502884;

inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals = 4096) {
  if (intervals % 2) ++intervals;
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

// Spherical cap Omega = {z > 0} cut from the ball of radius r centered at
// (0, r cos(theta)); parametrized by the polar angle beta in [0, pi - theta].
struct Cap {
  double r, theta;

  double beta_max() const { return pi - theta; }
  double center_z() const { return r * std::cos(theta); }
  double contact_radius() const { return r * std::sin(theta); }

  double area_M() const {
    return simpson([&](double b) { return 2.0 * pi * r * std::sin(b) * r; }, 0.0,
                   beta_max());
  }
  // Disk slices over height, independent of the surface parametrization.
  double volume() const {
    const double z0 = center_z();
    return simpson(
        [&](double z) {
          const double rho2 = r * r - (z - z0) * (z - z0);
          return rho2 > 0.0 ? pi * rho2 : 0.0;
        },
        0.0, z0 + r);
  }
  double area_Sigma() const { return pi * contact_radius() * contact_radius(); }
  double len_bdSigma() const { return 2.0 * pi * contact_radius(); }
  double int_n_over_H() const {
    // both principal curvatures are 1/r
    return simpson(
        [&](double b) { return (2.0 / (2.0 / r)) * 2.0 * pi * r * std::sin(b) * r; }, 0.0,
        beta_max());
  }
  double lambda_volume() const {
    const double a = contact_radius();
    const double slope = std::abs(std::cos(theta) / std::sin(theta));
    return simpson([&](double rho) { return 2.0 * pi * rho * (a - rho) * slope; }, 0.0, a);
  }
  double gamma() const {
    return -(2.0 / 3.0) * area_Sigma() / (std::tan(theta) * len_bdSigma());
  }
};

// Spheroid rho = a sin(tau), z = zc + c cos(tau), truncated at z = 0
// (tau_end = acos(-zc/c)); closed when tau_end = pi.
struct Spheroid {
  double a, c, zc = 0.0;
  bool closed = false;

  double tau_end() const { return closed ? pi : std::acos(-zc / c); }
  double speed(double t) const { return std::hypot(a * std::cos(t), c * std::sin(t)); }
  double kappa_m(double t) const {
    const double g = speed(t);
    return a * c / (g * g * g);
  }
  double kappa_p(double t) const { return c / (a * speed(t)); }

  double area_M() const {
    return simpson([&](double t) { return 2.0 * pi * a * std::sin(t) * speed(t); }, 0.0,
                   tau_end());
  }
  double volume() const {
    // disk slices between the apex and the cut plane
    return simpson(
        [&](double t) {
          const double rho = a * std::sin(t);
          return pi * rho * rho * c * std::sin(t);
        },
        0.0, tau_end());
  }
  double int_n_over_H() const {
    return simpson(
        [&](double t) {
          return 2.0 / (kappa_m(t) + kappa_p(t)) * 2.0 * pi * a * std::sin(t) * speed(t);
        },
        0.0, tau_end());
  }
  double montiel_ros_integral() const {
    return simpson(
        [&](double t) {
          const double k1 = std::min(kappa_m(t), kappa_p(t));
          const double k2 = std::max(kappa_m(t), kappa_p(t));
          const double T = 1.0 / k2;
          const double inner = T - 0.5 * (k1 + k2) * T * T + k1 * k2 * T * T * T / 3.0;
          return inner * 2.0 * pi * a * std::sin(t) * speed(t);
        },
        0.0, tau_end());
  }
};

// Richardson error estimate |f_N - f_2N| and convergence ratio between
// successive refinements.
inline double richardson_ratio(double coarse, double mid, double fine) {
  return std::abs(coarse - mid) / std::max(1e-300, std::abs(mid - fine));
}

}  // namespace oracle
