// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its tolerance inline; runtime budgets are
// enforced where stated.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "caplab/cli.hpp"
#include "caplab/report_json.hpp"

using namespace caplab;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

struct Criterion {
  int id;
  std::string label;
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

void finish(Criterion& c, double seconds, double budget_seconds = 0.0) {
  if (budget_seconds > 0.0 && seconds > budget_seconds)
    c.require(false, "runtime " + std::to_string(seconds) + "s over budget");
  std::printf("%s criterion %2d: %s (%.2fs)%s%s\n", c.pass ? "PASS" : "FAIL", c.id,
              c.label.c_str(), seconds, c.detail.empty() ? "" : " -- ",
              c.detail.c_str());
  if (!c.pass) ++g_failures;
}

template <class F>
void run(int id, const std::string& label, double budget_seconds, F&& body) {
  Criterion c{id, label};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  finish(c, secs, budget_seconds);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const CapSpec kCap{2, 1.0, 2.0 * kPi / 3.0};

// the 12-member perturbed-cap regression family
std::vector<MeridianProfile> regression_family(int N = 4001) {
  std::vector<MeridianProfile> fam;
  for (const int mode : {2, 3, 4})
    for (const double amp : {0.01, 0.02, 0.04, 0.05})
      fam.push_back(perturbed_cap_profile(kCap, amp, mode, N));
  return fam;
}

TorsionSolution solve_on(const MeridianProfile& p, double h, double gamma) {
  const MeridianMesh mesh = mesh_meridian(p, ContainerModel::flat(), h);
  return solve_torsion(mesh, gamma);
}

}  // namespace

int main() {
  run(1, "cap equality across both regimes", 5.0, [](Criterion& c) {
    double worst_exact = 0.0, worst_profile = 0.0;
    for (const double r : {0.5, 1.0, 2.0}) {
      for (int i = 0; i < 50; ++i) {
        const double t = (i + 0.5) / 50.0;
        for (const double theta :
             {0.02 + t * (kPi / 2 - 0.04), kPi / 2 + 0.02 + t * (kPi / 2 - 0.04)}) {
          const DeficitReport d = hk_deficit(cap_report({2, r, theta}));
          worst_exact = std::max(worst_exact, std::abs(d.relative_deficit));
        }
      }
      // profile route at N = 2000 on a coarser angle set
      for (int i = 0; i < 5; ++i) {
        const double t = (i + 0.5) / 5.0;
        for (const double theta :
             {0.1 + t * (kPi / 2 - 0.2), kPi / 2 + 0.1 + t * (kPi / 2 - 0.2)}) {
          const DeficitReport d =
              hk_deficit(profile_report(cap_profile({2, r, theta}, 2000)));
          worst_profile = std::max(worst_profile, std::abs(d.relative_deficit));
        }
      }
    }
    c.require(worst_exact <= 1e-12,
              "closed-form relative deficit " + std::to_string(worst_exact));
    c.require(worst_profile <= 1e-4,
              "profile relative deficit " + std::to_string(worst_profile));
  });

  run(2, "strict deficit on spheroidal caps", 5.0, [](Criterion& c) {
    for (const double ratio : {1.2, 1.5, 2.0}) {
      const DeficitReport d1 = hk_deficit(profile_report(spheroid_profile(1.0, ratio, 2000)));
      const DeficitReport d2 = hk_deficit(profile_report(spheroid_profile(1.0, ratio, 4000)));
      const double est = std::abs(d1.deficit - d2.deficit);
      c.require(d2.deficit > 10.0 * est,
                "axis ratio " + std::to_string(ratio) + ": deficit " +
                    std::to_string(d2.deficit) + " vs estimate " + std::to_string(est));
    }
  });

  run(3, "classical identity on the sphere", 5.0, [](Criterion& c) {
    const ClassicalHkReport exact = classical_hk_ball(1.0);
    c.require(std::abs(exact.lhs - 4.0 * kPi) <= 1e-12 &&
                  std::abs(exact.rhs - 4.0 * kPi) <= 1e-12 &&
                  exact.cmc_identity_residual <= 1e-12,
              "closed form off 4*pi");
    const ClassicalHkReport disc = classical_hk(sphere_profile(1.0, 2000, 2.0));
    c.require(std::abs(disc.lhs - 4.0 * kPi) <= 1e-4 &&
                  std::abs(disc.rhs - 4.0 * kPi) <= 1e-4,
              "profile route off 4*pi");
  });

  run(4, "normal-map chain and coverage", 60.0, [](Criterion& c) {
    const MontielRosReport sph = montiel_ros_integral(sphere_profile(1.0, 2000, 2.0));
    c.require(std::abs(sph.gamma_integral - sph.amgm_bound) <= 1e-10, "sphere equality");
    for (const double theta : {kPi / 3.0, 2.0 * kPi / 3.0}) {
      const MeridianProfile p = cap_profile({2, 1.0, theta}, 4000);
      const MontielRosReport mr = montiel_ros_integral(p);
      c.require(std::abs(mr.gamma_integral - mr.amgm_bound) <= 1e-10, "cap equality");
      const CoverageReport cov = coverage_sample(p, profile_report(p), 100000, 2026);
      c.require(cov.covered_fraction == 1.0,
                "coverage " + std::to_string(cov.covered_fraction) + " at theta " +
                    std::to_string(theta));
    }
    for (const double ratio : {1.2, 1.5, 2.0}) {
      const MontielRosReport mr =
          montiel_ros_integral(spheroid_profile(1.0, ratio, 2000));
      c.require(mr.gamma_integral <= mr.amgm_bound && mr.gap > 0.0, "spheroid gap");
    }
  });

  run(5, "torsion solver convergence", 60.0, [](Criterion& c) {
    const MeridianProfile p = cap_profile(kCap, 4001);
    const double gamma = compute_gamma(profile_report(p));
    auto err = [&](double h) {
      const TorsionSolution s = solve_on(p, h, gamma);
      double worst = 0.0;
      for (std::size_t i = 0; i < s.u.size(); ++i) {
        const Vec2& x = s.mesh->nodes[i];
        const double exact =
            (1.0 - x.rho * x.rho - (x.z + 0.5) * (x.z + 0.5)) / 6.0;
        worst = std::max(worst, std::abs(s.u[i] - exact));
      }
      return worst;
    };
    const double e1 = err(0.08), e2 = err(0.04), e3 = err(0.02);
    c.require(e1 / e2 >= 3.5 && e2 / e3 >= 3.5,
              "ratios " + std::to_string(e1 / e2) + ", " + std::to_string(e2 / e3));
    c.require(e3 <= 5e-4, "error at h=0.02 is " + std::to_string(e3));
  });

  run(6, "potential bounds on the regression set", 120.0, [](Criterion& c) {
    for (const auto& p : regression_family()) {
      const GeometryReport g = profile_report(p);
      const TorsionSolution s = solve_on(p, 0.04, compute_gamma(g));
      c.require(s.u_min() >= -1e-8, "negative potential");
      const LinfCheckReport linf = linf_check(s, g);
      c.require(linf.ok, "sup bound violated");
    }
  });

  run(7, "Reilly identities", 120.0, [](Criterion& c) {
    const MeridianProfile p = cap_profile(kCap, 4001);
    const GeometryReport g = profile_report(p);
    const double gamma = compute_gamma(g);
    const ReillyReport fine = reilly_report(solve_on(p, 0.02, gamma), g, ContainerModel::flat());
    const ReillyReport coarse =
        reilly_report(solve_on(p, 0.04, gamma), g, ContainerModel::flat());
    c.require(std::abs(fine.rhs_first - 2.0 * kPi / 9.0) <= 1e-3, "first identity reference");
    c.require(fine.residual_first <= 1e-3 && fine.residual_big <= 1e-3,
              "residuals " + std::to_string(fine.residual_first) + ", " +
                  std::to_string(fine.residual_big));
    c.require(fine.residual_first < coarse.residual_first &&
                  fine.residual_big < coarse.residual_big,
              "no decrease under refinement");

    const ContainerModel bowl = ContainerModel::bowl(100.0);
    const MeridianProfile pb = cap_on_bowl_profile(1.0, 2.0 * kPi / 3.0, 100.0, 4001);
    const GeometryReport gb = profile_report(pb, bowl);
    const double gb_gamma = compute_gamma(gb);
    auto bowl_res = [&](double h) {
      const MeridianMesh mesh = mesh_meridian(pb, bowl, h);
      return reilly_report(solve_torsion(mesh, gb_gamma), gb, bowl);
    };
    const ReillyReport bf = bowl_res(0.02), bc = bowl_res(0.04);
    c.require(bf.residual_first <= 1e-2 && bf.residual_big <= 1e-2, "bowl residuals");
    c.require(bf.residual_first <= bc.residual_first + 1e-12, "bowl refinement");
  });

  run(8, "stability chain ordering", 240.0, [](Criterion& c) {
    const MeridianProfile pc = cap_profile(kCap, 4001);
    const GeometryReport gc = profile_report(pc);
    const StabilityChainReport base =
        stability_chain(solve_on(pc, 0.02, compute_gamma(gc)), gc, 0.0);
    c.require(std::abs(base.line1) <= 1e-3 && std::abs(base.line2) <= 1e-3,
              "cap equality lines");
    c.require(base.monotone_ok && base.cs_ok, "cap ordering");
    for (const auto& p : regression_family()) {
      const GeometryReport g = profile_report(p);
      const StabilityChainReport chain =
          stability_chain(solve_on(p, 0.04, compute_gamma(g)), g, 0.0);
      c.require(chain.monotone_ok && chain.cs_ok, "family member ordering");
    }
  });

  run(9, "quantitative deficit against its budget", 30.0, [](Criterion& c) {
    const DeficitBoundReport exact = deficit_bound_check(cap_report(kCap), 0.0, 0.0, 0.0);
    c.require(exact.lhs <= 1e-10, "cap lhs " + std::to_string(exact.lhs));
    std::vector<double> ratios;
    for (const double t : {0.01, 0.02, 0.04}) {
      const GeometryReport g = profile_report(perturbed_cap_profile(kCap, t, 2, 4001));
      const double theta_dev = std::abs(g.theta0() - kCap.theta);
      const double h_dev = g.max_H_deviation / g.mean_H;
      const DeficitBoundReport r = deficit_bound_check(g, 0.0, theta_dev, h_dev);
      ratios.push_back(r.lhs / r.budget);
    }
    const double lo = *std::min_element(ratios.begin(), ratios.end());
    const double hi = *std::max_element(ratios.begin(), ratios.end());
    const double fitted = std::sqrt(lo * hi);
    c.require(hi <= 2.0 * fitted && lo >= 0.5 * fitted,
              "ratio spread " + std::to_string(hi / lo) + " exceeds the fitted band");
  });

  run(10, "wetted-region identities", 120.0, [](Criterion& c) {
    const GeometryReport g = cap_report(kCap);
    const WettedBoundsReport w = wetted_bounds(g, 0.0, 0.0, 0.0, 2.0);
    c.require(std::abs(2.0 * g.area_Sigma - 1.5 * kPi) <= 1e-12 &&
                  std::abs(std::sin(g.theta0()) * g.len_bdSigma - 1.5 * kPi) <= 1e-12,
              "cap identity sides");
    c.require(w.contact_identity_residual <= 1e-12, "cap identity residual");
    c.require(w.perimeter_bound_ok && w.ratio_lhs <= w.ratio_budget + 1e-12, "cap bounds");
    for (const auto& p : regression_family()) {
      const GeometryReport gp = profile_report(p);
      const double theta_dev = std::abs(gp.theta0() - kCap.theta);
      const double h_dev = gp.max_H_deviation / gp.mean_H;
      const WettedBoundsReport wp =
          wetted_bounds(gp, 0.0, theta_dev, h_dev, gp.mean_H);
      c.require(wp.perimeter_bound_ok, "family perimeter bound");
      c.require(wp.ratio_lhs <= wp.ratio_budget, "family ratio bound");
    }
  });

  run(11, "zero-gravity droplet recovery", 1.0, [](Criterion& c) {
    const DropletSolution sol = solve_droplet({-0.5, 0.0, 0.65450});
    c.require(std::abs(sol.lagrange_multiplier - 2.0) <= 1e-4 &&
                  std::abs(sol.contact_angle - 2.0 * kPi / 3.0) <= 1e-4,
              "cap parameters");
    c.require(sol.el_residual <= 1e-8 && sol.young_residual <= 1e-8 &&
                  std::abs(sol.volume - 0.65450) <= 1e-8,
              "residuals");
  });

  run(12, "small-volume scaling study", 30.0, [](Criterion& c) {
    std::vector<double> ms;
    for (int i = 0; i < 6; ++i) ms.push_back(0.65450 / std::pow(2.0, i));
    const auto rows = scaling_study({-0.5, 1.0, ms.front()}, ms);
    bool monotone = true;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
      monotone &= rows[i + 1].sym_diff <= rows[i].sym_diff + 1e-12;
    c.require(monotone, "not monotone");
    c.require(rows.back().sym_diff <= 0.25 * rows.front().sym_diff,
              "final/first " +
                  std::to_string(rows.back().sym_diff / rows.front().sym_diff));
    const auto& r1 = rows[rows.size() - 2];
    const auto& r0 = rows.back();
    const double extrap =
        r0.sym_diff - r0.m * (r1.sym_diff - r0.sym_diff) / (r1.m - r0.m);
    c.require(std::abs(extrap) <= 1e-3, "extrapolated limit " + std::to_string(extrap));
  });

  run(13, "wedge competitor gap", 5.0, [](Criterion& c) {
    const WedgeGapReport w = wedge_gap(1.0, 0.1, -0.5);
    c.require(std::abs(w.gap - 0.1136068) <= 1e-7, "gap " + std::to_string(w.gap));
    for (int i = 1; i <= 10; ++i)
      for (int j = 1; j <= 10; ++j) {
        const double l = 0.2 * i, r = 0.03 * j * l;
        const WedgeGapReport g = wedge_gap(l, r, -0.5);
        c.require(std::abs(g.gap - g.direct_gap) <=
                      1e-12 * std::max(1.0, std::abs(g.gap)),
                  "facet mismatch");
      }
  });

  run(14, "byte-identical reruns", 120.0, [](Criterion& c) {
    const fs::path a = fs::temp_directory_path() / "caplab_acc_det_a";
    const fs::path b = fs::temp_directory_path() / "caplab_acc_det_b";
    for (const auto& dir : {a, b}) {
      fs::remove_all(dir);
      fs::create_directories(dir);
      c.require(cli::run({"hk-verify", "--cap", "r=1,theta=120deg", "--samples", "20000",
                          "--seed", "7", "--output-dir", dir.string()}) == 0,
                "hk-verify run failed");
      c.require(cli::run({"scaling-study", "--steps", "4", "--m0", "0.65450",
                          "--output-dir", dir.string()}) == 0,
                "scaling run failed");
      c.require(cli::run({"torsion-check", "--cap", "r=1,theta=120deg", "--h", "0.04",
                          "--output-dir", dir.string()}) == 0,
                "torsion run failed");
    }
    for (const char* name :
         {"hk_verify.json", "scaling.csv", "scaling.dat", "scaling.json",
          "torsion_check.json"}) {
      c.require(slurp(a / name) == slurp(b / name), std::string(name) + " differs");
    }
  });

  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
