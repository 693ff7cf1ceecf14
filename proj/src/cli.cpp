#include "caplab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "caplab/parallel.hpp"
#include "caplab/report_json.hpp"

namespace caplab::cli {

namespace {

namespace fs = std::filesystem;

double parse_angle(std::string text) {
  double factor = 1.0;
  if (text.size() > 3 && text.substr(text.size() - 3) == "deg") {
    factor = kPi / 180.0;
    text = text.substr(0, text.size() - 3);
  } else if (text.size() > 3 && text.substr(text.size() - 3) == "rad") {
    text = text.substr(0, text.size() - 3);
  }
  std::size_t pos = 0;
  const double v = std::stod(text, &pos);
  if (pos != text.size()) throw Error(ErrorCode::UsageError, "bad angle: " + text);
  return v * factor;
}

CapSpec parse_cap(const std::string& text) {
  CapSpec cap;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(start, end - start);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::UsageError, "expected key=value in cap spec: " + item);
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    if (key == "r")
      cap.r = std::stod(val);
    else if (key == "theta")
      cap.theta = parse_angle(val);
    else if (key == "n")
      cap.n = std::stoi(val);
    else
      throw Error(ErrorCode::UsageError, "unknown cap field: " + key);
    start = end + 1;
  }
  return cap;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  f << text;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CommonOpts {
  std::string output_dir = ".";
  std::uint64_t seed = 12345;
  std::string config_path;
};

void add_common(CLI::App* sub, CommonOpts& c) {
  sub->set_help_flag("--help", "print help and exit");
  sub->add_option("--output-dir", c.output_dir, "directory for CSV/JSON outputs");
  sub->add_option("--seed", c.seed, "root seed for sampled checks");
  sub->add_option("--config", c.config_path, "JSON config overriding flags");
}

// Config values override flags: re-feed them to the parser after the
// command-line tokens (last one wins for scalar options).
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open config " + path);
  json j;
  f >> j;
  if (!j.is_object()) throw Error(ErrorCode::UsageError, "config must be a JSON object");
  std::vector<std::string> args;
  for (const auto& [key, value] : j.items()) {
    args.push_back("--" + key);
    if (value.is_string())
      args.push_back(value.get<std::string>());
    else if (value.is_boolean()) {
      if (!value.get<bool>()) args.pop_back();
    } else
      args.push_back(value.dump());
  }
  return args;
}

MeridianProfile geometry_input(const std::string& cap_text, const std::string& profile_path,
                               int n_profile) {
  if (!cap_text.empty()) return cap_profile(parse_cap(cap_text), n_profile);
  if (!profile_path.empty()) return load_profile_csv(profile_path);
  throw Error(ErrorCode::UsageError, "provide --cap or --profile");
}

// ---------------------------------------------------------------------------

int cmd_calibrate(const CommonOpts& c, int angles_per_regime, const std::string& out_name) {
  struct Case {
    double r, theta;
  };
  std::vector<Case> cases;
  const std::array<double, 3> radii = {0.5, 1.0, 2.0};
  for (const double r : radii) {
    for (int i = 0; i < angles_per_regime; ++i) {
      const double t = (i + 0.5) / angles_per_regime;
      cases.push_back({r, 0.02 + t * (kPi / 2.0 - 0.04)});
      cases.push_back({r, kPi / 2.0 + 0.02 + t * (kPi / 2.0 - 0.04)});
    }
  }

  struct Row {
    double r, theta, rel_deficit, gamma_identity, contact_identity;
  };
  std::vector<Row> rows(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const GeometryReport g = cap_report({2, cases[i].r, cases[i].theta});
    const DeficitReport d = hk_deficit(g);
    const double gi = std::abs(g.gamma * g.area_Sigma + g.signed_lambda_volume()) /
                      std::max(1e-300, g.lambda_volume);
    const double lam = 2.0 / cases[i].r;
    const double ci = std::abs(lam * g.area_Sigma - std::sin(g.theta0()) * g.len_bdSigma) /
                      (lam * g.area_Sigma);
    rows[i] = {cases[i].r, cases[i].theta, std::abs(d.relative_deficit), gi, ci};
  });

  // conormal decomposition on a sample of cap-discretized profiles
  double max_conormal = 0.0;
  for (const double theta : {0.3, 1.0, 2.0, 2.8}) {
    const MeridianProfile p = cap_profile({2, 1.0, theta}, 512);
    const Vec2 nu_M = p.normal(p.size() - 1);
    const Vec2 expect{std::sin(theta) * 1.0, -std::cos(theta)};
    max_conormal = std::max(max_conormal, (nu_M - expect).norm());
  }

  double max_rel = 0.0, max_gi = 0.0, max_ci = 0.0;
  for (const auto& r : rows) {
    max_rel = std::max(max_rel, r.rel_deficit);
    max_gi = std::max(max_gi, r.gamma_identity);
    max_ci = std::max(max_ci, r.contact_identity);
  }
  const bool pass = max_rel <= 1e-12 && max_gi <= 1e-12 && max_ci <= 1e-12 &&
                    max_conormal <= 1e-10;

  json out;
  out["cases"] = rows.size();
  out["max_relative_deficit"] = max_rel;
  out["max_gamma_identity_residual"] = max_gi;
  out["max_contact_identity_residual"] = max_ci;
  out["max_conormal_residual"] = max_conormal;
  out["pass"] = pass;
  out["seed"] = c.seed;
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / (out_name + ".json")).string());

  std::string dat = "# r theta relative_deficit gamma_identity contact_identity\n";
  for (const auto& r : rows)
    dat += fmt(r.r) + " " + fmt(r.theta) + " " + fmt(r.rel_deficit) + " " +
           fmt(r.gamma_identity) + " " + fmt(r.contact_identity) + "\n";
  write_text((fs::path(c.output_dir) / (out_name + ".dat")).string(), dat);
  return pass ? 0 : 2;
}

int cmd_hk_verify(const CommonOpts& c, const std::string& cap_text,
                  const std::string& profile_path, int n_profile, long samples,
                  double tolerance) {
  json out;
  bool violation = false;

  GeometryReport g;
  MeridianProfile p = geometry_input(cap_text, profile_path, n_profile);
  if (!cap_text.empty()) {
    g = cap_report(parse_cap(cap_text));
    const GeometryReport gp = profile_report(p);
    out["geometry_closed_form"] = to_json(g);
    out["geometry_profile"] = to_json(gp);
    const DeficitReport d_exact = hk_deficit(g);
    const DeficitReport d_prof = hk_deficit(gp);
    out["deficit"] = to_json(d_exact);
    out["deficit_profile"] = to_json(d_prof);
    violation |= std::abs(d_exact.relative_deficit) > 1e-12;
    violation |= d_prof.relative_deficit < -tolerance;
  } else {
    g = profile_report(p);
    out["geometry"] = to_json(g);
    const DeficitReport d = hk_deficit(g);
    out["deficit"] = to_json(d);
    violation |= d.relative_deficit < -tolerance;
  }

  const MontielRosReport mr = montiel_ros_integral(p);
  out["montiel_ros"] = to_json(mr);
  violation |= mr.gamma_integral > mr.amgm_bound + 1e-12 * mr.amgm_bound;

  if (samples > 0) {
    const GeometryReport gp = profile_report(p);
    const CoverageReport cov = coverage_sample(p, gp, samples, c.seed);
    out["coverage"] = to_json(cov);
    if (!cov.violations.empty()) {
      save_violations_csv(cov.violations,
                          (fs::path(c.output_dir) / "coverage_violations.csv").string());
      violation = true;
    }
  }
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / "hk_verify.json").string());
  return violation ? 2 : 0;
}

int cmd_torsion_check(const CommonOpts& c, const std::string& cap_text,
                      const std::string& profile_path, double h, double bowl_radius,
                      double tolerance, bool allow_hydrophobic, bool export_fields) {
  const ContainerModel container =
      bowl_radius > 0.0 ? ContainerModel::bowl(bowl_radius) : ContainerModel::flat();
  MeridianProfile p;
  if (!cap_text.empty() && bowl_radius > 0.0) {
    const CapSpec cap = parse_cap(cap_text);
    p = cap_on_bowl_profile(cap.r, cap.theta, bowl_radius, 4001);
  } else {
    p = geometry_input(cap_text, profile_path, 4001);
  }
  const GeometryReport g = profile_report(p, container);
  const double gamma = compute_gamma(g);
  const MeridianMesh mesh = mesh_meridian(p, container, h);
  TorsionSolveOptions sopt;
  sopt.allow_hydrophobic_override = allow_hydrophobic;
  const TorsionSolution sol = solve_torsion(mesh, gamma, sopt);
  const double eps = flatness_metrics(container, p.contact_radius());

  json out;
  out["geometry"] = to_json(g);
  out["gamma"] = gamma;
  out["epsilon_flatness"] = eps;
  out["mesh"] = {{"nodes", mesh.num_nodes()},
                 {"elements", mesh.num_elements()},
                 {"h", mesh.h},
                 {"min_area", mesh.min_area}};
  out["solve"] = {{"residual_linear_solve", sol.residual_linear_solve},
                  {"cg_iterations", sol.cg_iterations},
                  {"u_min", sol.u_min()},
                  {"u_max", sol.u_max()},
                  {"non_conforming", sol.non_conforming}};
  const LinfCheckReport linf = linf_check(sol, g);
  out["linf_check"] = to_json(linf);
  const ReillyReport reilly = reilly_report(sol, g, container);
  out["reilly"] = to_json(reilly);
  out["hessian_deficit"] = hessian_deficit(sol);
  const SubstrateTermBoundReport stb = substrate_term_bound(sol, g, eps);
  out["substrate_term_bound"] = to_json(stb);
  bool violation = !linf.ok || reilly.residual_first > tolerance ||
                   reilly.residual_big > tolerance || !stb.ok;
  if (!sol.non_conforming) {
    violation |= sol.u_min() < -1e-8;
    const StabilityChainReport chain = stability_chain(sol, g, eps);
    out["stability_chain"] = to_json(chain);
    violation |= !chain.monotone_ok || !chain.cs_ok;
  }

  if (export_fields) {
    save_mesh_csv(mesh, (fs::path(c.output_dir) / "mesh_nodes.csv").string(),
                  (fs::path(c.output_dir) / "mesh_elements.csv").string(),
                  (fs::path(c.output_dir) / "mesh_tags.csv").string());
    save_solution_csv(sol, (fs::path(c.output_dir) / "torsion_solution.csv").string());
  }
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / "torsion_check.json").string());
  return violation ? 2 : 0;
}

int cmd_droplet(const CommonOpts& c, double sigma, double bond, double volume, double tol) {
  CapillaryConfig cfg{sigma, bond, volume};
  DropletSolveOptions opt;
  opt.tol = std::min(tol, 1e-9);
  const DropletSolution sol = solve_droplet(cfg, opt);
  json out;
  out["config"] = {{"sigma", sigma}, {"bond", bond}, {"volume_target", volume}};
  out["solution"] = to_json(sol);
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / "droplet.json").string());
  save_profile_csv(sol.profile, (fs::path(c.output_dir) / "droplet_profile.csv").string());
  const bool violation = sol.el_residual > tol || sol.young_residual > tol ||
                         std::abs(sol.volume - volume) > tol * std::max(1.0, volume);
  return violation ? 2 : 0;
}

int cmd_scaling_study(const CommonOpts& c, double sigma, double bond, double m0, int steps) {
  CapillaryConfig base{sigma, bond, m0};
  std::vector<double> ms;
  for (int i = 0; i < steps; ++i) ms.push_back(m0 / std::pow(2.0, i));
  const std::vector<ScalingRow> rows = scaling_study(base, ms);

  std::string csv = "m,sym_diff,theta_star,lambda,energy\n";
  std::string dat = "# m sym_diff theta_star lambda energy\n";
  for (const auto& r : rows) {
    csv += fmt(r.m) + "," + fmt(r.sym_diff) + "," + fmt(r.theta_star) + "," +
           fmt(r.lambda) + "," + fmt(r.energy) + "\n";
    dat += fmt(r.m) + " " + fmt(r.sym_diff) + " " + fmt(r.theta_star) + " " +
           fmt(r.lambda) + " " + fmt(r.energy) + "\n";
  }
  write_text((fs::path(c.output_dir) / "scaling.csv").string(), csv);
  write_text((fs::path(c.output_dir) / "scaling.dat").string(), dat);

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i)
    monotone &= rows[i + 1].sym_diff <= rows[i].sym_diff + 1e-12;
  const auto& r1 = rows[rows.size() - 2];
  const auto& r0 = rows.back();
  const double extrap =
      r0.sym_diff - r0.m * (r1.sym_diff - r0.sym_diff) / (r1.m - r0.m);

  json out;
  out["rows"] = to_json(rows);
  out["monotone_nonincreasing"] = monotone;
  out["extrapolated_limit"] = extrap;
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / "scaling.json").string());
  return monotone ? 0 : 2;
}

int cmd_wedge(const CommonOpts& c, double l, double r, double sigma, int n) {
  const WedgeGapReport w = wedge_gap(l, r, sigma, n);
  json out;
  out["l"] = l;
  out["r"] = r;
  out["sigma"] = sigma;
  out["n"] = n;
  out["result"] = to_json(w);
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / "wedge.json").string());
  const bool violation = std::abs(w.gap - w.direct_gap) > 1e-12 * std::max(1.0, std::abs(w.gap));
  return violation ? 2 : 0;
}

int cmd_report(const CommonOpts& c, const std::string& cap_text,
               const std::string& profile_path, double h, long samples) {
  const MeridianProfile p = geometry_input(cap_text, profile_path, 4001);
  const GeometryReport g = profile_report(p);
  json out;
  out["geometry"] = to_json(g);
  out["deficit"] = to_json(hk_deficit(g));
  out["montiel_ros"] = to_json(montiel_ros_integral(p));
  if (samples > 0 && g.regime)
    out["coverage"] = to_json(coverage_sample(p, g, samples, c.seed));
  if (g.regime && *g.regime == Regime::Hydrophilic && h > 0.0) {
    const ContainerModel flat = ContainerModel::flat();
    const double gamma = compute_gamma(g);
    const MeridianMesh mesh = mesh_meridian(p, flat, h);
    const TorsionSolution sol = solve_torsion(mesh, gamma);
    out["gamma"] = gamma;
    out["linf_check"] = to_json(linf_check(sol, g));
    out["reilly"] = to_json(reilly_report(sol, g, flat));
    out["hessian_deficit"] = hessian_deficit(sol);
    out["stability_chain"] = to_json(stability_chain(sol, g, 0.0));
  }
  out["conventions"] = convention_ledger();
  write_json_file(out, (fs::path(c.output_dir) / "report.json").string());
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"axisymmetric droplet workbench: deficit inequalities, torsion-potential "
               "stability checks, and equilibrium profiles"};
  app.require_subcommand(1);
  // keep -h free: torsion-check uses --h for the mesh size
  app.set_help_flag("--help", "print help and exit");

  CommonOpts common;

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "exact-cap identity suite");
  int cal_angles = 50;
  std::string cal_out = "calibrate";
  calibrate->add_option("--angles-per-regime", cal_angles);
  calibrate->add_option("--out-name", cal_out);
  add_common(calibrate, common);

  // hk-verify
  auto* hk = app.add_subcommand("hk-verify", "deficit inequality report for one geometry");
  std::string hk_cap, hk_profile;
  int hk_n = 2000;
  long hk_samples = 0;
  double hk_tol = 1e-4;
  hk->add_option("--cap", hk_cap, "cap spec, e.g. r=1,theta=120deg");
  hk->add_option("--profile", hk_profile, "meridian profile CSV");
  hk->add_option("--n-profile", hk_n);
  hk->add_option("--samples", hk_samples, "coverage sample count (0: skip)");
  hk->add_option("--tolerance", hk_tol);
  add_common(hk, common);

  // torsion-check
  auto* tc = app.add_subcommand("torsion-check", "mixed torsion solve and identity checks");
  std::string tc_cap, tc_profile;
  double tc_h = 0.02, tc_bowl = 0.0, tc_tol = 5e-3;
  bool tc_override = false, tc_export = false;
  tc->add_option("--cap", tc_cap);
  tc->add_option("--profile", tc_profile);
  tc->add_option("--h", tc_h, "target max element diameter");
  tc->add_option("--bowl", tc_bowl, "bowl container radius (0: flat)");
  tc->add_option("--tolerance", tc_tol, "pass threshold for identity residuals");
  tc->add_flag("--allow-hydrophobic", tc_override);
  tc->add_flag("--export-fields", tc_export);
  add_common(tc, common);

  // droplet
  auto* dr = app.add_subcommand("droplet", "equilibrium profile for (sigma, bond, volume)");
  double dr_sigma = -0.5, dr_bond = 0.0, dr_volume = 0.65450, dr_tol = 1e-8;
  dr->add_option("--sigma", dr_sigma);
  dr->add_option("--bond", dr_bond);
  dr->add_option("--volume", dr_volume);
  dr->add_option("--tolerance", dr_tol);
  add_common(dr, common);

  // scaling-study
  auto* sc = app.add_subcommand("scaling-study", "small-volume rescaling study");
  double sc_sigma = -0.5, sc_bond = 1.0, sc_m0 = 0.65450;
  int sc_steps = 6;
  sc->add_option("--sigma", sc_sigma);
  sc->add_option("--bond", sc_bond);
  sc->add_option("--m0", sc_m0);
  sc->add_option("--steps", sc_steps);
  add_common(sc, common);

  // wedge
  auto* wd = app.add_subcommand("wedge", "tangency wedge vs prism competitor energy gap");
  double wd_l = 1.0, wd_r = 0.1, wd_sigma = -0.5;
  int wd_n = 2;
  wd->add_option("--l", wd_l);
  wd->add_option("--r", wd_r);
  wd->add_option("--sigma", wd_sigma);
  wd->add_option("--n", wd_n);
  add_common(wd, common);

  // report
  auto* rp = app.add_subcommand("report", "combined geometry/deficit/torsion document");
  std::string rp_cap, rp_profile;
  double rp_h = 0.0;
  long rp_samples = 0;
  rp->add_option("--cap", rp_cap);
  rp->add_option("--profile", rp_profile);
  rp->add_option("--h", rp_h, "torsion mesh size (0: skip the torsion block)");
  rp->add_option("--samples", rp_samples);
  add_common(rp, common);

  try {
    // config file overrides flags: append its tokens after the CLI ones
    std::vector<std::string> full = args;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") {
        const auto extra = config_args(args[i + 1]);
        full.insert(full.end(), extra.begin(), extra.end());
        break;
      }
    }
    // CLI11 parses reversed argv-style vectors
    std::vector<std::string> rev(full.rbegin(), full.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help() << std::endl;
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::endl;
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }

  try {
    fs::create_directories(common.output_dir);
    if (calibrate->parsed()) return cmd_calibrate(common, cal_angles, cal_out);
    if (hk->parsed()) return cmd_hk_verify(common, hk_cap, hk_profile, hk_n, hk_samples, hk_tol);
    if (tc->parsed())
      return cmd_torsion_check(common, tc_cap, tc_profile, tc_h, tc_bowl, tc_tol,
                               tc_override, tc_export);
    if (dr->parsed()) return cmd_droplet(common, dr_sigma, dr_bond, dr_volume, dr_tol);
    if (sc->parsed()) return cmd_scaling_study(common, sc_sigma, sc_bond, sc_m0, sc_steps);
    if (wd->parsed()) return cmd_wedge(common, wd_l, wd_r, wd_sigma, wd_n);
    if (rp->parsed()) return cmd_report(common, rp_cap, rp_profile, rp_h, rp_samples);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  std::cerr << "error: no subcommand" << std::endl;
  return 1;
}

}  // namespace caplab::cli
