#include "caplab/report_json.hpp"

#include <fstream>

namespace caplab {

json convention_ledger() {
  json j;
  j["lambda_slope"] = "cot_theta";
  j["lambda_slope_note"] =
      "Lambda is the cone over the wetted region with wall slope |cot(theta)| "
      "(vertex at the ball center for caps); a literal tan(theta) variant is "
      "available behind the lambda_slope_literal_tan flag for comparison";
  j["lambda_sign"] =
      "signed Lambda volume is +|Lambda| hydrophobic, -|Lambda| hydrophilic; "
      "gamma * area_Sigma = -signed Lambda volume for constant-angle geometries";
  j["nu_K"] = "outer normal of the container; equals -e3 on a flat substrate";
  j["contact_angle"] = "cos(theta) = nu_M . nu_K at the contact line";
  j["torsion_volume"] =
      "identities use |Omega| + gamma*area_Sigma with gamma the Neumann datum "
      "w.r.t. nu_K; a printed minus sign in that combination corresponds to the "
      "opposite wall-normal orientation";
  j["hessian_deficit"] = "trace-free form |D2u - (lap u/(n+1)) Id|^2, sign-free";
  j["lambdabound_form"] =
      "(n+1)|Omega| ~ (n/lambda)(area_M + cos(theta0) area_Sigma), the "
      "cap-verified orientation of the conormal term; the printed variant is "
      "reported alongside";
  j["wetted_identity"] = "lambda*area_Sigma - sin(theta0)*len_bdSigma ~ 0 (difference form)";
  return j;
}

static json regime_json(const std::optional<Regime>& r) {
  if (!r) return nullptr;
  return std::string(to_string(*r));
}

json to_json(const GeometryReport& g) {
  json j;
  j["n"] = g.n;
  j["volume"] = g.volume;
  j["area_M"] = g.area_M;
  j["area_Sigma"] = g.area_Sigma;
  j["len_bdSigma"] = g.len_bdSigma;
  j["int_n_over_H"] = g.int_n_over_H;
  j["lambda_volume"] = g.lambda_volume;
  j["gamma"] = g.gamma;
  j["theta_min"] = g.theta_min;
  j["theta_max"] = g.theta_max;
  j["regime"] = regime_json(g.regime);
  j["diameter"] = g.diameter;
  j["mean_H"] = g.mean_H;
  j["max_H_deviation"] = g.max_H_deviation;
  return j;
}

json to_json(const DeficitReport& d) {
  json j;
  j["regime"] = regime_json(d.regime);
  j["int_n_over_H"] = d.int_n_over_H;
  j["signed_volume"] = d.signed_volume;
  j["deficit"] = d.deficit;
  j["relative_deficit"] = d.relative_deficit;
  j["equality_case"] = d.equality_case;
  return j;
}

json to_json(const ClassicalHkReport& r) {
  json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["cmc_identity_residual"] = r.cmc_identity_residual;
  j["mean_H"] = r.mean_H;
  j["max_H_deviation"] = r.max_H_deviation;
  return j;
}

json to_json(const MontielRosReport& r) {
  json j;
  j["gamma_integral"] = r.gamma_integral;
  j["amgm_bound"] = r.amgm_bound;
  j["gap"] = r.gap;
  j["max_anisotropy"] = r.max_anisotropy;
  return j;
}

json to_json(const CoverageReport& r) {
  json j;
  j["covered_fraction"] = r.covered_fraction;
  j["num_samples"] = r.num_samples;
  j["num_violations"] = r.violations.size();
  return j;
}

json to_json(const LinfCheckReport& r) {
  json j;
  j["u_max"] = r.u_max;
  j["bound"] = r.bound;
  j["ok"] = r.ok;
  return j;
}

json to_json(const ReillyReport& r) {
  json j;
  j["lhs_first"] = r.lhs_first;
  j["rhs_first"] = r.rhs_first;
  j["residual_first"] = r.residual_first;
  j["lhs_big"] = r.lhs_big;
  j["rhs_big"] = r.rhs_big;
  j["residual_big"] = r.residual_big;
  j["div_identity_residual"] = r.div_identity_residual;
  j["non_conforming"] = r.non_conforming;
  return j;
}

json to_json(const StabilityChainReport& r) {
  json j;
  j["line1"] = r.line1;
  j["line2"] = r.line2;
  j["line3"] = r.line3;
  j["monotone_ok"] = r.monotone_ok;
  j["cauchy_schwarz_lhs"] = r.cs_lhs;
  j["cauchy_schwarz_rhs"] = r.cs_rhs;
  j["cauchy_schwarz_ok"] = r.cs_ok;
  return j;
}

json to_json(const DeficitBoundReport& r) {
  json j;
  j["lhs"] = r.lhs;
  j["budget"] = r.budget;
  j["lambda"] = r.lambda;
  j["lambdabound_printed"] = r.lambdabound_printed;
  j["lambdabound_calibrated"] = r.lambdabound_calibrated;
  return j;
}

json to_json(const WettedBoundsReport& r) {
  json j;
  j["perimeter_lhs"] = r.perimeter_lhs;
  j["perimeter_rhs"] = r.perimeter_rhs;
  j["perimeter_bound_ok"] = r.perimeter_bound_ok;
  j["ratio_lhs"] = r.ratio_lhs;
  j["ratio_budget"] = r.ratio_budget;
  j["contact_identity_residual"] = r.contact_identity_residual;
  return j;
}

json to_json(const SubstrateTermBoundReport& r) {
  json j;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["ok"] = r.ok;
  return j;
}

json to_json(const DropletSolution& s) {
  json j;
  j["lagrange_multiplier"] = s.lagrange_multiplier;
  j["contact_angle"] = s.contact_angle;
  j["volume"] = s.volume;
  j["energy"] = s.energy;
  j["el_residual"] = s.el_residual;
  j["young_residual"] = s.young_residual;
  j["newton_iterations"] = s.newton_iterations;
  return j;
}

json to_json(const WedgeGapReport& r) {
  json j;
  j["gap"] = r.gap;
  j["positivity_threshold"] = r.positivity_threshold;
  j["direct_gap"] = r.direct_gap;
  return j;
}

json to_json(const std::vector<ScalingRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j;
    j["m"] = r.m;
    j["sym_diff"] = r.sym_diff;
    j["theta_star"] = r.theta_star;
    j["lambda"] = r.lambda;
    j["energy"] = r.energy;
    arr.push_back(j);
  }
  return arr;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  f << j.dump(2) << '\n';
}

}  // namespace caplab
