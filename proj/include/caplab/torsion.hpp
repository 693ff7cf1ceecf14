#pragma once

#include <array>
#include <memory>
#include <vector>

#include "caplab/geometry.hpp"

namespace caplab {

// gamma of the torsion Neumann condition, from the wetted area, contact-line
// length and contact angle: -(n/(n+1)) H^n(Sigma) / (tan(theta) H^{n-1}(bd Sigma)).
double compute_gamma(const GeometryReport& g);

enum class BoundaryTag { OnM, OnSigma, OnAxis };

// Conforming P2 triangulation of the meridian cross-section. Triangles are
// straight (affine geometry from the vertices); boundary midside nodes are
// snapped onto the true boundary curves. nodes[0..num_vertices) are vertices,
// the rest are edge midpoints.
struct MeridianMesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 6>> tris;  // v0 v1 v2 m01 m12 m20
  struct BoundaryEdge {
    int n0 = 0, n1 = 0, mid = 0;
    BoundaryTag tag = BoundaryTag::OnM;
    int tri = -1;
    int local_edge = 0;    // reference edge of the owning element
    bool flipped = false;  // n0 is the second local vertex of that edge
    double s0 = 0.0, s1 = 0.0;  // curve parameter range (arclength)
  };
  std::vector<BoundaryEdge> boundary;

  int num_vertices = 0;
  double h = 0.0;            // requested max element diameter
  double max_diameter = 0.0; // realized
  double min_area = 0.0;
  std::optional<Regime> regime;
  double theta = 0.0;
  ContainerModel container;
  std::shared_ptr<const MeridianProfile> profile;

  std::size_t num_nodes() const { return nodes.size(); }
  std::size_t num_elements() const { return tris.size(); }
};

MeridianMesh mesh_meridian(const MeridianProfile& p, const ContainerModel& c, double h);

void save_mesh_csv(const MeridianMesh& m, const std::string& nodes_path,
                   const std::string& elements_path, const std::string& tags_path);

struct TorsionSolveOptions {
  bool allow_hydrophobic_override = false;
  double cg_tol = 1e-10;
  int cg_max_iter = 200000;
};

// Discrete solution of -(u_rr + u_r/rho + u_zz) = 1 with u = 0 on the free
// surface, normal flux gamma on the wetted wall, natural symmetry on the axis.
struct TorsionSolution {
  std::shared_ptr<const MeridianMesh> mesh;
  std::vector<double> u;
  double gamma = 0.0;
  double residual_linear_solve = 0.0;
  int cg_iterations = 0;
  bool non_conforming = false;
  std::vector<double> grad_on_M;  // |grad u| at the midpoint of each OnM edge
  std::vector<std::array<double, 3>> hessian_per_element;  // u_rr, u_rz, u_zz

  double u_max() const;
  double u_min() const;
  double value_at_node(std::size_t i) const { return u[i]; }
};

TorsionSolution solve_torsion(const MeridianMesh& mesh, double gamma,
                              const TorsionSolveOptions& opt = {});

void save_solution_csv(const TorsionSolution& s, const std::string& path);

// Quadrature-consistent integrals of the discrete solution used by the
// identity and bound evaluators below. All volume/surface integrals carry the
// rotational 2*pi*rho weight.
struct TorsionIntegrals {
  double vol_hess2 = 0.0;      // int_Omega |D^2 u|^2 (3D, with azimuthal term)
  double vol_lap2 = 0.0;       // int_Omega (Lap u)^2
  double vol_tracefree = 0.0;  // int_Omega |D^2 u - (Lap u/3) Id|^2
  double M_u_nu2_H = 0.0;      // int_M (u_nu)^2 H
  double M_grad = 0.0;         // int_M |grad u|
  double M_grad2 = 0.0;        // int_M |grad u|^2
  double M_grad2_H = 0.0;      // int_M |grad u|^2 H
  double M_inv_H = 0.0;        // int_M 1/H
  double max_inv_H = 0.0;      // max over M of 1/H
  double Sigma_term = 0.0;     // int_Sigma gamma^2 H_wall + A[grad^S u, grad^S u]
};

TorsionIntegrals torsion_integrals(const TorsionSolution& s);
// int_M |grad u| sqrt((H - c)/H); the Cauchy-Schwarz intermediate of the
// stability chain.
double weighted_grad_integral(const TorsionSolution& s, double c);

struct LinfCheckReport {
  double u_max = 0.0;
  double bound = 0.0;  // 4 (d_Omega^2 + gamma^2)
  bool ok = false;
};
LinfCheckReport linf_check(const TorsionSolution& s, const GeometryReport& g);

struct ReillyReport {
  double lhs_first = 0.0;
  double rhs_first = 0.0;
  double residual_first = 0.0;
  double lhs_big = 0.0;
  double rhs_big = 0.0;
  double residual_big = 0.0;
  double div_identity_residual = 0.0;  // | int_M |grad u| - (|Omega| + gamma Sigma) |
  bool non_conforming = false;
};
ReillyReport reilly_report(const TorsionSolution& s, const GeometryReport& g,
                           const ContainerModel& c);

struct StabilityChainReport {
  double line1 = 0.0;  // deficit plus flatness remainder
  double line2 = 0.0;  // Reilly right-hand side with the epsilon corrections
  double line3 = 0.0;  // zero side
  bool monotone_ok = false;
  double cs_lhs = 0.0;
  double cs_rhs = 0.0;
  bool cs_ok = false;
};
StabilityChainReport stability_chain(const TorsionSolution& s, const GeometryReport& g,
                                     double eps, double tol = 2e-3);

double hessian_deficit(const TorsionSolution& s);

struct DeficitBoundReport {
  double lhs = 0.0;     // |(n+1)(|Omega| + gamma Sigma) - int n/H|
  double budget = 0.0;  // (eps + theta_dev + h_dev)(d + 1/lambda) H^n(M)
  double lambda = 0.0;
  double lambdabound_printed = 0.0;
  double lambdabound_calibrated = 0.0;
};
DeficitBoundReport deficit_bound_check(const GeometryReport& g, double eps,
                                       double theta_dev, double h_dev);

struct WettedBoundsReport {
  double perimeter_lhs = 0.0;
  double perimeter_rhs = 0.0;
  bool perimeter_bound_ok = false;
  double ratio_lhs = 0.0;
  double ratio_budget = 0.0;
  double contact_identity_residual = 0.0;  // |lambda Sigma - sin(theta0) bdSigma|
};
WettedBoundsReport wetted_bounds(const GeometryReport& g, double eps, double theta_dev,
                                 double h_dev, double lambda);

struct SubstrateTermBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};
SubstrateTermBoundReport substrate_term_bound(const TorsionSolution& s,
                                              const GeometryReport& g, double eps);

}  // namespace caplab
