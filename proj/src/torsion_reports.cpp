#include <algorithm>

#include "caplab/torsion.hpp"
#include "fem_internal.hpp"

namespace caplab {

namespace {

Vec2 substrate_point(const ContainerModel& c, double s) {
  if (c.kind == ContainerModel::Kind::FlatSubstrate) return {s, 0.0};
  const double alpha = s / c.bowl_radius;
  return {c.bowl_radius * std::sin(alpha), c.bowl_radius * (1.0 - std::cos(alpha))};
}

Vec2 substrate_tangent(const ContainerModel& c, double s) {
  if (c.kind == ContainerModel::Kind::FlatSubstrate) return {1.0, 0.0};
  const double alpha = s / c.bowl_radius;
  return {std::cos(alpha), std::sin(alpha)};
}

fem::IsoTri element_of(const MeridianMesh& mesh, int t) {
  const auto& tri = mesh.tris[t];
  return fem::IsoTri({mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                      mesh.nodes[tri[3]], mesh.nodes[tri[4]], mesh.nodes[tri[5]]});
}

struct EdgeGrad {
  Vec2 grad;
  Vec2 point;
};

// Field gradient on a boundary edge at edge parameter t, evaluated through the
// owning element's reference edge.
EdgeGrad grad_on_edge(const TorsionSolution& s, const MeridianMesh::BoundaryEdge& be,
                      double t) {
  const auto& mesh = *s.mesh;
  const auto& tri = mesh.tris[be.tri];
  const fem::IsoTri T = element_of(mesh, be.tri);
  double ue[6];
  for (int a = 0; a < 6; ++a) ue[a] = s.u[tri[a]];
  double l[3];
  fem::edge_barycentric(be.local_edge, be.flipped ? 1.0 - t : t, l);
  const fem::IsoTri::Eval ev = T.at(l[0], l[1], l[2]);
  Vec2 grad{0.0, 0.0};
  for (int a = 0; a < 6; ++a) grad = grad + ev.grad[a] * ue[a];
  return {grad, ev.x};
}

}  // namespace

TorsionIntegrals torsion_integrals(const TorsionSolution& s) {
  const auto& mesh = *s.mesh;
  const ProfileInterpolator interp(*mesh.profile);
  TorsionIntegrals I;

  // Volume integrals; the azimuthal Hessian entry is u_rho/rho.
  for (std::size_t e = 0; e < mesh.tris.size(); ++e) {
    const auto& tri = mesh.tris[e];
    const fem::IsoTri T = element_of(mesh, static_cast<int>(e));
    double ue[6];
    for (int a = 0; a < 6; ++a) ue[a] = s.u[tri[a]];
    for (const auto& q : fem::tri_rule()) {
      const fem::IsoTri::Eval ev = T.at(q.l0, q.l1, q.l2);
      Vec2 grad{0.0, 0.0};
      for (int a = 0; a < 6; ++a) grad = grad + ev.grad[a] * ue[a];
      const fem::SymMat2 H = T.hessian(ev, ue);
      const double azim = grad.rho / ev.x.rho;
      const double lap = H.rr + H.zz + azim;
      const double hess2 = H.rr * H.rr + 2.0 * H.rz * H.rz + H.zz * H.zz + azim * azim;
      const double mtr = lap / 3.0;
      const double tracefree = (H.rr - mtr) * (H.rr - mtr) + (H.zz - mtr) * (H.zz - mtr) +
                               (azim - mtr) * (azim - mtr) + 2.0 * H.rz * H.rz;
      const double w = 2.0 * kPi * q.w * 0.5 * ev.detJ * ev.x.rho;
      I.vol_hess2 += w * hess2;
      I.vol_lap2 += w * lap * lap;
      I.vol_tracefree += w * tracefree;
    }
  }

  for (const auto& be : mesh.boundary) {
    if (be.tag == BoundaryTag::OnM) {
      for (const auto& q : fem::edge_rule()) {
        const double sq = be.s0 + q.t * (be.s1 - be.s0);
        const ProfileSample ps = interp.at(sq);
        const double H = ps.kappa_m + ps.kappa_p;
        const Vec2 nu{std::sin(ps.phi), std::cos(ps.phi)};
        const EdgeGrad eg = grad_on_edge(s, be, q.t);
        const double u_nu = eg.grad.dot(nu);
        const double gn = eg.grad.norm();
        const double w = 2.0 * kPi * q.w * (be.s1 - be.s0) * ps.pos.rho;
        I.M_u_nu2_H += w * u_nu * u_nu * H;
        I.M_grad += w * gn;
        I.M_grad2 += w * gn * gn;
        I.M_grad2_H += w * gn * gn * H;
        I.M_inv_H += w / H;
        I.max_inv_H = std::max(I.max_inv_H, 1.0 / H);
      }
    } else if (be.tag == BoundaryTag::OnSigma &&
               mesh.container.kind == ContainerModel::Kind::SphericalBowl) {
      const double Hwall = mesh.container.wall_mean_curvature();
      const double Acoef = mesh.container.wall_shape_coeff();
      for (const auto& q : fem::edge_rule()) {
        const double sq = be.s0 + q.t * (be.s1 - be.s0);
        const Vec2 pos = substrate_point(mesh.container, sq);
        const Vec2 tang = substrate_tangent(mesh.container, sq);
        const EdgeGrad eg = grad_on_edge(s, be, q.t);
        const double gt = eg.grad.dot(tang);
        const double w = 2.0 * kPi * q.w * (be.s1 - be.s0) * pos.rho;
        I.Sigma_term += w * (s.gamma * s.gamma * Hwall + Acoef * gt * gt);
      }
    }
  }
  return I;
}

double weighted_grad_integral(const TorsionSolution& s, double c) {
  const auto& mesh = *s.mesh;
  const ProfileInterpolator interp(*mesh.profile);
  double acc = 0.0;
  for (const auto& be : mesh.boundary) {
    if (be.tag != BoundaryTag::OnM) continue;
    for (const auto& q : fem::edge_rule()) {
      const double sq = be.s0 + q.t * (be.s1 - be.s0);
      const ProfileSample ps = interp.at(sq);
      const double H = ps.kappa_m + ps.kappa_p;
      const EdgeGrad eg = grad_on_edge(s, be, q.t);
      const double w = 2.0 * kPi * q.w * (be.s1 - be.s0) * ps.pos.rho;
      acc += w * eg.grad.norm() * std::sqrt(std::max(0.0, (H - c) / H));
    }
  }
  return acc;
}

LinfCheckReport linf_check(const TorsionSolution& s, const GeometryReport& g) {
  LinfCheckReport r;
  r.u_max = s.u_max();
  r.bound = 4.0 * (g.diameter * g.diameter + s.gamma * s.gamma);
  r.ok = r.u_max <= r.bound;
  return r;
}

ReillyReport reilly_report(const TorsionSolution& s, const GeometryReport& g,
                           const ContainerModel& c) {
  (void)c;  // the solution's mesh already carries the container
  const TorsionIntegrals I = torsion_integrals(s);
  const double S = g.torsion_volume();

  ReillyReport r;
  r.non_conforming = s.non_conforming;
  r.lhs_first = (2.0 / 3.0) * S + (I.vol_lap2 / 3.0 - I.vol_hess2);
  r.rhs_first = I.M_u_nu2_H + I.Sigma_term;
  r.residual_first = std::abs(r.lhs_first - r.rhs_first);

  r.lhs_big = (S / 3.0) * (g.int_n_over_H - 3.0 * S);
  r.rhs_big = I.M_inv_H * (I.vol_hess2 - I.vol_lap2 / 3.0) +
              I.M_inv_H * (I.M_grad2_H + I.Sigma_term) - I.M_grad * I.M_grad;
  r.residual_big = std::abs(r.lhs_big - r.rhs_big);

  r.div_identity_residual = std::abs(I.M_grad - S);
  return r;
}

StabilityChainReport stability_chain(const TorsionSolution& s, const GeometryReport& g,
                                     double eps, double tol) {
  if (!g.regime || *g.regime != Regime::Hydrophilic)
    throw Error(ErrorCode::RegimeViolation, "stability chain requires hydrophilic regime");
  const TorsionIntegrals I = torsion_integrals(s);
  const double S = g.torsion_volume();
  const double C = 6.0;  // 2(n+1) with n=2
  const double linf = 4.0 * (g.diameter * g.diameter + s.gamma * s.gamma);

  StabilityChainReport r;
  r.line1 = (S / 3.0) * (g.int_n_over_H - 3.0 * S) +
            C * eps * (I.M_inv_H * (g.volume / 3.0 + linf * S) + I.max_inv_H * S * S);
  r.line2 = (1.0 - C * eps) * I.M_inv_H * (I.vol_hess2 - I.vol_lap2 / 3.0) +
            I.M_inv_H * (I.M_grad2_H - C * eps * I.M_grad2) -
            (1.0 - C * eps * I.max_inv_H) * I.M_grad * I.M_grad;
  r.line3 = 0.0;
  r.monotone_ok = (r.line1 >= r.line2 - tol) && (r.line2 >= r.line3 - tol);

  const double wg = weighted_grad_integral(s, C * eps);
  r.cs_lhs = wg * wg;
  r.cs_rhs = I.M_inv_H * (I.M_grad2_H - C * eps * I.M_grad2);
  r.cs_ok = r.cs_lhs <= r.cs_rhs + tol;
  return r;
}

double hessian_deficit(const TorsionSolution& s) {
  return torsion_integrals(s).vol_tracefree;
}

DeficitBoundReport deficit_bound_check(const GeometryReport& g, double eps,
                                       double theta_dev, double h_dev) {
  if (!g.regime || *g.regime != Regime::Hydrophilic)
    throw Error(ErrorCode::RegimeViolation, "deficit bound requires hydrophilic regime");
  DeficitBoundReport r;
  r.lambda = g.mean_H;
  const double S = g.torsion_volume();
  r.lhs = std::abs(3.0 * S - g.int_n_over_H);
  r.budget = (eps + theta_dev + h_dev) * (g.diameter + 1.0 / r.lambda) * g.area_M;
  const double c0 = std::cos(g.theta0());
  r.lambdabound_printed =
      std::abs(3.0 * g.volume + 2.0 * c0 * g.area_Sigma / r.lambda - 2.0 * g.area_M / r.lambda);
  r.lambdabound_calibrated =
      std::abs(3.0 * g.volume - (2.0 / r.lambda) * (g.area_M + c0 * g.area_Sigma));
  return r;
}

WettedBoundsReport wetted_bounds(const GeometryReport& g, double eps, double theta_dev,
                                 double h_dev, double lambda) {
  if (!g.regime || *g.regime != Regime::Hydrophilic)
    throw Error(ErrorCode::RegimeViolation, "wetted bounds require hydrophilic regime");
  const double theta0 = g.theta0();
  const double st = std::sin(theta0);

  WettedBoundsReport r;
  r.perimeter_lhs = g.len_bdSigma;
  r.perimeter_rhs = (2.0 / st) * (lambda * g.area_Sigma + h_dev * lambda * g.area_M);
  r.perimeter_bound_ok = r.perimeter_lhs <= r.perimeter_rhs;

  r.ratio_lhs = std::abs(std::cos(theta0) / lambda -
                         g.area_Sigma / (std::tan(theta0) * g.len_bdSigma));
  r.ratio_budget = std::abs(1.0 / std::tan(theta0)) *
                   ((6.0 / st) * (eps + theta_dev) + h_dev) * g.area_M / g.len_bdSigma;
  r.contact_identity_residual = std::abs(lambda * g.area_Sigma - st * g.len_bdSigma);
  return r;
}

SubstrateTermBoundReport substrate_term_bound(const TorsionSolution& s,
                                              const GeometryReport& g, double eps) {
  const TorsionIntegrals I = torsion_integrals(s);
  const double S = g.torsion_volume();
  SubstrateTermBoundReport r;
  r.lhs = std::abs(I.Sigma_term);
  r.rhs = 6.0 * eps *
          (4.0 * (g.diameter * g.diameter + s.gamma * s.gamma) * S + I.vol_hess2 + I.M_grad2);
  r.ok = r.lhs <= r.rhs + 1e-15;
  return r;
}

}  // namespace caplab
