#pragma once

#include <array>
#include <cmath>

#include "caplab/types.hpp"

namespace caplab::fem {

// Degree-5 Dunavant rule, barycentric points and weights (sum 1).
struct TriQuadPoint {
  double l0, l1, l2, w;
};
inline const std::array<TriQuadPoint, 7>& tri_rule() {
  static const std::array<TriQuadPoint, 7> pts = {{
      {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
      {0.0597158717897698, 0.4701420641051151, 0.4701420641051151, 0.1323941527885062},
      {0.4701420641051151, 0.0597158717897698, 0.4701420641051151, 0.1323941527885062},
      {0.4701420641051151, 0.4701420641051151, 0.0597158717897698, 0.1323941527885062},
      {0.7974269853530873, 0.1012865073234563, 0.1012865073234563, 0.1259391805448271},
      {0.1012865073234563, 0.7974269853530873, 0.1012865073234563, 0.1259391805448271},
      {0.1012865073234563, 0.1012865073234563, 0.7974269853530873, 0.1259391805448271},
  }};
  return pts;
}

// 3-point Gauss on [0,1].
struct EdgeQuadPoint {
  double t, w;
};
inline const std::array<EdgeQuadPoint, 3>& edge_rule() {
  static const double d = 0.5 * std::sqrt(3.0 / 5.0);
  static const std::array<EdgeQuadPoint, 3> pts = {{
      {0.5 - d, 5.0 / 18.0},
      {0.5, 8.0 / 18.0},
      {0.5 + d, 5.0 / 18.0},
  }};
  return pts;
}

// Quadratic Lagrange basis in barycentric form, node order v0 v1 v2 m01 m12 m20.
inline void p2_shape(double l0, double l1, double l2, double N[6]) {
  N[0] = l0 * (2.0 * l0 - 1.0);
  N[1] = l1 * (2.0 * l1 - 1.0);
  N[2] = l2 * (2.0 * l2 - 1.0);
  N[3] = 4.0 * l0 * l1;
  N[4] = 4.0 * l1 * l2;
  N[5] = 4.0 * l2 * l0;
}

// Reference derivatives w.r.t. (xi, eta) with l0 = 1-xi-eta, l1 = xi, l2 = eta.
inline void p2_dshape(double l0, double l1, double l2, double dN[6][2]) {
  dN[0][0] = -(4.0 * l0 - 1.0);
  dN[0][1] = -(4.0 * l0 - 1.0);
  dN[1][0] = 4.0 * l1 - 1.0;
  dN[1][1] = 0.0;
  dN[2][0] = 0.0;
  dN[2][1] = 4.0 * l2 - 1.0;
  dN[3][0] = 4.0 * (l0 - l1);
  dN[3][1] = -4.0 * l1;
  dN[4][0] = 4.0 * l2;
  dN[4][1] = 4.0 * l1;
  dN[5][0] = -4.0 * l2;
  dN[5][1] = 4.0 * (l0 - l2);
}

// Constant reference second derivatives (xixi, xieta, etaeta) per basis fn.
inline const double kP2D2[6][3] = {
    {4.0, 4.0, 4.0},   {4.0, 0.0, 0.0},  {0.0, 0.0, 4.0},
    {-8.0, -4.0, 0.0}, {0.0, 4.0, 0.0},  {0.0, -4.0, -8.0},
};

// One-dimensional quadratic trace basis on an edge, node order n0 n1 mid.
inline void edge_shape(double t, double N[3]) {
  N[0] = (1.0 - t) * (1.0 - 2.0 * t);
  N[1] = t * (2.0 * t - 1.0);
  N[2] = 4.0 * t * (1.0 - t);
}
inline void edge_dshape(double t, double dN[3]) {
  dN[0] = 4.0 * t - 3.0;
  dN[1] = 4.0 * t - 1.0;
  dN[2] = 4.0 - 8.0 * t;
}

struct SymMat2 {
  double rr = 0.0, rz = 0.0, zz = 0.0;
};

// Curved (isoparametric) P2 triangle. Interior elements have midside nodes at
// chord midpoints, which makes the map affine; boundary elements carry the
// snapped midside node and the quadratic map follows the true curve.
struct IsoTri {
  std::array<Vec2, 6> X;
  SymMat2 map_hess_rho, map_hess_z;  // constant second derivatives of the map

  explicit IsoTri(const std::array<Vec2, 6>& nodes) : X(nodes) {
    for (int i = 0; i < 6; ++i) {
      map_hess_rho.rr += X[i].rho * kP2D2[i][0];
      map_hess_rho.rz += X[i].rho * kP2D2[i][1];
      map_hess_rho.zz += X[i].rho * kP2D2[i][2];
      map_hess_z.rr += X[i].z * kP2D2[i][0];
      map_hess_z.rz += X[i].z * kP2D2[i][1];
      map_hess_z.zz += X[i].z * kP2D2[i][2];
    }
  }

  struct Eval {
    Vec2 x;
    double N[6];
    Vec2 grad[6];  // physical gradients of the basis
    double detJ = 0.0;
    double jinv[2][2] = {};  // inverse Jacobian of the map
  };

  Eval at(double l0, double l1, double l2) const {
    Eval e;
    p2_shape(l0, l1, l2, e.N);
    double dN[6][2];
    p2_dshape(l0, l1, l2, dN);
    double J[2][2] = {};
    for (int i = 0; i < 6; ++i) {
      e.x = e.x + X[i] * e.N[i];
      J[0][0] += X[i].rho * dN[i][0];
      J[0][1] += X[i].rho * dN[i][1];
      J[1][0] += X[i].z * dN[i][0];
      J[1][1] += X[i].z * dN[i][1];
    }
    e.detJ = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    e.jinv[0][0] = J[1][1] / e.detJ;
    e.jinv[0][1] = -J[0][1] / e.detJ;
    e.jinv[1][0] = -J[1][0] / e.detJ;
    e.jinv[1][1] = J[0][0] / e.detJ;
    for (int i = 0; i < 6; ++i) {
      e.grad[i] = {e.jinv[0][0] * dN[i][0] + e.jinv[1][0] * dN[i][1],
                   e.jinv[0][1] * dN[i][0] + e.jinv[1][1] * dN[i][1]};
    }
    return e;
  }

  // Physical Hessian of the P2 field at the evaluation point:
  // Hx = Jinv^T (Href(u) - u_rho Href(map_rho) - u_z Href(map_z)) Jinv.
  SymMat2 hessian(const Eval& e, const double ue[6]) const {
    double Hu[3] = {0.0, 0.0, 0.0};
    Vec2 gx{0.0, 0.0};
    for (int i = 0; i < 6; ++i) {
      Hu[0] += ue[i] * kP2D2[i][0];
      Hu[1] += ue[i] * kP2D2[i][1];
      Hu[2] += ue[i] * kP2D2[i][2];
      gx = gx + e.grad[i] * ue[i];
    }
    const double m00 = Hu[0] - gx.rho * map_hess_rho.rr - gx.z * map_hess_z.rr;
    const double m01 = Hu[1] - gx.rho * map_hess_rho.rz - gx.z * map_hess_z.rz;
    const double m11 = Hu[2] - gx.rho * map_hess_rho.zz - gx.z * map_hess_z.zz;
    const double a = e.jinv[0][0], b = e.jinv[0][1], c = e.jinv[1][0], d = e.jinv[1][1];
    // rows of Jinv^T are (a, c) and (b, d)
    SymMat2 H;
    H.rr = a * (m00 * a + m01 * c) + c * (m01 * a + m11 * c);
    H.rz = a * (m00 * b + m01 * d) + c * (m01 * b + m11 * d);
    H.zz = b * (m00 * b + m01 * d) + d * (m01 * b + m11 * d);
    return H;
  }
};

// Barycentric coordinates along a local reference edge (0: v0->v1, 1: v1->v2,
// 2: v2->v0) at parameter t in [0,1].
inline void edge_barycentric(int local_edge, double t, double l[3]) {
  switch (local_edge) {
    case 0: l[0] = 1.0 - t; l[1] = t; l[2] = 0.0; break;
    case 1: l[0] = 0.0; l[1] = 1.0 - t; l[2] = t; break;
    default: l[0] = t; l[1] = 0.0; l[2] = 1.0 - t; break;
  }
}

}  // namespace caplab::fem
