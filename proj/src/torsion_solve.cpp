#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "caplab/torsion.hpp"
#include "fem_internal.hpp"

namespace caplab {

namespace {

struct Csr {
  std::vector<int> row_ptr, col;
  std::vector<double> val;

  void mul(const std::vector<double>& x, std::vector<double>& y) const {
    const int n = static_cast<int>(row_ptr.size()) - 1;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
      y[i] = acc;
    }
  }
};

struct Triplet {
  int row, col;
  double val;
};

Csr build_csr(int n, std::vector<Triplet>& triplets) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row != b.row) return a.row < b.row;
    return a.col < b.col;
  });
  Csr m;
  m.row_ptr.assign(n + 1, 0);
  for (std::size_t k = 0; k < triplets.size();) {
    std::size_t j = k;
    double acc = 0.0;
    while (j < triplets.size() && triplets[j].row == triplets[k].row &&
           triplets[j].col == triplets[k].col) {
      acc += triplets[j].val;
      ++j;
    }
    m.col.push_back(triplets[k].col);
    m.val.push_back(acc);
    ++m.row_ptr[triplets[k].row + 1];
    k = j;
  }
  std::partial_sum(m.row_ptr.begin(), m.row_ptr.end(), m.row_ptr.begin());
  return m;
}

}  // namespace

double TorsionSolution::u_max() const { return *std::max_element(u.begin(), u.end()); }
double TorsionSolution::u_min() const { return *std::min_element(u.begin(), u.end()); }

TorsionSolution solve_torsion(const MeridianMesh& mesh, double gamma,
                              const TorsionSolveOptions& opt) {
  bool non_conforming = false;
  if (!mesh.regime || *mesh.regime == Regime::Hydrophobic) {
    if (!opt.allow_hydrophobic_override)
      throw Error(ErrorCode::RegimeViolation,
                  "torsion solve requires the hydrophilic regime (set the override to "
                  "proceed anyway)");
    non_conforming = true;
  }

  const int nn = static_cast<int>(mesh.num_nodes());
  std::vector<char> dirichlet(nn, 0);
  for (const auto& be : mesh.boundary) {
    if (be.tag == BoundaryTag::OnM)
      dirichlet[be.n0] = dirichlet[be.n1] = dirichlet[be.mid] = 1;
  }
  std::vector<int> dof(nn, -1);
  int nfree = 0;
  for (int i = 0; i < nn; ++i)
    if (!dirichlet[i]) dof[i] = nfree++;

  std::vector<Triplet> triplets;
  triplets.reserve(mesh.tris.size() * 36);
  std::vector<double> rhs(nfree, 0.0);

  for (const auto& tri : mesh.tris) {
    const fem::IsoTri T({mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                         mesh.nodes[tri[3]], mesh.nodes[tri[4]], mesh.nodes[tri[5]]});
    double Ke[6][6] = {};
    double Fe[6] = {};
    for (const auto& q : fem::tri_rule()) {
      const fem::IsoTri::Eval ev = T.at(q.l0, q.l1, q.l2);
      if (!(ev.detJ > 0.0))
        throw Error(ErrorCode::MeshFailure, "element map folds at a quadrature point");
      const double w = q.w * 0.5 * ev.detJ * ev.x.rho;
      for (int a = 0; a < 6; ++a) {
        Fe[a] += w * ev.N[a];
        for (int b = a; b < 6; ++b) Ke[a][b] += w * ev.grad[a].dot(ev.grad[b]);
      }
    }
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < a; ++b) Ke[a][b] = Ke[b][a];
    for (int a = 0; a < 6; ++a) {
      const int ia = dof[tri[a]];
      if (ia < 0) continue;
      rhs[ia] += Fe[a];
      for (int b = 0; b < 6; ++b) {
        const int ib = dof[tri[b]];
        if (ib < 0) continue;  // zero Dirichlet values drop out
        triplets.push_back({ia, ib, Ke[a][b]});
      }
    }
  }

  // Weak Neumann data on the wetted wall: + gamma * int v rho ds along the
  // curved edge through (n0, mid, n1).
  for (const auto& be : mesh.boundary) {
    if (be.tag != BoundaryTag::OnSigma) continue;
    const Vec2 pts[3] = {mesh.nodes[be.n0], mesh.nodes[be.n1], mesh.nodes[be.mid]};
    const int ids[3] = {be.n0, be.n1, be.mid};
    for (const auto& q : fem::edge_rule()) {
      double Ne[3], dNe[3];
      fem::edge_shape(q.t, Ne);
      fem::edge_dshape(q.t, dNe);
      Vec2 x{0.0, 0.0}, dx{0.0, 0.0};
      for (int a = 0; a < 3; ++a) {
        x = x + pts[a] * Ne[a];
        dx = dx + pts[a] * dNe[a];
      }
      const double w = q.w * dx.norm() * x.rho * gamma;
      for (int a = 0; a < 3; ++a) {
        const int ia = dof[ids[a]];
        if (ia >= 0) rhs[ia] += w * Ne[a];
      }
    }
  }

  const Csr K = build_csr(nfree, triplets);

  std::vector<double> diag(nfree, 1.0);
  for (int i = 0; i < nfree; ++i)
    for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k)
      if (K.col[k] == i) diag[i] = K.val[k];

  // Jacobi-preconditioned conjugate gradients.
  std::vector<double> x(nfree, 0.0), r(rhs), zv(nfree), pv(nfree), Ap(nfree);
  auto dot = [](const std::vector<double>& u, const std::vector<double>& v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
    return acc;
  };
  const double bnorm = std::sqrt(dot(rhs, rhs));
  double relres = 0.0;
  int iters = 0;
  if (bnorm > 0.0) {
    relres = 1.0;
    for (int i = 0; i < nfree; ++i) zv[i] = r[i] / diag[i];
    pv = zv;
    double rz = dot(r, zv);
    for (iters = 0; iters < opt.cg_max_iter; ++iters) {
      relres = std::sqrt(dot(r, r)) / bnorm;
      if (relres <= opt.cg_tol) break;
      K.mul(pv, Ap);
      const double alpha = rz / dot(pv, Ap);
      for (int i = 0; i < nfree; ++i) {
        x[i] += alpha * pv[i];
        r[i] -= alpha * Ap[i];
      }
      for (int i = 0; i < nfree; ++i) zv[i] = r[i] / diag[i];
      const double rz_new = dot(r, zv);
      for (int i = 0; i < nfree; ++i) pv[i] = zv[i] + (rz_new / rz) * pv[i];
      rz = rz_new;
    }
    if (relres > opt.cg_tol)
      throw Error(ErrorCode::SolveDiverged,
                  "CG stalled at relative residual " + std::to_string(relres));
  }

  TorsionSolution sol;
  sol.mesh = std::make_shared<MeridianMesh>(mesh);
  sol.gamma = gamma;
  sol.residual_linear_solve = relres;
  sol.cg_iterations = iters;
  sol.non_conforming = non_conforming;
  sol.u.assign(nn, 0.0);
  for (int i = 0; i < nn; ++i)
    if (dof[i] >= 0) sol.u[i] = x[dof[i]];

  sol.hessian_per_element.reserve(mesh.tris.size());
  for (const auto& tri : mesh.tris) {
    const fem::IsoTri T({mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                         mesh.nodes[tri[3]], mesh.nodes[tri[4]], mesh.nodes[tri[5]]});
    double ue[6];
    for (int a = 0; a < 6; ++a) ue[a] = sol.u[tri[a]];
    const auto H = T.hessian(T.at(1.0 / 3, 1.0 / 3, 1.0 / 3), ue);
    sol.hessian_per_element.push_back({H.rr, H.rz, H.zz});
  }

  for (const auto& be : mesh.boundary) {
    if (be.tag != BoundaryTag::OnM) continue;
    const auto& tri = mesh.tris[be.tri];
    const fem::IsoTri T({mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]],
                         mesh.nodes[tri[3]], mesh.nodes[tri[4]], mesh.nodes[tri[5]]});
    double ue[6];
    for (int a = 0; a < 6; ++a) ue[a] = sol.u[tri[a]];
    double l[3];
    fem::edge_barycentric(be.local_edge, 0.5, l);
    const fem::IsoTri::Eval ev = T.at(l[0], l[1], l[2]);
    Vec2 grad{0.0, 0.0};
    for (int a = 0; a < 6; ++a) grad = grad + ev.grad[a] * ue[a];
    sol.grad_on_M.push_back(grad.norm());
  }
  return sol;
}

void save_solution_csv(const TorsionSolution& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path);
  f << "rho,z,u\n";
  char buf[160];
  for (std::size_t i = 0; i < s.mesh->nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.mesh->nodes[i].rho,
                  s.mesh->nodes[i].z, s.u[i]);
    f << buf;
  }
}

}  // namespace caplab
