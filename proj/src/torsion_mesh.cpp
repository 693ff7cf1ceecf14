#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "caplab/torsion.hpp"

namespace caplab {

double compute_gamma(const GeometryReport& g) {
  const double theta = g.theta0();
  if (std::abs(theta - kPi / 2.0) < 1e-9)
    throw Error(ErrorCode::ThetaDegenerate, "theta too close to pi/2");
  return -(static_cast<double>(g.n) / (g.n + 1)) * g.area_Sigma /
         (std::tan(theta) * g.len_bdSigma);
}

namespace {

struct SubstratePath {
  // Arclength parametrization of the wall from the axis to the contact point.
  const ContainerModel c;
  double contact_rho;
  double length;

  explicit SubstratePath(const ContainerModel& cm, double a) : c(cm), contact_rho(a) {
    if (c.kind == ContainerModel::Kind::FlatSubstrate) {
      length = a;
    } else {
      length = c.bowl_radius * std::asin(std::min(1.0, a / c.bowl_radius));
    }
  }

  Vec2 at(double s) const {
    if (c.kind == ContainerModel::Kind::FlatSubstrate) return {s, 0.0};
    const double alpha = s / c.bowl_radius;
    return {c.bowl_radius * std::sin(alpha), c.bowl_radius * (1.0 - std::cos(alpha))};
  }

  Vec2 tangent(double s) const {
    if (c.kind == ContainerModel::Kind::FlatSubstrate) return {1.0, 0.0};
    const double alpha = s / c.bowl_radius;
    return {std::cos(alpha), std::sin(alpha)};
  }
};

double tri_area2(const Vec2& a, const Vec2& b, const Vec2& c) {
  return (b - a).cross(c - a);
}

}  // namespace

MeridianMesh mesh_meridian(const MeridianProfile& p, const ContainerModel& c, double h) {
  p.validate(c);
  const double a = p.contact_radius();
  if (!(h > 0.0) || !(h < a / 8.0))
    throw Error(ErrorCode::MeshFailure, "need 0 < h < contact_radius/8");

  const ProfileInterpolator interp(p);
  const double L = interp.length();
  const SubstratePath sub(c, a);

  const double spacing = h / std::sqrt(2.0);
  const int nxi = std::max(8, static_cast<int>(std::ceil(L / spacing)));

  // Column endpoints, then the transverse resolution from the widest gap.
  std::vector<Vec2> prof_pts(nxi + 1), sub_pts(nxi + 1);
  std::vector<double> prof_s(nxi + 1), sub_s(nxi + 1);
  double max_gap = 0.0;
  for (int i = 0; i <= nxi; ++i) {
    const double xi = static_cast<double>(i) / nxi;
    prof_s[i] = xi * L;
    sub_s[i] = xi * sub.length;
    prof_pts[i] = interp.at(prof_s[i]).pos;
    sub_pts[i] = sub.at(sub_s[i]);
    max_gap = std::max(max_gap, (prof_pts[i] - sub_pts[i]).norm());
  }
  prof_pts[0] = {0.0, p.z.front()};
  sub_pts[0] = {0.0, 0.0};
  prof_pts[nxi] = sub_pts[nxi] = p.point(p.size() - 1);
  const int neta = std::max(4, static_cast<int>(std::ceil(max_gap / spacing)));

  MeridianMesh m;
  m.h = h;
  m.container = c;
  m.profile = std::make_shared<MeridianProfile>(p);

  {
    const Vec2 nu_M = p.normal(p.size() - 1);
    const Vec2 nu_K = c.wall_normal(a);
    m.theta = std::acos(std::clamp(nu_M.dot(nu_K), -1.0, 1.0));
    if (m.theta > 1e-12 && m.theta < kPi / 2.0 - 1e-12)
      m.regime = Regime::Hydrophobic;
    else if (m.theta > kPi / 2.0 + 1e-12 && m.theta < kPi - 1e-12)
      m.regime = Regime::Hydrophilic;
  }

  // Vertex grid; the last column collapses to the single contact vertex.
  std::vector<int> vid((nxi + 1) * (neta + 1), -1);
  auto vidx = [&](int i, int j) -> int& { return vid[i * (neta + 1) + j]; };
  for (int i = 0; i < nxi; ++i) {
    for (int j = 0; j <= neta; ++j) {
      const double eta = static_cast<double>(j) / neta;
      Vec2 x = sub_pts[i] * (1.0 - eta) + prof_pts[i] * eta;
      if (i == 0) x.rho = 0.0;
      vidx(i, j) = static_cast<int>(m.nodes.size());
      m.nodes.push_back(x);
    }
  }
  const int contact = static_cast<int>(m.nodes.size());
  m.nodes.push_back(prof_pts[nxi]);
  for (int j = 0; j <= neta; ++j) vidx(nxi, j) = contact;
  m.num_vertices = static_cast<int>(m.nodes.size());

  auto add_tri = [&](int v0, int v1, int v2) {
    if (tri_area2(m.nodes[v0], m.nodes[v1], m.nodes[v2]) < 0.0) std::swap(v1, v2);
    m.tris.push_back({v0, v1, v2, -1, -1, -1});
  };
  for (int i = 0; i + 1 < nxi; ++i) {
    for (int j = 0; j < neta; ++j) {
      const int A = vidx(i, j), B = vidx(i + 1, j), C = vidx(i + 1, j + 1), D = vidx(i, j + 1);
      const double dAC = (m.nodes[A] - m.nodes[C]).norm();
      const double dBD = (m.nodes[B] - m.nodes[D]).norm();
      if (dAC <= dBD) {
        add_tri(A, B, C);
        add_tri(A, C, D);
      } else {
        add_tri(A, B, D);
        add_tri(B, C, D);
      }
    }
  }
  for (int j = 0; j < neta; ++j) add_tri(vidx(nxi - 1, j), contact, vidx(nxi - 1, j + 1));

  // Midside nodes, shared across elements.
  std::map<std::pair<int, int>, int> edge_mid;
  auto midside = [&](int u, int v) -> int {
    const auto key = std::minmax(u, v);
    auto it = edge_mid.find(key);
    if (it != edge_mid.end()) return it->second;
    const int id = static_cast<int>(m.nodes.size());
    m.nodes.push_back((m.nodes[u] + m.nodes[v]) * 0.5);
    edge_mid.emplace(key, id);
    return id;
  };
  std::map<std::pair<int, int>, int> edge_tri;  // vertex pair -> owning element
  for (std::size_t t = 0; t < m.tris.size(); ++t) {
    auto& tri = m.tris[t];
    tri[3] = midside(tri[0], tri[1]);
    tri[4] = midside(tri[1], tri[2]);
    tri[5] = midside(tri[2], tri[0]);
    for (int e = 0; e < 3; ++e)
      edge_tri[std::minmax(tri[e], tri[(e + 1) % 3])] = static_cast<int>(t);
  }

  auto add_boundary = [&](int n0, int n1, BoundaryTag tag, double s0, double s1) {
    MeridianMesh::BoundaryEdge be;
    be.n0 = n0;
    be.n1 = n1;
    be.mid = edge_mid.at(std::minmax(n0, n1));
    be.tag = tag;
    be.tri = edge_tri.at(std::minmax(n0, n1));
    const auto& tri = m.tris[be.tri];
    be.local_edge = -1;
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      if ((a == n0 && b == n1) || (a == n1 && b == n0)) {
        be.local_edge = e;
        be.flipped = (a != n0);
        break;
      }
    }
    if (be.local_edge < 0) throw Error(ErrorCode::MeshFailure, "boundary edge lost its element");
    be.s0 = s0;
    be.s1 = s1;
    m.boundary.push_back(be);
  };
  for (int i = 0; i < nxi; ++i) {
    add_boundary(vidx(i, 0), vidx(i + 1, 0), BoundaryTag::OnSigma, sub_s[i], sub_s[i + 1]);
    add_boundary(vidx(i, neta), vidx(i + 1, neta), BoundaryTag::OnM, prof_s[i], prof_s[i + 1]);
  }
  for (int j = 0; j < neta; ++j) {
    const double z0 = m.nodes[vidx(0, j)].z, z1 = m.nodes[vidx(0, j + 1)].z;
    add_boundary(vidx(0, j), vidx(0, j + 1), BoundaryTag::OnAxis, z0, z1);
  }

  // Snap boundary midside nodes onto the true curves.
  for (const auto& be : m.boundary) {
    const double sm = 0.5 * (be.s0 + be.s1);
    if (be.tag == BoundaryTag::OnM)
      m.nodes[be.mid] = interp.at(sm).pos;
    else if (be.tag == BoundaryTag::OnSigma)
      m.nodes[be.mid] = sub.at(sm);
    else
      m.nodes[be.mid].rho = 0.0;
  }

  m.min_area = std::numeric_limits<double>::infinity();
  m.max_diameter = 0.0;
  for (const auto& tri : m.tris) {
    const Vec2 &A = m.nodes[tri[0]], &B = m.nodes[tri[1]], &C = m.nodes[tri[2]];
    const double area = 0.5 * tri_area2(A, B, C);
    m.min_area = std::min(m.min_area, area);
    m.max_diameter = std::max(
        {m.max_diameter, (B - A).norm(), (C - B).norm(), (A - C).norm()});
  }
  if (!(m.min_area > 1e-3 * h * h))
    throw Error(ErrorCode::MeshFailure,
                "sliver element: min area " + std::to_string(m.min_area) + " below " +
                    std::to_string(1e-3 * h * h));
  return m;
}

void save_mesh_csv(const MeridianMesh& m, const std::string& nodes_path,
                   const std::string& elements_path, const std::string& tags_path) {
  char buf[200];
  {
    std::ofstream f(nodes_path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + nodes_path);
    f << "id,rho,z\n";
    for (std::size_t i = 0; i < m.nodes.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, m.nodes[i].rho, m.nodes[i].z);
      f << buf;
    }
  }
  {
    std::ofstream f(elements_path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + elements_path);
    f << "v0,v1,v2,m01,m12,m20\n";
    for (const auto& t : m.tris)
      f << t[0] << ',' << t[1] << ',' << t[2] << ',' << t[3] << ',' << t[4] << ',' << t[5]
        << '\n';
  }
  {
    std::ofstream f(tags_path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + tags_path);
    f << "n0,n1,mid,tag\n";
    for (const auto& be : m.boundary) {
      const char* tag = be.tag == BoundaryTag::OnM      ? "OnM"
                        : be.tag == BoundaryTag::OnSigma ? "OnSigma"
                                                         : "OnAxis";
      f << be.n0 << ',' << be.n1 << ',' << be.mid << ',' << tag << '\n';
    }
  }
}

}  // namespace caplab
