// Triangle-triangle intersection scan used to certify ribbon embeddings.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <unordered_map>

#include <Eigen/Geometry>

#include "csl/mesh.hpp"

namespace csl {

namespace {

using Vec3 = Eigen::Vector3d;

struct Tri3 {
  std::array<Vec3, 3> p;
};

double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

bool segments_cross_2d(const Eigen::Vector2d& p1, const Eigen::Vector2d& p2, const Eigen::Vector2d& q1,
                       const Eigen::Vector2d& q2, double eps) {
  const double d1 = orient2d(q1, q2, p1);
  const double d2 = orient2d(q1, q2, p2);
  const double d3 = orient2d(p1, p2, q1);
  const double d4 = orient2d(p1, p2, q2);
  return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
         ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

bool strictly_inside_2d(const std::array<Eigen::Vector2d, 3>& t, const Eigen::Vector2d& p, double eps) {
  const double s = orient2d(t[0], t[1], t[2]) > 0.0 ? 1.0 : -1.0;
  return s * orient2d(t[0], t[1], p) > eps && s * orient2d(t[1], t[2], p) > eps &&
         s * orient2d(t[2], t[0], p) > eps;
}

bool coplanar_overlap(const Tri3& a, const Tri3& b, const Vec3& normal, double scale) {
  int drop = 0;
  normal.cwiseAbs().maxCoeff(&drop);
  auto project = [drop](const Vec3& v) {
    return drop == 0 ? Eigen::Vector2d(v.y(), v.z())
                     : (drop == 1 ? Eigen::Vector2d(v.x(), v.z()) : Eigen::Vector2d(v.x(), v.y()));
  };
  std::array<Eigen::Vector2d, 3> pa{project(a.p[0]), project(a.p[1]), project(a.p[2])};
  std::array<Eigen::Vector2d, 3> pb{project(b.p[0]), project(b.p[1]), project(b.p[2])};
  const double eps = 1e-12 * scale * scale;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (segments_cross_2d(pa[i], pa[(i + 1) % 3], pb[j], pb[(j + 1) % 3], eps)) return true;
  for (int i = 0; i < 3; ++i) {
    if (strictly_inside_2d(pb, pa[i], eps)) return true;
    if (strictly_inside_2d(pa, pb[i], eps)) return true;
  }
  return false;
}

/// Segment [p, q] against the interior of triangle t.
bool segment_hits_triangle(const Vec3& p, const Vec3& q, const Tri3& t, double scale) {
  const Vec3 n = (t.p[1] - t.p[0]).cross(t.p[2] - t.p[0]);
  const double nn = n.norm();
  if (nn == 0.0) return false;
  const double dp = n.dot(p - t.p[0]) / nn;
  const double dq = n.dot(q - t.p[0]) / nn;
  const double eps = 1e-12 * scale;
  if ((dp > eps && dq > eps) || (dp < -eps && dq < -eps)) return false;
  if (std::abs(dp) <= eps && std::abs(dq) <= eps) return false;  // coplanar: handled separately
  const double f = dp / (dp - dq);
  const Vec3 x = p + f * (q - p);
  // Barycentric test with a small inward margin.
  const Vec3 e0 = t.p[1] - t.p[0], e1 = t.p[2] - t.p[0], w = x - t.p[0];
  const double d00 = e0.dot(e0), d01 = e0.dot(e1), d11 = e1.dot(e1);
  const double d20 = w.dot(e0), d21 = w.dot(e1);
  const double denom = d00 * d11 - d01 * d01;
  if (denom <= 0.0) return false;
  const double bv = (d11 * d20 - d01 * d21) / denom;
  const double bw = (d00 * d21 - d01 * d20) / denom;
  const double bu = 1.0 - bv - bw;
  const double margin = 1e-9;
  return bu > margin && bv > margin && bw > margin;
}

bool triangles_intersect(const Tri3& a, const Tri3& b, double scale) {
  const Vec3 na = (a.p[1] - a.p[0]).cross(a.p[2] - a.p[0]);
  const Vec3 nb = (b.p[1] - b.p[0]).cross(b.p[2] - b.p[0]);
  const double la = na.norm(), lb = nb.norm();
  if (la == 0.0 || lb == 0.0) return false;
  bool coplanar = na.cross(nb).norm() <= 1e-10 * la * lb &&
                  std::abs(na.dot(b.p[0] - a.p[0])) / la <= 1e-12 * scale;
  if (coplanar) return coplanar_overlap(a, b, na, scale);
  for (int i = 0; i < 3; ++i) {
    if (segment_hits_triangle(a.p[i], a.p[(i + 1) % 3], b, scale)) return true;
    if (segment_hits_triangle(b.p[i], b.p[(i + 1) % 3], a, scale)) return true;
  }
  return false;
}

}  // namespace

bool has_self_intersection(const Mesh& mesh) {
  const int nt = mesh.num_triangles();
  const int dim = mesh.dim();
  if (dim > 3) return false;

  std::vector<Tri3> tris(static_cast<std::size_t>(nt));
  std::vector<Vec3> lo(nt), hi(nt);
  double mean_edge = 0.0;
  Vec3 gmin = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 gmax = -gmin;
  for (int t = 0; t < nt; ++t) {
    for (int k = 0; k < 3; ++k) {
      Vec3 p = Vec3::Zero();
      p.head(dim) = mesh.vertices().row(mesh.triangles()[t][k]).transpose();
      tris[t].p[k] = p;
    }
    lo[t] = tris[t].p[0].cwiseMin(tris[t].p[1]).cwiseMin(tris[t].p[2]);
    hi[t] = tris[t].p[0].cwiseMax(tris[t].p[1]).cwiseMax(tris[t].p[2]);
    gmin = gmin.cwiseMin(lo[t]);
    gmax = gmax.cwiseMax(hi[t]);
    mean_edge += (tris[t].p[1] - tris[t].p[0]).norm();
  }
  mean_edge /= std::max(nt, 1);
  const double scale = std::max((gmax - gmin).norm(), 1e-300);
  const double cell = std::max(2.0 * mean_edge, 1e-12 * scale);

  struct KeyHash {
    std::size_t operator()(const std::array<long long, 3>& k) const {
      return std::hash<long long>()(k[0] * 73856093LL ^ k[1] * 19349663LL ^ k[2] * 83492791LL);
    }
  };
  std::unordered_map<std::array<long long, 3>, std::vector<int>, KeyHash> grid;
  auto cell_of = [&](double v, int d) { return static_cast<long long>(std::floor((v - gmin[d]) / cell)); };
  for (int t = 0; t < nt; ++t) {
    for (long long i = cell_of(lo[t].x(), 0); i <= cell_of(hi[t].x(), 0); ++i)
      for (long long j = cell_of(lo[t].y(), 1); j <= cell_of(hi[t].y(), 1); ++j)
        for (long long k = cell_of(lo[t].z(), 2); k <= cell_of(hi[t].z(), 2); ++k) grid[{i, j, k}].push_back(t);
  }

  const auto& T = mesh.triangles();
  auto share_vertex = [&](int a, int b) {
    for (int i : T[a])
      for (int j : T[b])
        if (i == j) return true;
    return false;
  };
  for (const auto& [key, members] : grid) {
    for (std::size_t x = 0; x < members.size(); ++x) {
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const int a = members[x], b = members[y];
        if (((lo[a] - hi[b]).array() > 0.0).any() || ((lo[b] - hi[a]).array() > 0.0).any()) continue;
        if (share_vertex(a, b)) continue;
        if (triangles_intersect(tris[a], tris[b], scale)) return true;
      }
    }
  }
  return false;
}

}  // namespace csl
