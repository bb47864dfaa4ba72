#include "csl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "csl/error.hpp"

namespace csl {

namespace {

std::shared_ptr<const Topology> build_topology(int num_vertices,
                                               const std::vector<Triangle>& triangles) {
  auto topo = std::make_shared<Topology>();
  struct HalfEdge {
    int lo, hi, tri, local;
  };
  std::vector<HalfEdge> half;
  half.reserve(triangles.size() * 3);
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    const auto& tri = triangles[t];
    for (int k = 0; k < 3; ++k) {
      int a = tri[(k + 1) % 3];
      int b = tri[(k + 2) % 3];
      half.push_back({std::min(a, b), std::max(a, b), t, k});
    }
  }
  std::sort(half.begin(), half.end(), [](const HalfEdge& x, const HalfEdge& y) {
    return std::tie(x.lo, x.hi) < std::tie(y.lo, y.hi);
  });

  topo->triangle_edges.assign(triangles.size(), {-1, -1, -1});
  for (std::size_t i = 0; i < half.size();) {
    std::size_t j = i;
    while (j < half.size() && half[j].lo == half[i].lo && half[j].hi == half[i].hi) ++j;
    int id = static_cast<int>(topo->edges.size());
    topo->edges.push_back({half[i].lo, half[i].hi});
    topo->edge_face_count.push_back(static_cast<int>(j - i));
    for (std::size_t q = i; q < j; ++q) topo->triangle_edges[half[q].tri][half[q].local] = id;
    i = j;
  }

  topo->is_boundary_vertex.assign(num_vertices, 0);
  for (int e = 0; e < static_cast<int>(topo->edges.size()); ++e) {
    if (topo->edge_face_count[e] == 1) {
      topo->boundary_edges.push_back(e);
      topo->is_boundary_vertex[topo->edges[e].a] = 1;
      topo->is_boundary_vertex[topo->edges[e].b] = 1;
    }
  }

  // Orientation of each boundary edge taken from its unique triangle.
  std::vector<std::pair<int, int>> directed(topo->edges.size(), {-1, -1});
  for (int t = 0; t < static_cast<int>(triangles.size()); ++t) {
    for (int k = 0; k < 3; ++k) {
      int e = topo->triangle_edges[t][k];
      if (topo->edge_face_count[e] == 1)
        directed[e] = {triangles[t][(k + 1) % 3], triangles[t][(k + 2) % 3]};
    }
  }

  std::vector<std::vector<int>> incident(num_vertices);
  for (int e : topo->boundary_edges) {
    incident[topo->edges[e].a].push_back(e);
    incident[topo->edges[e].b].push_back(e);
  }
  for (const auto& list : incident) {
    if (!list.empty() && list.size() != 2) topo->boundary_is_manifold = false;
  }

  std::vector<char> used(topo->edges.size(), 0);
  for (int e0 : topo->boundary_edges) {
    if (used[e0]) continue;
    used[e0] = 1;
    auto [start, cur] = directed[e0];
    std::vector<int> loop{start};
    bool closed = false;
    while (true) {
      if (cur == start) {
        closed = true;
        break;
      }
      loop.push_back(cur);
      int next_edge = -1;
      for (int e : incident[cur]) {
        if (!used[e]) {
          next_edge = e;
          break;
        }
      }
      if (next_edge < 0) break;
      used[next_edge] = 1;
      const Edge& ed = topo->edges[next_edge];
      cur = (ed.a == cur) ? ed.b : ed.a;
    }
    if (!closed) topo->boundary_is_manifold = false;
    topo->boundary_loops.push_back(std::move(loop));
  }
  return topo;
}

}  // namespace

double triangle_area(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& r) {
  Eigen::VectorXd u = q - p;
  Eigen::VectorXd v = r - p;
  // Gram determinant; exact in any dimension.
  double uu = u.squaredNorm();
  double vv = v.squaredNorm();
  double uv = u.dot(v);
  double det = uu * vv - uv * uv;
  return det > 0.0 ? 0.5 * std::sqrt(det) : 0.0;
}

Mesh::Mesh(Eigen::MatrixXd vertices, std::vector<Triangle> triangles, std::string family,
           std::optional<int> declared_euler)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      family_(std::move(family)),
      declared_euler_(declared_euler) {
  if (vertices_.cols() < 2) throw Error(ErrorCode::InvalidParameter, "mesh needs ambient dimension >= 2");
  if (vertices_.rows() == 0 || triangles_.empty())
    throw Error(ErrorCode::InvalidParameter, "mesh needs at least one triangle");
  const int nv = static_cast<int>(vertices_.rows());
  for (const auto& t : triangles_) {
    for (int i : t) {
      if (i < 0 || i >= nv) throw Error(ErrorCode::InvalidParameter, "triangle index out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw Error(ErrorCode::InvalidParameter, "triangle repeats a vertex");
  }
  topology_ = build_topology(nv, triangles_);
}

Mesh::Mesh(Eigen::MatrixXd vertices, std::vector<Triangle> triangles,
           std::shared_ptr<const Topology> topology, std::string family,
           std::optional<int> declared_euler)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      topology_(std::move(topology)),
      family_(std::move(family)),
      declared_euler_(declared_euler) {}

Mesh Mesh::with_vertices(Eigen::MatrixXd vertices) const {
  if (vertices.rows() != vertices_.rows())
    throw Error(ErrorCode::InvalidParameter, "vertex count mismatch");
  if (vertices.cols() < 2) throw Error(ErrorCode::InvalidParameter, "mesh needs ambient dimension >= 2");
  return Mesh(std::move(vertices), triangles_, topology_, family_, declared_euler_);
}

std::vector<int> Mesh::boundary_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (is_boundary_vertex(v)) out.push_back(v);
  return out;
}

std::vector<int> Mesh::interior_vertices() const {
  std::vector<int> out;
  for (int v = 0; v < num_vertices(); ++v)
    if (!is_boundary_vertex(v)) out.push_back(v);
  return out;
}

int Mesh::edge_index(int a, int b) const {
  Edge key{std::min(a, b), std::max(a, b)};
  const auto& es = topology_->edges;
  auto it = std::lower_bound(es.begin(), es.end(), key, [](const Edge& x, const Edge& y) {
    return std::tie(x.a, x.b) < std::tie(y.a, y.b);
  });
  if (it != es.end() && it->a == key.a && it->b == key.b) return static_cast<int>(it - es.begin());
  return -1;
}

int Mesh::euler_characteristic() const { return num_vertices() - num_edges() + num_triangles(); }

bool Mesh::is_connected() const {
  std::vector<int> parent(num_vertices());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges()) parent[find(e.a)] = find(e.b);
  // Isolated vertices (not in any triangle) also count as components.
  int root = find(0);
  for (int v = 1; v < num_vertices(); ++v)
    if (find(v) != root) return false;
  return true;
}

double Mesh::triangle_area(int t) const {
  const auto& tri = triangles_[t];
  return csl::triangle_area(vertex(tri[0]), vertex(tri[1]), vertex(tri[2]));
}

double Mesh::area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += triangle_area(t);
  return sum;
}

double Mesh::edge_length(int e) const {
  const Edge& ed = edges()[e];
  return (vertices_.row(ed.a) - vertices_.row(ed.b)).norm();
}

std::vector<double> Mesh::loop_lengths() const {
  std::vector<double> out;
  for (const auto& loop : boundary_loops()) {
    double len = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i];
      int b = loop[(i + 1) % loop.size()];
      len += (vertices_.row(a) - vertices_.row(b)).norm();
    }
    out.push_back(len);
  }
  return out;
}

MeshReport validate(const Mesh& mesh) {
  MeshReport r;
  r.euler_characteristic = mesh.euler_characteristic();
  r.boundary_loop_count = static_cast<int>(mesh.boundary_loops().size());
  r.connected = mesh.is_connected();
  r.boundary_closed = mesh.boundary_is_manifold();
  for (int c : mesh.edge_face_count())
    if (c > 2) ++r.nonmanifold_edges;

  r.min_quality = 1.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    double a = (mesh.vertices().row(tri[1]) - mesh.vertices().row(tri[2])).norm();
    double b = (mesh.vertices().row(tri[2]) - mesh.vertices().row(tri[0])).norm();
    double c = (mesh.vertices().row(tri[0]) - mesh.vertices().row(tri[1])).norm();
    double area = mesh.triangle_area(t);
    double longest = std::max({a, b, c});
    if (!(area > 1e-14 * longest * longest)) {
      ++r.degenerate_triangles;
      r.min_quality = 0.0;
      continue;
    }
    double s = 0.5 * (a + b + c);
    double q = 8.0 * area * area / (s * a * b * c);
    r.min_quality = std::min(r.min_quality, q);
  }

  if (mesh.declared_euler())
    r.euler_matches_declared = (*mesh.declared_euler() == r.euler_characteristic);

  if (r.degenerate_triangles > 0) r.failures.push_back("degenerate-triangle");
  if (r.nonmanifold_edges > 0) r.failures.push_back("non-manifold-edge");
  if (!r.boundary_closed) r.failures.push_back("boundary-not-closed-loops");
  if (!r.connected) r.failures.push_back("disconnected");
  if (!r.euler_matches_declared) r.failures.push_back("euler-mismatch");
  r.pass = r.failures.empty();
  return r;
}

}  // namespace csl
