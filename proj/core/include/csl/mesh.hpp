#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace csl {

using Triangle = std::array<int, 3>;

/// Undirected edge, always stored with a < b.
struct Edge {
  int a = 0;
  int b = 0;
};

/// Connectivity derived from the triangle list. Shared between meshes that
/// differ only in vertex positions.
struct Topology {
  std::vector<Edge> edges;
  /// triangle_edges[t][k] is the edge opposite local vertex k of triangle t.
  std::vector<std::array<int, 3>> triangle_edges;
  /// Number of triangles incident to each edge.
  std::vector<int> edge_face_count;
  std::vector<int> boundary_edges;
  std::vector<std::vector<int>> boundary_loops;
  std::vector<char> is_boundary_vertex;
  bool boundary_is_manifold = true;
};

/// Triangulated compact surface, possibly with boundary, with vertices in R^m
/// (m >= 2). Immutable; boundary loops are recomputed from the triangle list
/// whenever a new mesh is built.
class Mesh {
 public:
  /// Throws InvalidParameter for out-of-range or repeated indices, or m < 2.
  Mesh(Eigen::MatrixXd vertices, std::vector<Triangle> triangles, std::string family = "custom",
       std::optional<int> declared_euler = std::nullopt);

  int num_vertices() const { return static_cast<int>(vertices_.rows()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(topology_->edges.size()); }
  int dim() const { return static_cast<int>(vertices_.cols()); }

  /// One row per vertex.
  const Eigen::MatrixXd& vertices() const { return vertices_; }
  Eigen::VectorXd vertex(int i) const { return vertices_.row(i).transpose(); }
  const std::vector<Triangle>& triangles() const { return triangles_; }

  const std::vector<Edge>& edges() const { return topology_->edges; }
  const std::vector<std::array<int, 3>>& triangle_edges() const { return topology_->triangle_edges; }
  const std::vector<int>& edge_face_count() const { return topology_->edge_face_count; }
  const std::vector<int>& boundary_edges() const { return topology_->boundary_edges; }
  const std::vector<std::vector<int>>& boundary_loops() const { return topology_->boundary_loops; }
  bool boundary_is_manifold() const { return topology_->boundary_is_manifold; }

  bool is_boundary_vertex(int v) const { return topology_->is_boundary_vertex[v] != 0; }
  bool has_boundary() const { return !topology_->boundary_edges.empty(); }
  std::vector<int> boundary_vertices() const;
  std::vector<int> interior_vertices() const;

  /// Index of edge {a, b}, or -1.
  int edge_index(int a, int b) const;

  int euler_characteristic() const;
  bool is_connected() const;

  double triangle_area(int t) const;
  /// Euclidean area of the immersed surface.
  double area() const;
  double edge_length(int e) const;
  /// Euclidean length of each boundary loop, in loop order.
  std::vector<double> loop_lengths() const;

  const std::string& family() const { return family_; }
  const std::optional<int>& declared_euler() const { return declared_euler_; }

  /// Same connectivity, new positions (row count must match).
  Mesh with_vertices(Eigen::MatrixXd vertices) const;

 private:
  Mesh(Eigen::MatrixXd vertices, std::vector<Triangle> triangles,
       std::shared_ptr<const Topology> topology, std::string family,
       std::optional<int> declared_euler);

  Eigen::MatrixXd vertices_;
  std::vector<Triangle> triangles_;
  std::shared_ptr<const Topology> topology_;
  std::string family_;
  std::optional<int> declared_euler_;
};

/// Euclidean area of triangle (p, q, r) in any dimension.
double triangle_area(const Eigen::VectorXd& p, const Eigen::VectorXd& q, const Eigen::VectorXd& r);

// ---------------------------------------------------------------------------
// Validation

struct MeshReport {
  int euler_characteristic = 0;
  int boundary_loop_count = 0;
  /// min over triangles of 2 * inradius / circumradius (1 for equilateral).
  double min_quality = 0.0;
  int degenerate_triangles = 0;
  int nonmanifold_edges = 0;
  bool connected = false;
  bool boundary_closed = false;
  bool euler_matches_declared = true;
  bool pass = false;
  std::vector<std::string> failures;
};

MeshReport validate(const Mesh& mesh);

// ---------------------------------------------------------------------------
// Generators

/// Concentric-ring disk centered at the origin in R^2. Ring i (1..resolution)
/// carries 3i vertices, so the mesh has 3 * resolution^2 triangles.
Mesh generate_disk(double radius, int resolution);

/// Planar annulus with 3 * resolution segments per circle.
Mesh generate_annulus(double r_in, double r_out, int resolution);

/// Planar disk of the given radius centered at (-radius, 0), graded
/// logarithmically toward the boundary point at the origin (the "tip").
/// Built as the conformal image of a uniform grid on a strip, so triangles
/// keep their shape across scales. `resolution` is the number of angular
/// segments around the tip; the grid reaches at least one full ring inside
/// `tip_radius`. Vertex 0 is the tip.
Mesh generate_graded_disk(double radius, int resolution, double tip_radius);

/// Spherical cap of the unit sphere in R^3 around the south pole, with polar
/// half-angle `max_angle` in (0, pi). A value near pi gives the round sphere
/// minus a small cap around the north pole. Same ring layout as generate_disk.
Mesh generate_spherical_cap(double max_angle, int resolution);

struct RibbonSpec {
  /// Skeleton polyline in R^3.
  std::vector<Eigen::Vector3d> skeleton;
  bool closed = true;
  /// Full Euclidean width of the strip.
  double width = 0.05;
  /// 0: annulus-type band. Odd with a closed skeleton: Moebius band.
  int half_twists = 0;
  int samples_along = 128;
  int samples_across = 4;
};

/// Planar circle of radius `radius` in the xy-plane, sampled with `samples`
/// points.
std::vector<Eigen::Vector3d> circle_skeleton(double radius, int samples);

/// Smallest circumradius of consecutive skeleton triples (infinity for a
/// straight skeleton).
double min_curvature_radius(const std::vector<Eigen::Vector3d>& skeleton, bool closed);

/// Strip swept along the skeleton by a rotation-minimizing frame, with the
/// requested number of half twists. Throws ConstraintViolation when the width
/// is not below the minimal curvature radius and EmbeddingFailure when the
/// triangle intersection scan finds a self-intersection.
Mesh generate_ribbon(const RibbonSpec& spec);

/// Concatenates meshes and welds vertices closer than `weld_tolerance`.
/// Junction patches between ribbons are supplied as ordinary meshes.
Mesh merge_meshes(const std::vector<Mesh>& parts, double weld_tolerance,
                  std::optional<int> declared_euler = std::nullopt);

/// True when two triangles that share no vertex intersect.
bool has_self_intersection(const Mesh& mesh);

}  // namespace csl
