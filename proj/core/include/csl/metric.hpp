#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "csl/mesh.hpp"

namespace csl {

/// Per-vertex coordinates in R^m; row i is the image of mesh vertex i. Used
/// both for immersions into R^m (the stereographic chart of S^m) and for maps
/// into the closed unit ball.
struct Immersion {
  Eigen::MatrixXd points;

  int size() const { return static_cast<int>(points.rows()); }
  int dim() const { return static_cast<int>(points.cols()); }

  /// The mesh's own vertex positions.
  static Immersion of(const Mesh& mesh) { return {mesh.vertices()}; }
};

/// g~ = h g: base edge lengths (of g) plus a per-vertex factor h > 0.
class ConformalMetric {
 public:
  /// Throws InvalidParameter on size mismatch or non-positive values and
  /// DegenerateMetric when some face violates the strict triangle inequality.
  ConformalMetric(const Mesh& mesh, std::vector<double> base_edge_lengths, std::vector<double> factor);

  const std::vector<double>& base_edge_lengths() const { return lengths_; }
  const std::vector<double>& factor() const { return factor_; }

  /// Same base metric, new factor.
  ConformalMetric with_factor(const Mesh& mesh, std::vector<double> factor) const;
  /// Factor multiplied pointwise by `h`.
  ConformalMetric times(const Mesh& mesh, const std::vector<double>& h) const;

 private:
  std::vector<double> lengths_;
  std::vector<double> factor_;
};

/// Positive density on the boundary vertices. Stored per mesh vertex; entries
/// of interior vertices are ignored.
class BoundaryDensity {
 public:
  BoundaryDensity(const Mesh& mesh, std::vector<double> values);
  static BoundaryDensity uniform(const Mesh& mesh, double value);

  const std::vector<double>& values() const { return values_; }
  double operator[](int v) const { return values_[static_cast<std::size_t>(v)]; }

 private:
  std::vector<double> values_;
};

/// Edge lengths of the immersed mesh, factor identically 1.
ConformalMetric pullback(const Immersion& immersion, const Mesh& mesh);
inline ConformalMetric pullback(const Mesh& mesh) { return pullback(Immersion::of(mesh), mesh); }

/// 4 / (1 + |x|^2)^2: the round metric of S^m in the stereographic chart.
double sphere_factor(const Eigen::Ref<const Eigen::VectorXd>& x);

/// Area of face t under the base lengths (no factor).
double base_triangle_area(const Mesh& mesh, const ConformalMetric& metric, int t);

/// Area under g~: base face area times the mean of the three vertex factors.
double area(const Mesh& mesh, const ConformalMetric& metric);

/// rho-weighted boundary length under g~. Each boundary edge contributes
/// length * sqrt((h_a + h_b) / 2) * (rho_a + rho_b) / 2.
double boundary_mass(const Mesh& mesh, const ConformalMetric& metric, const BoundaryDensity& rho);

/// Area of a triangle from its three side lengths (Kahan's stable Heron).
/// Returns 0 when the lengths violate the triangle inequality.
double heron_area(double a, double b, double c);

/// Smooth positive per-vertex factor with values spanning [lo, hi]: the
/// exponential of a few random low-frequency plane waves in the vertex
/// coordinates, affinely rescaled in log space. Deterministic in `seed`.
std::vector<double> random_smooth_factor(const Mesh& mesh, double lo, double hi, std::uint64_t seed);

}  // namespace csl
