#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "csl/mesh.hpp"
#include "csl/metric.hpp"

namespace csl {

// ---------------------------------------------------------------------------
// Stereographic chart. R^m is identified with S^m minus the north pole
// e_{m+1}; the origin goes to the south pole and the unit sphere of R^m to
// the equator.

Eigen::VectorXd to_sphere(const Eigen::Ref<const Eigen::VectorXd>& x);
/// Throws PointAtInfinity at (or numerically at) the north pole.
Eigen::VectorXd from_sphere(const Eigen::Ref<const Eigen::VectorXd>& y);

/// Row-wise to_sphere.
Eigen::MatrixXd to_sphere(const Immersion& immersion);

// ---------------------------------------------------------------------------
// Reduced Moebius family: x -> scale * x + translation. Rotations of S^m are
// quotiented out; spherical volume does not see them.

struct MoebiusElement {
  double scale = 1.0;
  Eigen::VectorXd translation;

  static MoebiusElement identity(int dim) { return {1.0, Eigen::VectorXd::Zero(dim)}; }
  /// Zoom by `scale` about `center`: x -> scale * (x - center).
  static MoebiusElement zoom(double scale, const Eigen::VectorXd& center) {
    // + 0.0 turns -0 into 0 so traces print cleanly.
    return {scale, (-scale * center).array() + 0.0};
  }

  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::VectorXd>& x) const { return scale * x + translation; }
  MoebiusElement inverse() const { return {1.0 / scale, -translation / scale}; }
};

/// (outer o inner)(x) = outer(inner(x)).
MoebiusElement compose(const MoebiusElement& outer, const MoebiusElement& inner);

/// Applies x -> R x + t to every point. Throws InvalidParameter on a
/// non-positive or non-finite scale.
Immersion apply(const MoebiusElement& g, const Immersion& phi);

/// Area of the immersed mesh in the round metric of the chart:
/// sum over faces of Euclidean area times sphere_factor(centroid).
double spherical_volume(const Immersion& phi, const Mesh& mesh);

/// Exact round-metric area of one flat face of the chart.
double spherical_triangle_volume(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                                 const Eigen::Ref<const Eigen::VectorXd>& c);

/// Same quantity as spherical_volume with each face integrated in closed
/// form. Unlike the centroid rule it stays below 4 pi for any zoom, so the
/// search and the bound reports use it.
double spherical_volume_exact(const Immersion& phi, const Mesh& mesh);

/// Area of the image on the unit sphere computed face by face on the chordal
/// triangles of to_sphere(phi). Independent of the chart quadrature; used to
/// cross-check rotation invariance.
double chordal_sphere_area(const Eigen::MatrixXd& sphere_points, const Mesh& mesh);

// ---------------------------------------------------------------------------
// Sup-volume search over the reduced family.

struct SearchBudget {
  double r_min = 1e-2;
  double r_max = 1e3;
  /// Log-spaced scales between r_min and r_max (inclusive).
  int scales = 41;
  /// Zoom centers: the origin plus up to this many mesh vertices, evenly
  /// strided through the vertex list.
  int anchors = 200;
  /// Nelder-Mead refinements started from the best grid points.
  int multistarts = 8;
  /// Hard cap on spherical_volume evaluations (grid + refinement).
  int max_evaluations = 10000;
  /// Simplex size at which a refinement stops.
  double refine_tolerance = 1e-8;
  std::uint64_t seed = 1;
};

struct SearchTraceRow {
  double scale = 0.0;
  Eigen::VectorXd translation;
  double volume = 0.0;
};

struct SearchResult {
  MoebiusElement best;
  double best_volume = 0.0;
  int evaluations = 0;
  std::vector<SearchTraceRow> trace;
};

/// Maximizes spherical_volume(apply(g, phi)) over the reduced family. The
/// result is the largest value observed: a lower bound on the supremum.
/// Deterministic given the budget.
SearchResult sup_volume_search(const Immersion& phi, const Mesh& mesh, const SearchBudget& budget);

/// CSV with header `R,t_1,...,t_m,volume`.
std::string trace_csv(const SearchResult& result);

// ---------------------------------------------------------------------------
// Conformal dilations of the ball and Hersch balancing.

/// Conformal automorphism of the closed unit ball B^{m+1} sending `a`
/// (|a| < 1) to the origin; maps S^m to itself. Points near `a` are spread
/// out, so mass moves away from `a`.
Eigen::VectorXd ball_dilation(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& x);
/// Row-wise form.
Eigen::MatrixXd ball_dilation_rows(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::MatrixXd& points);

struct BalanceOptions {
  /// Stop when |weighted mean| <= tolerance * total mass.
  double tolerance = 1e-8;
  int max_iterations = 200;
};

struct BalanceResult {
  /// Unit vector p (zero for the identity).
  Eigen::VectorXd dilation_center;
  /// s in [0, 1); the dilation is ball_dilation(s p, .).
  double dilation_parameter = 0.0;
  /// |sum_i w_i y~_i| / sum_i w_i after balancing.
  double residual = 0.0;
  int iterations = 0;
  /// Balanced points y~_i (rows).
  Eigen::MatrixXd balanced;

  Eigen::VectorXd parameter() const { return dilation_parameter * dilation_center; }
};

/// Finds a dilation whose image of the weighted point set has zero weighted
/// mean. Points are rows in the closed unit ball (typically on S^m); weights
/// are non-negative with positive total. Throws InvalidParameter for a
/// measure carried by one point and ConvergenceError (with the final
/// residual) on the iteration limit.
BalanceResult hersch_balance(const Eigen::MatrixXd& points, const std::vector<double>& weights,
                             const BalanceOptions& options = {});

/// Reduced-family representative of the chart map induced by
/// ball_dilation(a, .): returns g with to_sphere(g(x)) = Q ball_dilation(a,
/// to_sphere(x)) for some rotation Q of S^m.
MoebiusElement reduce_dilation(const Eigen::Ref<const Eigen::VectorXd>& a);

/// Rotation of R^{n} taking unit vector u to unit vector v.
Eigen::MatrixXd rotation_between(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace csl
