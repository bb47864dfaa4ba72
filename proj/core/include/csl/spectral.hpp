#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "csl/eigensolver.hpp"
#include "csl/mesh.hpp"
#include "csl/metric.hpp"

namespace csl {

enum class Problem { Neumann, Dirichlet, Steklov, Schrodinger };
std::string_view to_string(Problem p);
Problem problem_from_string(std::string_view name);

enum class MassMode { Consistent, Lumped };

/// Linear finite elements for (M, h g, rho). Degrees of freedom are the mesh
/// vertices, in mesh order.
struct FemSystem {
  /// Cotangent stiffness from the base lengths; independent of h.
  SparseMatrix stiffness;
  /// Mass of dv_{hg}.
  SparseMatrix mass;
  /// rho-weighted mass of the boundary under hg; zero off the boundary.
  SparseMatrix boundary_mass;
  std::vector<int> boundary_dofs;
  std::vector<int> interior_dofs;

  MassMode mass_mode = MassMode::Consistent;
  /// Per face: base area times mean factor. Used to weight potentials.
  std::vector<double> weighted_face_area;
  std::vector<Triangle> triangles;
  std::string mesh_fingerprint;

  int size() const { return static_cast<int>(stiffness.rows()); }
};

FemSystem assemble(const Mesh& mesh, const ConformalMetric& metric, const BoundaryDensity& rho,
                   MassMode mode = MassMode::Consistent);
/// Convenience for closed-boundary-agnostic problems: rho = 1.
FemSystem assemble(const Mesh& mesh, const ConformalMetric& metric, MassMode mode = MassMode::Consistent);

struct SpectrumResult {
  Problem problem = Problem::Neumann;
  /// Ascending.
  std::vector<double> eigenvalues;
  /// One column per eigenvalue, one row per mesh vertex. Dirichlet vectors are
  /// zero on the boundary; Steklov vectors are harmonic extensions.
  Eigen::MatrixXd eigenvectors;
  std::vector<double> residuals;
  /// 1e-8 * max(largest eigenvalue, 1); eigenvalues below it in magnitude
  /// are reported as exact zeros for Neumann and Steklov.
  double zero_tolerance = 0.0;
  double solver_tolerance = 0.0;
  std::string method;
  int dofs = 0;
  std::string mesh_fingerprint;
};

/// First k+1 eigenvalues of K v = l A v (l_0 = 0).
SpectrumResult neumann_spectrum(const FemSystem& sys, int k, const EigenOptions& options = {});

/// First k eigenvalues with boundary rows and columns removed.
SpectrumResult dirichlet_spectrum(const FemSystem& sys, int k, const EigenOptions& options = {});

/// First k+1 eigenvalues of the discrete Dirichlet-to-Neumann map
/// S = K_bb - K_bi K_ii^-1 K_ib against B_bb.
SpectrumResult steklov_spectrum(const FemSystem& sys, int k, const EigenOptions& options = {});

/// First k+1 eigenvalues of (K + A_V) v = l A v, where A_V is the mass matrix
/// weighted by the per-vertex potential (face mean).
SpectrumResult schrodinger_neumann_spectrum(const FemSystem& sys, const std::vector<double>& potential, int k,
                                            const EigenOptions& options = {});

/// Mass matrix weighted by a per-vertex function w (face mean of w times the
/// face's mass), in the system's mass mode.
SparseMatrix weighted_mass(const FemSystem& sys, const std::vector<double>& w);

/// JSON document: problem tag, eigenvalues, tolerances, mesh fingerprint.
/// Discretization details (dofs, residuals, method) sit under
/// "discretization".
std::string to_json(const SpectrumResult& result);

}  // namespace csl
