#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace csl {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct EigenOptions {
  /// Relative residual ||K x - l M x|| / ((||K|| + |l| ||M||) ||x||) required
  /// of every returned pair.
  double tolerance = 1e-10;
  /// Problems with fewer unknowns use the dense generalized solver.
  int dense_threshold = 1000;
  int max_restarts = 300;
  /// Krylov blocks per restart cycle.
  int krylov_depth = 6;
  std::uint64_t seed = 0x5eed5eedULL;
};

struct EigenPairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // M-orthonormal columns
  std::vector<double> residuals;
  std::string method;
  int restarts = 0;
};

/// Smallest `count` eigenpairs of K x = l M x with K symmetric and M symmetric
/// positive definite. `lower_bound` must not exceed the smallest eigenvalue
/// (0 for positive semi-definite K); the shift-invert path factors
/// K - s M with s strictly below it. Throws ConvergenceError when the
/// residual contract cannot be met.
EigenPairs smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, int count, double lower_bound,
                               const EigenOptions& options = {});

/// Relative residual of one pair, in the norm used by EigenOptions::tolerance.
double relative_residual(const SparseMatrix& K, const SparseMatrix& M, double value,
                         const Eigen::Ref<const Eigen::VectorXd>& x);

/// Max absolute row sum.
double infinity_norm(const SparseMatrix& A);

}  // namespace csl
