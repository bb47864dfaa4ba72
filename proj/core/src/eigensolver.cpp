#include "csl/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "csl/error.hpp"

namespace csl {

double infinity_norm(const SparseMatrix& A) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double relative_residual(const SparseMatrix& K, const SparseMatrix& M, double value,
                         const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd r = K * x - value * (M * x);
  const double scale = (infinity_norm(K) + std::abs(value) * infinity_norm(M)) * x.norm();
  return scale > 0.0 ? r.norm() / scale : r.norm();
}

namespace {

EigenPairs dense_path(const SparseMatrix& K, const SparseMatrix& M, int count) {
  const Eigen::MatrixXd Kd(K);
  const Eigen::MatrixXd Md(M);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kd, Md);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Internal, "dense generalized eigensolver failed");
  EigenPairs out;
  out.values = es.eigenvalues().head(count);
  out.vectors = es.eigenvectors().leftCols(count);
  out.method = "dense";
  return out;
}

/// Appends `w`'s columns to the M-orthonormal basis (V, MV), dropping columns
/// that are numerically dependent. Classical Gram-Schmidt, two passes.
void extend_basis(const SparseMatrix& M, Eigen::MatrixXd& V, Eigen::MatrixXd& MV, int& used,
                  const Eigen::MatrixXd& block) {
  for (int j = 0; j < block.cols(); ++j) {
    Eigen::VectorXd w = block.col(j);
    Eigen::VectorXd mw = M * w;
    const double original = std::sqrt(std::max(w.dot(mw), 0.0));
    if (!(original > 0.0)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      if (used > 0) {
        const Eigen::VectorXd c = MV.leftCols(used).transpose() * w;
        w -= V.leftCols(used) * c;
      }
      mw = M * w;
    }
    const double norm = std::sqrt(std::max(w.dot(mw), 0.0));
    if (norm <= 1e-10 * original) continue;
    V.col(used) = w / norm;
    MV.col(used) = mw / norm;
    ++used;
  }
}

EigenPairs krylov_path(const SparseMatrix& K, const SparseMatrix& M, int count, double lower_bound,
                       const EigenOptions& opt) {
  const int n = static_cast<int>(K.rows());
  const double normK = infinity_norm(K);
  const double normM = infinity_norm(M);
  // A shift a little below the spectrum keeps K - s M positive definite.
  const double gap = std::max(1e-8 * normK / std::max(normM, 1e-300), 1e-12);
  const double shift = lower_bound - std::max(gap, 1e-3 * std::abs(lower_bound));

  SparseMatrix shifted = K - shift * M;
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(shifted);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::Internal, "shift-invert factorization failed");

  const int block = std::min(n, count + std::max(4, count / 2));
  const int depth = std::max(2, opt.krylov_depth);
  const int capacity = std::min(n, block * depth);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd X(n, block);
  for (int j = 0; j < block; ++j)
    for (int i = 0; i < n; ++i) X(i, j) = gauss(rng);

  Eigen::MatrixXd V(n, capacity), MV(n, capacity);
  EigenPairs out;
  out.method = "shift-invert-block-krylov";
  double worst = 0.0;
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    int used = 0;
    extend_basis(M, V, MV, used, X);
    int block_start = 0;
    while (used < capacity) {
      const int block_end = used;
      if (block_end == block_start) break;
      const Eigen::MatrixXd rhs = MV.middleCols(block_start, block_end - block_start);
      const Eigen::MatrixXd next = ldlt.solve(rhs);
      block_start = block_end;
      const int before = used;
      Eigen::MatrixXd trimmed = next.leftCols(std::min<int>(static_cast<int>(next.cols()), capacity - used));
      extend_basis(M, V, MV, used, trimmed);
      if (used == before) break;
    }

    const Eigen::MatrixXd Vb = V.leftCols(used);
    const Eigen::MatrixXd H = Vb.transpose() * (K * Vb);
    const Eigen::MatrixXd G = Vb.transpose() * MV.leftCols(used);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (H + H.transpose()),
                                                                 0.5 * (G + G.transpose()));
    if (rr.info() != Eigen::Success) throw Error(ErrorCode::Internal, "Rayleigh-Ritz step failed");
    const int keep = std::min(block, used);
    X = Vb * rr.eigenvectors().leftCols(keep);

    out.values = rr.eigenvalues().head(count);
    out.vectors = X.leftCols(count);
    out.restarts = restart + 1;
    worst = 0.0;
    for (int j = 0; j < count; ++j) {
      const Eigen::VectorXd x = out.vectors.col(j);
      const Eigen::VectorXd r = K * x - out.values[j] * (M * x);
      const double scale = (normK + std::abs(out.values[j]) * normM) * x.norm();
      worst = std::max(worst, scale > 0.0 ? r.norm() / scale : r.norm());
    }
    if (worst <= opt.tolerance) return out;
    if (keep < block) {
      // Basis collapsed (tiny problem); refill with fresh directions.
      Eigen::MatrixXd fill(n, block);
      fill.leftCols(keep) = X;
      for (int j = keep; j < block; ++j)
        for (int i = 0; i < n; ++i) fill(i, j) = gauss(rng);
      X = fill;
    }
  }
  throw ConvergenceError("shift-invert eigensolver did not converge", worst, opt.max_restarts);
}

}  // namespace

EigenPairs smallest_eigenpairs(const SparseMatrix& K, const SparseMatrix& M, int count, double lower_bound,
                               const EigenOptions& options) {
  const int n = static_cast<int>(K.rows());
  if (count < 1 || count > n)
    throw Error(ErrorCode::InvalidParameter, "requested " + std::to_string(count) + " eigenpairs of a " +
                                                 std::to_string(n) + "-dimensional problem");
  auto residuals_of = [&](EigenPairs& pairs) {
    pairs.residuals.resize(static_cast<std::size_t>(count));
    bool ok = true;
    for (int j = 0; j < count; ++j) {
      pairs.residuals[j] = relative_residual(K, M, pairs.values[j], pairs.vectors.col(j));
      ok = ok && pairs.residuals[j] <= options.tolerance;
    }
    return ok;
  };
  if (n < options.dense_threshold) {
    EigenPairs dense = dense_path(K, M, count);
    if (residuals_of(dense)) return dense;
    // Badly conditioned mass matrices (strongly graded meshes) defeat the
    // Cholesky reduction; shift-invert does not go through M^{-1/2}.
    if (n < 2 * options.krylov_depth * count) {
      const double worst = *std::max_element(dense.residuals.begin(), dense.residuals.end());
      throw ConvergenceError("dense eigensolver residual above tolerance", worst, 1);
    }
  }
  EigenPairs out = krylov_path(K, M, count, lower_bound, options);
  residuals_of(out);
  return out;
}

}  // namespace csl
