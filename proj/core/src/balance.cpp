// Hersch-type balancing: a conformal dilation of the ball that moves the
// weighted center of mass of a point set to the origin.

#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "csl/error.hpp"
#include "csl/moebius.hpp"

namespace csl {

namespace {

Eigen::VectorXd weighted_mean(const Eigen::VectorXd& a, const Eigen::MatrixXd& points,
                              const std::vector<double>& w, double total) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if (w[i] == 0.0) continue;
    sum += w[i] * ball_dilation(a, points.row(i).transpose());
  }
  return sum / total;
}

}  // namespace

BalanceResult hersch_balance(const Eigen::MatrixXd& points, const std::vector<double>& weights,
                             const BalanceOptions& options) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  if (static_cast<Eigen::Index>(weights.size()) != n)
    throw Error(ErrorCode::InvalidParameter, "weight count does not match the point count");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorCode::InvalidParameter, "weights must be >= 0");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidParameter, "measure has zero mass");
  {
    Eigen::Index first = -1;
    double spread = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (weights[i] == 0.0) continue;
      if (first < 0) first = i;
      spread = std::max(spread, (points.row(i) - points.row(first)).norm());
    }
    if (!(spread > 1e-12)) throw Error(ErrorCode::InvalidParameter, "measure is carried by a single point");
  }

  BalanceResult out;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd c = weighted_mean(a, points, weights, total);
  double residual = c.norm();
  int it = 0;
  // Damped Newton on a -> c(a): full step first, halved until the residual
  // drops and the parameter stays inside the open ball.
  while (residual > options.tolerance) {
    if (it >= options.max_iterations)
      throw ConvergenceError("balancing did not converge; measure is close to a point mass", residual, it);
    ++it;
    Eigen::MatrixXd J(d, d);
    const double h = 1e-7 * std::max(1.0 - a.norm(), 1e-8);
    for (Eigen::Index j = 0; j < d; ++j) {
      Eigen::VectorXd ap = a, am = a;
      ap[j] += h;
      am[j] -= h;
      J.col(j) = (weighted_mean(ap, points, weights, total) - weighted_mean(am, points, weights, total)) / (2.0 * h);
    }
    Eigen::VectorXd step = J.fullPivLu().solve(-c);
    if (!step.allFinite()) step = c;  // fall back to moving toward the mass
    double alpha = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, alpha *= 0.5) {
      const Eigen::VectorXd trial = a + alpha * step;
      if (!(trial.norm() < 1.0 - 1e-14)) continue;
      const Eigen::VectorXd ct = weighted_mean(trial, points, weights, total);
      if (ct.norm() < residual) {
        a = trial;
        c = ct;
        residual = ct.norm();
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw ConvergenceError("balancing stalled; measure is close to a point mass", residual, it);
  }

  out.iterations = it;
  out.residual = residual;
  const double s = a.norm();
  out.dilation_parameter = s;
  out.dilation_center = s > 0.0 ? Eigen::VectorXd(a / s) : Eigen::VectorXd::Zero(d);
  out.balanced = s > 0.0 ? ball_dilation_rows(a, points) : points;
  return out;
}

}  // namespace csl
