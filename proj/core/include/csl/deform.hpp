#pragma once

#include <string>
#include <vector>

#include "csl/mesh.hpp"
#include "csl/metric.hpp"

namespace csl {

/// Conformal cylinder attached at a boundary point: the radial factor turns a
/// flat half-disk of radius epsilon into a half-cylinder of length L capped by
/// a flat piece of the same size.
struct CylinderDeformation {
  int center = 0;          // boundary vertex
  double epsilon = 0.2;    // > 0
  double length = 0.0;     // L >= 0

  /// epsilon * exp(-L / epsilon): inner break radius.
  double inner_radius() const;
};

/// eps/r on [eps e^(-L/eps), eps], e^(L/eps) inside, 1 outside.
double cylinder_factor(double r, const CylinderDeformation& d);

/// Multiplies the metric factor by cylinder_factor(|x - center|)^2. The base
/// metric must be flat near the center, the center must be a boundary
/// vertex, and for L > 0 at least 8 vertices must lie within the inner radius
/// (RefinementError otherwise).
ConformalMetric apply_cylinder(const Mesh& mesh, const ConformalMetric& metric, const CylinderDeformation& d);

struct BlowupRow {
  double length = 0.0;
  double lambda_dirichlet = 0.0;
  double lambda_neumann = 0.0;
  double area = 0.0;
  double product_dirichlet() const { return lambda_dirichlet * area; }
  double product_neumann() const { return lambda_neumann * area; }
};

/// Dirichlet and Neumann first eigenvalues along an increasing L schedule.
std::vector<BlowupRow> blowup_experiment(const Mesh& mesh, const ConformalMetric& base, int center, double epsilon,
                                         const std::vector<double>& schedule);

/// `L,lambda_D,lambda_N,area,prod_D,prod_N`.
std::string blowup_csv(const std::vector<BlowupRow>& rows);

struct LipschitzReport {
  double tau = 1.0;
  double lambda_base = 0.0;
  double lambda_scaled = 0.0;
  double ratio = 0.0;            // lambda(h g) / lambda(g)
  bool inside_sharp = false;     // [1/tau, tau]
  bool inside_quintic = false;   // [tau^-5, tau^5]
};

/// First Neumann eigenvalue of g and of h g. Requires tau >= 1 and
/// 1/tau <= h <= tau at every vertex (InvalidParameter otherwise).
LipschitzReport lipschitz_comparison_check(const Mesh& mesh, const ConformalMetric& metric,
                                           const std::vector<double>& h, double tau);

}  // namespace csl
