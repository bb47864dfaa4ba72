#include "csl/deform.hpp"

#include <cmath>
#include <cstdio>

#include "csl/error.hpp"
#include "csl/spectral.hpp"

namespace csl {

double CylinderDeformation::inner_radius() const { return epsilon * std::exp(-length / epsilon); }

double cylinder_factor(double r, const CylinderDeformation& d) {
  if (!(r >= 0.0)) throw Error(ErrorCode::InvalidParameter, "radial distance must be >= 0");
  if (r > d.epsilon) return 1.0;
  const double r0 = d.inner_radius();
  if (r >= r0) return d.epsilon / r;
  return std::exp(d.length / d.epsilon);
}

namespace {

void check_deformation(const Mesh& mesh, const CylinderDeformation& d) {
  if (!(d.epsilon > 0.0) || !std::isfinite(d.epsilon))
    throw Error(ErrorCode::InvalidParameter, "epsilon must be finite and > 0");
  if (!(d.length >= 0.0) || !std::isfinite(d.length))
    throw Error(ErrorCode::InvalidParameter, "cylinder length must be finite and >= 0");
  if (d.center < 0 || d.center >= mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "cylinder center is not a vertex");
  if (!mesh.is_boundary_vertex(d.center))
    throw Error(ErrorCode::InvalidParameter, "cylinder center must be a boundary vertex");
}

/// Flatness near the center: base lengths match the chart and the factor is
/// constant on every face touching the epsilon-ball.
void check_flat(const Mesh& mesh, const ConformalMetric& metric, const CylinderDeformation& d,
                const std::vector<double>& dist) {
  const auto& len = metric.base_edge_lengths();
  const auto& h = metric.factor();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    if (dist[tri[0]] > d.epsilon && dist[tri[1]] > d.epsilon && dist[tri[2]] > d.epsilon) continue;
    for (int k = 0; k < 3; ++k) {
      const int e = mesh.triangle_edges()[t][k];
      const double chart = mesh.edge_length(e);
      if (std::abs(len[e] - chart) > 1e-8 * chart)
        throw Error(ErrorCode::InvalidParameter, "base metric is not flat near the cylinder center");
      if (std::abs(h[tri[k]] - h[tri[0]]) > 1e-8 * h[tri[0]])
        throw Error(ErrorCode::InvalidParameter, "conformal factor is not constant near the cylinder center");
    }
  }
}

}  // namespace

ConformalMetric apply_cylinder(const Mesh& mesh, const ConformalMetric& metric, const CylinderDeformation& d) {
  check_deformation(mesh, d);
  const int n = mesh.num_vertices();
  const Eigen::RowVectorXd c = mesh.vertices().row(d.center);
  std::vector<double> dist(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) dist[v] = (mesh.vertices().row(v) - c).norm();
  check_flat(mesh, metric, d, dist);

  if (d.length > 0.0) {
    const double r0 = d.inner_radius();
    int inside = 0;
    for (double r : dist) inside += r <= r0 ? 1 : 0;
    if (inside < 8)
      throw RefinementError("only " + std::to_string(inside) + " vertices inside the cylinder tip radius",
                            r0 / 4.0);
  }

  std::vector<double> factor = metric.factor();
  for (int v = 0; v < n; ++v) {
    const double h = cylinder_factor(dist[v], d);
    factor[v] *= h * h;
  }
  return metric.with_factor(mesh, std::move(factor));
}

std::vector<BlowupRow> blowup_experiment(const Mesh& mesh, const ConformalMetric& base, int center, double epsilon,
                                         const std::vector<double>& schedule) {
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (!(schedule[i] > schedule[i - 1]))
      throw Error(ErrorCode::InvalidParameter, "L schedule must be strictly increasing");
  std::vector<BlowupRow> rows;
  for (double L : schedule) {
    const ConformalMetric g = apply_cylinder(mesh, base, {center, epsilon, L});
    const FemSystem sys = assemble(mesh, g);
    BlowupRow row;
    row.length = L;
    row.lambda_dirichlet = dirichlet_spectrum(sys, 1).eigenvalues.at(0);
    row.lambda_neumann = neumann_spectrum(sys, 1).eigenvalues.at(1);
    row.area = area(mesh, g);
    rows.push_back(row);
  }
  return rows;
}

std::string blowup_csv(const std::vector<BlowupRow>& rows) {
  std::string out = "L,lambda_D,lambda_N,area,prod_D,prod_N\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.length, r.lambda_dirichlet,
                  r.lambda_neumann, r.area, r.product_dirichlet(), r.product_neumann());
    out += buf;
  }
  return out;
}

LipschitzReport lipschitz_comparison_check(const Mesh& mesh, const ConformalMetric& metric,
                                           const std::vector<double>& h, double tau) {
  if (!(tau >= 1.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidParameter, "tau must be finite and >= 1");
  if (static_cast<int>(h.size()) != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "factor size does not match the mesh");
  const double slack = 1e-12;
  for (double v : h)
    if (!(v >= (1.0 - slack) / tau && v <= tau * (1.0 + slack)))
      throw Error(ErrorCode::InvalidParameter, "factor leaves [1/tau, tau]");

  LipschitzReport r;
  r.tau = tau;
  r.lambda_base = neumann_spectrum(assemble(mesh, metric), 1).eigenvalues.at(1);
  r.lambda_scaled = neumann_spectrum(assemble(mesh, metric.times(mesh, h)), 1).eigenvalues.at(1);
  r.ratio = r.lambda_scaled / r.lambda_base;
  // Solver noise only; the discrete bound itself is exact.
  const double tol = 1e-8;
  r.inside_sharp = r.ratio >= 1.0 / tau - tol && r.ratio <= tau + tol;
  r.inside_quintic = r.ratio >= std::pow(tau, -5.0) - tol && r.ratio <= std::pow(tau, 5.0) + tol;
  return r;
}

}  // namespace csl
