#include "csl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "csl/error.hpp"

namespace csl {

double heron_area(double a, double b, double c) {
  // Sort so that a >= b >= c.
  if (a < b) std::swap(a, b);
  if (a < c) std::swap(a, c);
  if (b < c) std::swap(b, c);
  const double p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return p > 0.0 ? 0.25 * std::sqrt(p) : 0.0;
}

ConformalMetric::ConformalMetric(const Mesh& mesh, std::vector<double> base_edge_lengths,
                                 std::vector<double> factor)
    : lengths_(std::move(base_edge_lengths)), factor_(std::move(factor)) {
  if (static_cast<int>(lengths_.size()) != mesh.num_edges())
    throw Error(ErrorCode::InvalidParameter, "edge length count does not match the mesh");
  if (static_cast<int>(factor_.size()) != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "conformal factor count does not match the mesh");
  for (double h : factor_)
    if (!(h > 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidParameter, "conformal factor must be > 0");
  for (double l : lengths_)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::DegenerateMetric, "edge length must be > 0");
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& e = mesh.triangle_edges()[t];
    const double a = lengths_[e[0]], b = lengths_[e[1]], c = lengths_[e[2]];
    if (!(a < b + c && b < a + c && c < a + b) || heron_area(a, b, c) <= 0.0)
      throw Error(ErrorCode::DegenerateMetric, "triangle inequality fails on face " + std::to_string(t));
  }
}

ConformalMetric ConformalMetric::with_factor(const Mesh& mesh, std::vector<double> factor) const {
  return ConformalMetric(mesh, lengths_, std::move(factor));
}

ConformalMetric ConformalMetric::times(const Mesh& mesh, const std::vector<double>& h) const {
  if (h.size() != factor_.size()) throw Error(ErrorCode::InvalidParameter, "factor size mismatch");
  std::vector<double> f(factor_);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] *= h[i];
  return ConformalMetric(mesh, lengths_, std::move(f));
}

BoundaryDensity::BoundaryDensity(const Mesh& mesh, std::vector<double> values) : values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "density count does not match the mesh");
  for (int v : mesh.boundary_vertices())
    if (!(values_[v] > 0.0) || !std::isfinite(values_[v]))
      throw Error(ErrorCode::InvalidParameter, "boundary density must be > 0");
}

BoundaryDensity BoundaryDensity::uniform(const Mesh& mesh, double value) {
  return BoundaryDensity(mesh, std::vector<double>(static_cast<std::size_t>(mesh.num_vertices()), value));
}

ConformalMetric pullback(const Immersion& immersion, const Mesh& mesh) {
  if (immersion.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  std::vector<double> lengths(static_cast<std::size_t>(mesh.num_edges()));
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges()[e];
    lengths[e] = (immersion.points.row(ed.a) - immersion.points.row(ed.b)).norm();
  }
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const double a = csl::triangle_area(immersion.points.row(tri[0]).transpose(),
                                        immersion.points.row(tri[1]).transpose(),
                                        immersion.points.row(tri[2]).transpose());
    const auto& e = mesh.triangle_edges()[t];
    const double longest = std::max({lengths[e[0]], lengths[e[1]], lengths[e[2]]});
    if (!(a > 1e-14 * longest * longest))
      throw Error(ErrorCode::DegenerateMetric, "immersed face " + std::to_string(t) + " is degenerate");
  }
  return ConformalMetric(mesh, std::move(lengths),
                         std::vector<double>(static_cast<std::size_t>(mesh.num_vertices()), 1.0));
}

double sphere_factor(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double d = 1.0 + x.squaredNorm();
  return 4.0 / (d * d);
}

double base_triangle_area(const Mesh& mesh, const ConformalMetric& metric, int t) {
  const auto& e = mesh.triangle_edges()[t];
  const auto& l = metric.base_edge_lengths();
  return heron_area(l[e[0]], l[e[1]], l[e[2]]);
}

double area(const Mesh& mesh, const ConformalMetric& metric) {
  const auto& h = metric.factor();
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    sum += base_triangle_area(mesh, metric, t) * (h[tri[0]] + h[tri[1]] + h[tri[2]]) / 3.0;
  }
  return sum;
}

double boundary_mass(const Mesh& mesh, const ConformalMetric& metric, const BoundaryDensity& rho) {
  const auto& h = metric.factor();
  const auto& l = metric.base_edge_lengths();
  double sum = 0.0;
  for (int e : mesh.boundary_edges()) {
    const Edge& ed = mesh.edges()[e];
    const double stretch = std::sqrt(0.5 * (h[ed.a] + h[ed.b]));
    sum += l[e] * stretch * 0.5 * (rho[ed.a] + rho[ed.b]);
  }
  return sum;
}

std::vector<double> random_smooth_factor(const Mesh& mesh, double lo, double hi, std::uint64_t seed) {
  if (!(lo > 0.0) || !(hi >= lo)) throw Error(ErrorCode::InvalidParameter, "factor range needs 0 < lo <= hi");
  const int n = mesh.num_vertices();
  const int m = mesh.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);

  std::vector<double> raw(static_cast<std::size_t>(n), 0.0);
  for (int wave = 0; wave < 4; ++wave) {
    Eigen::VectorXd k(m);
    for (int i = 0; i < m; ++i) k[i] = 1.5 * normal(rng);
    const double amplitude = normal(rng);
    const double shift = phase(rng);
    for (int v = 0; v < n; ++v)
      raw[static_cast<std::size_t>(v)] += amplitude * std::cos(mesh.vertices().row(v).dot(k) + shift);
  }
  const auto [mn, mx] = std::minmax_element(raw.begin(), raw.end());
  const double a = *mn, b = *mx;
  const double llo = std::log(lo), lhi = std::log(hi);
  std::vector<double> h(raw.size());
  for (std::size_t v = 0; v < raw.size(); ++v) {
    const double t = b > a ? (raw[v] - a) / (b - a) : 0.5;
    h[v] = std::clamp(std::exp(llo + t * (lhi - llo)), lo, hi);
  }
  return h;
}

}  // namespace csl
