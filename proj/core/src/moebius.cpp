#include "csl/moebius.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "csl/error.hpp"

namespace csl {

Eigen::VectorXd to_sphere(const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double s = x.squaredNorm();
  const double d = 1.0 + s;
  Eigen::VectorXd y(x.size() + 1);
  y.head(x.size()) = (2.0 / d) * x;
  y[x.size()] = (s - 1.0) / d;
  return y;
}

Eigen::VectorXd from_sphere(const Eigen::Ref<const Eigen::VectorXd>& y) {
  const Eigen::Index m = y.size() - 1;
  const double gap = 1.0 - y[m];
  if (!(gap > 1e-14)) throw Error(ErrorCode::PointAtInfinity, "the north pole has no chart image");
  return y.head(m) / gap;
}

Eigen::MatrixXd to_sphere(const Immersion& immersion) {
  Eigen::MatrixXd out(immersion.size(), immersion.dim() + 1);
  for (int i = 0; i < immersion.size(); ++i) out.row(i) = to_sphere(immersion.points.row(i).transpose()).transpose();
  return out;
}

MoebiusElement compose(const MoebiusElement& outer, const MoebiusElement& inner) {
  return {outer.scale * inner.scale, outer.scale * inner.translation + outer.translation};
}

Immersion apply(const MoebiusElement& g, const Immersion& phi) {
  if (!(g.scale > 0.0) || !std::isfinite(g.scale))
    throw Error(ErrorCode::InvalidParameter, "Moebius scale must be finite and > 0");
  if (g.translation.size() != phi.dim())
    throw Error(ErrorCode::InvalidParameter, "translation dimension does not match the immersion");
  Immersion out{g.scale * phi.points};
  out.points.rowwise() += g.translation.transpose();
  return out;
}

double spherical_volume(const Immersion& phi, const Mesh& mesh) {
  if (phi.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  const auto& P = phi.points;
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Eigen::VectorXd a = P.row(tri[0]).transpose();
    const Eigen::VectorXd b = P.row(tri[1]).transpose();
    const Eigen::VectorXd c = P.row(tri[2]).transpose();
    const double area = triangle_area(a, b, c);
    const double longest = std::max({(a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()});
    if (!(area > 1e-14 * longest))
      throw Error(ErrorCode::DegenerateMetric, "immersed face " + std::to_string(t) + " is degenerate");
    const Eigen::VectorXd centroid = (a + b + c) / 3.0;
    sum += area * sphere_factor(centroid);
  }
  return sum;
}

double spherical_triangle_volume(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                                 const Eigen::Ref<const Eigen::VectorXd>& c) {
  // In the plane of the face the integrand depends only on the distance to
  // the foot of the perpendicular from the origin, so each edge contributes a
  // closed-form angular integral seen from that foot.
  Eigen::VectorXd e1 = b - a;
  const double l1 = e1.norm();
  if (!(l1 > 0.0)) return 0.0;
  e1 /= l1;
  Eigen::VectorXd e2 = (c - a) - (c - a).dot(e1) * e1;
  const double l2 = e2.norm();
  if (!(l2 > 1e-14 * l1)) return 0.0;
  e2 /= l2;
  const Eigen::VectorXd foot = a - a.dot(e1) * e1 - a.dot(e2) * e2;
  const double k = 1.0 + foot.squaredNorm();
  auto local = [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
    const Eigen::VectorXd r = x - foot;
    return Eigen::Vector2d(r.dot(e1), r.dot(e2));
  };
  const std::array<Eigen::Vector2d, 3> u{local(a), local(b), local(c)};
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d& P = u[i];
    const Eigen::Vector2d& Q = u[(i + 1) % 3];
    const Eigen::Vector2d e = (Q - P).normalized();
    const double p = P.x() * e.y() - P.y() * e.x();  // signed distance from the foot
    const double q = std::sqrt(k + p * p);
    sum += 2.0 * p / (k * q) * (std::atan(Q.dot(e) / q) - std::atan(P.dot(e) / q));
  }
  return std::abs(sum);
}

double spherical_volume_exact(const Immersion& phi, const Mesh& mesh) {
  if (phi.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  const auto& P = phi.points;
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Eigen::VectorXd a = P.row(tri[0]).transpose();
    const Eigen::VectorXd b = P.row(tri[1]).transpose();
    const Eigen::VectorXd c = P.row(tri[2]).transpose();
    const double longest = std::max({(a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()});
    if (!(triangle_area(a, b, c) > 1e-14 * longest))
      throw Error(ErrorCode::DegenerateMetric, "immersed face " + std::to_string(t) + " is degenerate");
    sum += spherical_triangle_volume(a, b, c);
  }
  return sum;
}

double chordal_sphere_area(const Eigen::MatrixXd& sphere_points, const Mesh& mesh) {
  double sum = 0.0;
  for (const auto& tri : mesh.triangles())
    sum += triangle_area(sphere_points.row(tri[0]).transpose(), sphere_points.row(tri[1]).transpose(),
                         sphere_points.row(tri[2]).transpose());
  return sum;
}

Eigen::VectorXd ball_dilation(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const double aa = a.squaredNorm();
  const Eigen::VectorXd d = x - a;
  const double denom = 1.0 - 2.0 * a.dot(x) + aa * x.squaredNorm();
  return ((1.0 - aa) * d - d.squaredNorm() * a) / denom;
}

Eigen::MatrixXd ball_dilation_rows(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out(points.rows(), points.cols());
  for (Eigen::Index i = 0; i < points.rows(); ++i) out.row(i) = ball_dilation(a, points.row(i).transpose()).transpose();
  return out;
}

Eigen::MatrixXd rotation_between(const Eigen::Ref<const Eigen::VectorXd>& u, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const Eigen::Index n = u.size();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const double c = u.dot(v);
  if (c > -1.0 + 1e-12) {
    const Eigen::MatrixXd K = v * u.transpose() - u * v.transpose();
    return I + K + (K * K) / (1.0 + c);
  }
  // Antipodal: half-turn in a plane containing u.
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  w[k] = 1.0;
  w -= w.dot(u) * u;
  w.normalize();
  return I - 2.0 * u * u.transpose() - 2.0 * w * w.transpose();
}

MoebiusElement reduce_dilation(const Eigen::Ref<const Eigen::VectorXd>& a) {
  const Eigen::Index d = a.size();
  const Eigen::Index m = d - 1;
  if (a.squaredNorm() == 0.0) return MoebiusElement::identity(static_cast<int>(m));
  Eigen::VectorXd north = Eigen::VectorXd::Zero(d);
  north[m] = 1.0;
  const Eigen::VectorXd u = ball_dilation(a, north).normalized();
  const Eigen::MatrixXd r = rotation_between(u, north);
  auto G = [&](const Eigen::VectorXd& x) { return from_sphere(r * ball_dilation(a, to_sphere(x))); };

  const Eigen::VectorXd t = G(Eigen::VectorXd::Zero(m));
  Eigen::MatrixXd Q(m, m);
  for (Eigen::Index j = 0; j < m; ++j) Q.col(j) = G(Eigen::VectorXd::Unit(m, j)) - t;
  const double scale = Q.colwise().norm().mean();
  Q /= scale;
  return {scale, Q.transpose() * t};
}

}  // namespace csl
