#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "csl/error.hpp"
#include "csl/moebius.hpp"

using namespace csl;

namespace {

/// Reference integral of 4 / (1 + |x|^2)^2 over a flat triangle: centroid
/// rule on a 4^depth uniform subdivision.
double subdivided(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c, int n) {
  double sum = 0.0;
  const Eigen::VectorXd u = (b - a) / n, v = (c - a) / n;
  const double cell = triangle_area(a, a + u, a + v);
  for (int i = 0; i < n; ++i)
    for (int j = 0; i + j < n; ++j) {
      const Eigen::VectorXd p = a + i * u + j * v;
      sum += cell * sphere_factor(p + (u + v) / 3.0);
      if (i + j + 1 < n) sum += cell * sphere_factor(p + (2.0 * u + 2.0 * v) / 3.0);
    }
  return sum;
}

Immersion rotated(const Immersion& phi, const Eigen::MatrixXd& Q) {
  const Eigen::MatrixXd s = to_sphere(phi);
  Immersion out{Eigen::MatrixXd(phi.size(), phi.dim())};
  for (int i = 0; i < phi.size(); ++i) out.points.row(i) = from_sphere(Q * s.row(i).transpose()).transpose();
  return out;
}

}  // namespace

TEST_CASE("chart conventions") {
  const auto s = to_sphere(Eigen::Vector2d(0, 0));
  CHECK(s[0] == 0.0);
  CHECK(s[2] == -1.0);
  const auto e = to_sphere(Eigen::Vector2d(0.6, 0.8));
  CHECK(std::abs(e[2]) < 1e-16);
  CHECK(e.norm() == doctest::Approx(1.0));
  CHECK_THROWS_AS(from_sphere(Eigen::Vector3d(0, 0, 1)), Error);
  try {
    from_sphere(Eigen::Vector3d(0, 0, 1));
  } catch (const Error& err) {
    CHECK(err.code() == ErrorCode::PointAtInfinity);
  }
}

TEST_CASE("round trip on random points") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> n(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d x(n(rng), n(rng), n(rng));
    worst = std::max(worst, (from_sphere(to_sphere(x)) - x).norm() / std::max(1.0, x.norm()));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("reduced family group laws") {
  Immersion phi{Eigen::MatrixXd::Random(20, 2)};
  const auto id = apply(MoebiusElement::identity(2), phi);
  CHECK(id.points == phi.points);
  const MoebiusElement two{2.0, Eigen::Vector2d::Zero()}, half{0.5, Eigen::Vector2d::Zero()};
  CHECK((apply(half, apply(two, phi)).points - phi.points).norm() < 1e-15);
  const MoebiusElement g1{1.7, Eigen::Vector2d(0.3, -1.0)}, g2{0.4, Eigen::Vector2d(2.0, 0.5)};
  const auto lhs = apply(g2, apply(g1, phi));
  const auto rhs = apply(compose(g2, g1), phi);
  CHECK((lhs.points - rhs.points).norm() < 1e-13);
  const auto g12 = compose(g2, g1);
  CHECK(g12.scale == doctest::Approx(0.68));
  CHECK((g12.translation - (0.4 * Eigen::Vector2d(0.3, -1.0) + Eigen::Vector2d(2.0, 0.5))).norm() < 1e-15);
  CHECK((apply(compose(g1.inverse(), g1), phi).points - phi.points).norm() < 1e-13);
  CHECK_THROWS_AS(apply(MoebiusElement{0.0, Eigen::Vector2d::Zero()}, phi), Error);
}

TEST_CASE("spherical volume of disks: analytic family 4 pi R^2 / (1 + R^2)") {
  const Mesh d = generate_disk(1.0, 64);
  const Immersion phi = Immersion::of(d);
  CHECK(spherical_volume(phi, d) == doctest::Approx(2 * M_PI).epsilon(0.001));
  const Immersion three = apply({3.0, Eigen::Vector2d::Zero()}, phi);
  CHECK(spherical_volume(three, d) == doctest::Approx(3.6 * M_PI).epsilon(0.002));
  CHECK(spherical_volume_exact(three, d) == doctest::Approx(3.6 * M_PI).epsilon(0.002));

  double prev = INFINITY;
  for (double t = 10.0; t <= 80.0; t *= 2.0) {
    const double v = spherical_volume(apply({1.0, Eigen::Vector2d(t, 0.0)}, phi), d);
    CHECK(v < prev);
    prev = v;
    if (t == 10.0) CHECK(v < 0.2);
  }
}

TEST_CASE("exact face integral matches a refined quadrature") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = trial % 2 ? 3 : 2;
    Eigen::VectorXd a(m), b(m), c(m);
    for (int i = 0; i < m; ++i) {
      a[i] = n(rng);
      b[i] = n(rng);
      c[i] = n(rng);
    }
    CAPTURE(trial);
    CHECK(spherical_triangle_volume(a, b, c) == doctest::Approx(subdivided(a, b, c, 400)).epsilon(1e-5));
  }
  // A huge triangle around the origin covers almost the whole sphere.
  const Eigen::Vector2d p(-1e6, -1e6), q(1e6, -1e6), r(0.0, 1e6);
  CHECK(spherical_triangle_volume(p, q, r) == doctest::Approx(4 * M_PI).epsilon(1e-5));
  CHECK(spherical_triangle_volume(p, q, r) < 4 * M_PI);
}

TEST_CASE("monotone exhaustion under zoom") {
  const Mesh d = generate_disk(1.0, 16);
  double prev = 0.0;
  for (double R = 0.1; R <= 1e3; R *= 3.0) {
    const double v = spherical_volume_exact(apply({R, Eigen::Vector2d::Zero()}, Immersion::of(d)), d);
    CHECK(v > prev);
    CHECK(v < 4 * M_PI);
    prev = v;
  }
}

TEST_CASE("rotation invariance") {
  const Mesh d = generate_disk(1.0, 32);
  const Immersion phi = Immersion::of(d);
  // Rotations fixing the poles act linearly on the chart: exact for both rules.
  const double th = 0.7;
  Eigen::Matrix3d Rz;
  Rz << std::cos(th), -std::sin(th), 0, std::sin(th), std::cos(th), 0, 0, 0, 1;
  const Immersion spun = rotated(phi, Rz);
  CHECK(std::abs(spherical_volume(spun, d) - spherical_volume(phi, d)) < 1e-10);
  CHECK(std::abs(spherical_volume_exact(spun, d) - spherical_volume_exact(phi, d)) < 1e-10);

  // A general rotation: chordal areas on the sphere are invariant to 1e-10,
  // chart quadratures to discretization accuracy.
  const Eigen::Matrix3d Q = Eigen::AngleAxisd(1.1, Eigen::Vector3d(1, 2, 0.5).normalized()).toRotationMatrix();
  const Eigen::MatrixXd s = to_sphere(phi);
  const Eigen::MatrixXd sq = (Q * s.transpose()).transpose();
  CHECK(std::abs(chordal_sphere_area(sq, d) - chordal_sphere_area(s, d)) < 1e-10);
  const Immersion tilted = rotated(phi, Q);
  CHECK(spherical_volume_exact(tilted, d) == doctest::Approx(spherical_volume_exact(phi, d)).epsilon(2e-3));
}

TEST_CASE("degenerate immersion is rejected") {
  const Mesh d = generate_disk(1.0, 2);
  Immersion flat{Eigen::MatrixXd::Zero(d.num_vertices(), 2)};
  try {
    spherical_volume(flat, d);
    FAIL("expected degenerate metric");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateMetric);
  }
}

TEST_CASE("sup-volume search") {
  const Mesh d = generate_disk(1.0, 8);
  SearchBudget b;
  b.anchors = 20;
  b.max_evaluations = 1500;
  const auto r1 = sup_volume_search(Immersion::of(d), d, b);
  const auto r2 = sup_volume_search(Immersion::of(d), d, b);
  CHECK(r1.best_volume == r2.best_volume);
  CHECK(trace_csv(r1) == trace_csv(r2));
  CHECK(r1.evaluations <= 1500);
  CHECK(r1.trace.size() == static_cast<std::size_t>(r1.evaluations));
  const double Rmax = b.r_max;
  CHECK(r1.best_volume == doctest::Approx(4 * M_PI * Rmax * Rmax / (1 + Rmax * Rmax)).epsilon(1e-3));
  CHECK(r1.best_volume < 4 * M_PI);
  CHECK(trace_csv(r1).rfind("R,t_1,t_2,volume\n", 0) == 0);

  SearchBudget finer = b;
  finer.scales = 81;
  finer.max_evaluations = 3000;
  CHECK(sup_volume_search(Immersion::of(d), d, finer).best_volume >= r1.best_volume - 1e-12);
}

TEST_CASE("balancing") {
  SUBCASE("antipodally symmetric measure is already balanced") {
    Eigen::MatrixXd p(6, 3);
    p << 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1;
    const auto r = hersch_balance(p, std::vector<double>(6, 1.0));
    CHECK(r.dilation_parameter == 0.0);
    CHECK(r.residual == 0.0);
  }
  SUBCASE("circle of latitude: closed-form axial dilation") {
    // T_{s e3} sends height z0 to the equator when z0 s^2 - 2 s + z0 = 0.
    const double z0 = 0.6;
    const int n = 64;
    Eigen::MatrixXd p(n, 3);
    for (int i = 0; i < n; ++i) {
      const double t = 2 * M_PI * i / n;
      p.row(i) << 0.8 * std::cos(t), 0.8 * std::sin(t), z0;
    }
    const auto r = hersch_balance(p, std::vector<double>(n, 1.0));
    const double s = (1.0 - std::sqrt(1.0 - z0 * z0)) / z0;
    CHECK(r.residual <= 1e-8);
    CHECK(r.parameter()[2] == doctest::Approx(s).epsilon(1e-7));
    CHECK(std::abs(r.parameter()[0]) < 1e-9);
    CHECK(r.balanced.col(2).cwiseAbs().maxCoeff() < 1e-7);
  }
  SUBCASE("balancing is a projection") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n;
    Eigen::MatrixXd p(30, 3);
    std::vector<double> w(30);
    for (int i = 0; i < 30; ++i) {
      p.row(i) = Eigen::Vector3d(n(rng) + 1.0, n(rng), n(rng)).normalized().transpose();
      w[static_cast<std::size_t>(i)] = 1.0 + std::abs(n(rng));
    }
    const auto r = hersch_balance(p, w);
    CHECK(r.residual <= 1e-8);
    const auto again = hersch_balance(r.balanced, w);
    CHECK(again.dilation_parameter < 1e-7);
  }
  SUBCASE("invalid measures") {
    Eigen::MatrixXd p(3, 3);
    p << 1, 0, 0, 0, 1, 0, 0, 0, 1;
    CHECK_THROWS_AS(hersch_balance(p, {1.0, 0.0, 0.0}), Error);
    CHECK_THROWS_AS(hersch_balance(p, {-1.0, 1.0, 1.0}), Error);
    // More than half the mass on one point: no balanced position exists.
    try {
      hersch_balance(p, {10.0, 1.0, 1.0});
      FAIL("expected non-convergence");
    } catch (const ConvergenceError& e) {
      CHECK(e.residual() > 1e-8);
      CHECK(e.code() == ErrorCode::IterationLimit);
    }
  }
}

TEST_CASE("ball dilation maps the sphere to itself and a to the origin") {
  const Eigen::Vector3d a(0.2, -0.3, 0.5);
  CHECK(ball_dilation(a, a).norm() < 1e-15);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    const Eigen::Vector3d x = Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
    CHECK(ball_dilation(a, x).norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("reduced representative of a dilation") {
  const Eigen::Vector3d a(0.3, -0.1, 0.4);
  const MoebiusElement g = reduce_dilation(a);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 2.0);
  // Same map up to a rotation: pairwise chordal distances agree.
  std::vector<Eigen::Vector2d> xs;
  for (int i = 0; i < 20; ++i) xs.emplace_back(n(rng), n(rng));
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = i + 1; j < xs.size(); ++j) {
      const double lhs = (to_sphere(g(xs[i])) - to_sphere(g(xs[j]))).norm();
      const double rhs = (ball_dilation(a, to_sphere(xs[i])) - ball_dilation(a, to_sphere(xs[j]))).norm();
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("rotation between unit vectors") {
  const Eigen::Vector3d u = Eigen::Vector3d(1, 2, 3).normalized(), v = Eigen::Vector3d(-2, 0, 1).normalized();
  const Eigen::MatrixXd R = rotation_between(u, v);
  CHECK((R * u - v).norm() < 1e-14);
  CHECK((R.transpose() * R - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-14);
  CHECK(R.determinant() == doctest::Approx(1.0));
  const Eigen::MatrixXd F = rotation_between(u, -u);
  CHECK((F * u + u).norm() < 1e-14);
  CHECK(F.determinant() == doctest::Approx(1.0));
}
