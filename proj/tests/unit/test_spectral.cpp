#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "csl/error.hpp"
#include "csl/spectral.hpp"

using namespace csl;

namespace {

// Squared Bessel zeros: j'_{1,1}, j'_{2,1}, j_{0,1}, j_{1,1}.
constexpr double kNeumann1 = 1.8411837813406593 * 1.8411837813406593;
constexpr double kNeumann3 = 3.0542369282271404 * 3.0542369282271404;
constexpr double kDirichlet1 = 2.4048255576957728 * 2.4048255576957728;
constexpr double kDirichlet2 = 3.8317059702075125 * 3.8317059702075125;

const Mesh& disk64() {
  static const Mesh m = generate_disk(1.0, 64);
  return m;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("disk Neumann spectrum matches Bessel zeros") {
  const FemSystem sys = assemble(disk64(), pullback(disk64()));
  const auto r = neumann_spectrum(sys, 3);
  REQUIRE(r.eigenvalues.size() == 4);
  CHECK(r.eigenvalues[0] == 0.0);
  CHECK(rel(r.eigenvalues[1], kNeumann1) < 0.01);
  CHECK(rel(r.eigenvalues[2], kNeumann1) < 0.01);
  CHECK(rel(r.eigenvalues[3], kNeumann3) < 0.01);
  for (double res : r.residuals) CHECK(res <= 1e-10);
  CHECK(r.eigenvectors.rows() == disk64().num_vertices());
}

TEST_CASE("disk Dirichlet spectrum matches Bessel zeros") {
  const FemSystem sys = assemble(disk64(), pullback(disk64()));
  const auto r = dirichlet_spectrum(sys, 2);
  CHECK(rel(r.eigenvalues[0], kDirichlet1) < 0.01);
  CHECK(rel(r.eigenvalues[1], kDirichlet2) < 0.01);
  for (int v : disk64().boundary_vertices()) CHECK(r.eigenvectors(v, 0) == 0.0);
}

TEST_CASE("Dirichlet exceeds Neumann") {
  for (const Mesh& m : {generate_disk(1.0, 16), generate_annulus(0.5, 1.0, 16)}) {
    const FemSystem sys = assemble(m, pullback(m));
    CHECK(dirichlet_spectrum(sys, 1).eigenvalues[0] > neumann_spectrum(sys, 1).eigenvalues[1]);
  }
}

TEST_CASE("disk Steklov spectrum is 0,1,1,2,2,3") {
  const FemSystem sys = assemble(disk64(), pullback(disk64()));
  const auto r = steklov_spectrum(sys, 5);
  const std::vector<double> expected{0, 1, 1, 2, 2, 3};
  REQUIRE(r.eigenvalues.size() == 6);
  CHECK(r.eigenvalues[0] == 0.0);
  for (int i = 1; i < 6; ++i) CHECK(rel(r.eigenvalues[i], expected[i]) < 0.02);
  const double perimeter = boundary_mass(disk64(), pullback(disk64()), BoundaryDensity::uniform(disk64(), 1.0));
  CHECK(rel(r.eigenvalues[1] * perimeter, 2 * M_PI) < 0.02);
}

TEST_CASE("Steklov scales inversely with a constant density") {
  const Mesh d = generate_disk(1.0, 16);
  const auto g = pullback(d);
  const auto s1 = steklov_spectrum(assemble(d, g, BoundaryDensity::uniform(d, 1.0)), 2);
  const auto s3 = steklov_spectrum(assemble(d, g, BoundaryDensity::uniform(d, 3.0)), 2);
  CHECK(s3.eigenvalues[1] == doctest::Approx(s1.eigenvalues[1] / 3.0).epsilon(1e-9));
}

TEST_CASE("Neumann scales inversely with a constant factor") {
  const Mesh d = generate_disk(1.0, 16);
  const auto g = pullback(d);
  const auto gc = g.with_factor(d, std::vector<double>(static_cast<std::size_t>(d.num_vertices()), 4.0));
  const double l1 = neumann_spectrum(assemble(d, g), 1).eigenvalues[1];
  const double l4 = neumann_spectrum(assemble(d, gc), 1).eigenvalues[1];
  CHECK(l4 == doctest::Approx(l1 / 4.0).epsilon(1e-10));
}

TEST_CASE("mass matrices integrate constants") {
  const Mesh a = generate_annulus(0.5, 1.0, 12);
  const auto g = pullback(a).with_factor(a, random_smooth_factor(a, 0.5, 2.0, 3));
  const BoundaryDensity rho(a, random_smooth_factor(a, 1.0, 3.0, 4));
  for (MassMode mode : {MassMode::Consistent, MassMode::Lumped}) {
    const FemSystem sys = assemble(a, g, rho, mode);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(sys.size());
    CHECK(one.dot(sys.mass * one) == doctest::Approx(area(a, g)).epsilon(1e-12));
    CHECK(one.dot(sys.boundary_mass * one) == doctest::Approx(boundary_mass(a, g, rho)).epsilon(1e-12));
    // Stiffness annihilates constants.
    CHECK((sys.stiffness * one).norm() < 1e-10);
  }
  const FemSystem sys = assemble(a, g, rho);
  for (int v : a.interior_vertices()) {
    for (SparseMatrix::InnerIterator it(sys.boundary_mass, v); it; ++it) CHECK(it.value() == 0.0);
  }
}

TEST_CASE("stiffness is conformally invariant") {
  const Mesh d = generate_disk(1.0, 8);
  const auto g = pullback(d);
  const auto gh = g.with_factor(d, random_smooth_factor(d, 0.2, 5.0, 11));
  CHECK((assemble(d, g).stiffness - assemble(d, gh).stiffness).norm() == 0.0);
}

TEST_CASE("Schrodinger corollary on the disk with V = x1") {
  const Mesh d = generate_disk(1.0, 32);
  const FemSystem sys = assemble(d, pullback(d));
  std::vector<double> V(static_cast<std::size_t>(d.num_vertices()));
  for (int v = 0; v < d.num_vertices(); ++v) V[static_cast<std::size_t>(v)] = d.vertices()(v, 0);
  const auto r = schrodinger_neumann_spectrum(sys, V, 2);
  // Mean of V is zero, so the bound is 2 * (4 pi / pi) = 8.
  CHECK(r.eigenvalues[1] < 8.0);
  CHECK(r.eigenvalues[0] < 0.0);  // V takes negative values
  CHECK(r.eigenvalues[0] >= -1.0);
}

TEST_CASE("problem names") {
  CHECK(problem_from_string("steklov") == Problem::Steklov);
  CHECK(to_string(Problem::Dirichlet) == "dirichlet");
  CHECK_THROWS_AS(problem_from_string("robin"), Error);
}

TEST_CASE("json layout") {
  const Mesh d = generate_disk(1.0, 8);
  const auto r = neumann_spectrum(assemble(d, pullback(d)), 2);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["problem"] == "neumann");
  CHECK(j["eigenvalues"].size() == 3);
  CHECK(j.contains("tolerances"));
  CHECK(j["discretization"]["dofs"] == d.num_vertices());
}
