#include <doctest.h>

#include <cmath>

#include "csl/deform.hpp"
#include "csl/error.hpp"
#include "csl/spectral.hpp"

using namespace csl;

namespace {

const Mesh& graded() {
  static const Mesh m = generate_graded_disk(1.0, 16, 1e-10);
  return m;
}

// j_{0,1}^2: Dirichlet ground state of the unit disk.
constexpr double kJ01sq = 2.4048255576957728 * 2.4048255576957728;

}  // namespace

TEST_CASE("cylinder factor profile") {
  const CylinderDeformation d{0, 0.2, 1.0};
  CHECK(d.inner_radius() == doctest::Approx(0.2 * std::exp(-5.0)));
  CHECK(cylinder_factor(0.5, d) == 1.0);
  CHECK(cylinder_factor(0.2, d) == doctest::Approx(1.0));
  CHECK(cylinder_factor(0.1, d) == doctest::Approx(2.0));
  CHECK(cylinder_factor(0.0, d) == doctest::Approx(std::exp(5.0)));
  // Continuous at the inner break.
  const double r0 = d.inner_radius();
  CHECK(cylinder_factor(r0 * (1 + 1e-12), d) == doctest::Approx(cylinder_factor(r0 * (1 - 1e-12), d)));
  CHECK_THROWS_AS(cylinder_factor(-1.0, d), Error);
  // L = 0 is the identity.
  CHECK(cylinder_factor(0.05, CylinderDeformation{0, 0.2, 0.0}) == 1.0);
}

TEST_CASE("area grows by pi eps L") {
  const Mesh& m = graded();
  const auto g = pullback(m);
  const double a0 = area(m, g);
  for (double L : {0.5, 1.0, 2.0}) {
    const double eps = 0.2;
    const auto gl = apply_cylinder(m, g, {0, eps, L});
    const double inc = area(m, gl) - a0;
    CAPTURE(L);
    CHECK(inc == doctest::Approx(M_PI * eps * L).epsilon(0.05));
  }
}

TEST_CASE("apply_cylinder preconditions") {
  const Mesh d = generate_disk(1.0, 16);
  const auto g = pullback(d);
  int interior = d.interior_vertices().front();
  CHECK_THROWS_AS(apply_cylinder(d, g, {interior, 0.2, 1.0}), Error);
  const int b = d.boundary_vertices().front();
  CHECK_THROWS_AS(apply_cylinder(d, g, {b, -0.2, 1.0}), Error);
  CHECK_THROWS_AS(apply_cylinder(d, g, {b, 0.2, -1.0}), Error);
  try {
    apply_cylinder(d, g, {b, 0.2, 1.0});
    FAIL("expected a refinement error");
  } catch (const RefinementError& e) {
    CHECK(e.code() == ErrorCode::RefinementNeeded);
    CHECK(e.required_edge_length() == doctest::Approx(0.2 * std::exp(-5.0) / 4.0));
  }
  // L = 0 needs no refinement.
  CHECK(apply_cylinder(d, g, {b, 0.2, 0.0}).factor() == g.factor());

  const auto bumpy = g.with_factor(d, random_smooth_factor(d, 0.5, 2.0, 1));
  try {
    apply_cylinder(d, bumpy, {b, 0.2, 0.0});
    FAIL("expected a non-flat rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidParameter);
  }
}

TEST_CASE("blow-up schedule on the graded disk") {
  const Mesh& m = graded();
  const auto rows = blowup_experiment(m, pullback(m), 0, 0.2, {0.0, 1.0, 2.0});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].product_dirichlet() == doctest::Approx(M_PI * kJ01sq).epsilon(0.02));
  for (const auto& r : rows) {
    CHECK(r.lambda_dirichlet > r.lambda_neumann);
    CHECK(r.product_neumann() < 8 * M_PI);
  }
  // Areas increase along the schedule; Dirichlet eigenvalues cannot drop
  // below the value of the unchanged far region.
  CHECK(rows[1].area > rows[0].area);
  CHECK(rows[2].area > rows[1].area);
  CHECK(rows[2].product_dirichlet() > rows[0].product_dirichlet());
  CHECK(blowup_csv(rows).rfind("L,lambda_D,lambda_N,area,prod_D,prod_N\n", 0) == 0);
  CHECK_THROWS_AS(blowup_experiment(m, pullback(m), 0, 0.2, {1.0, 1.0}), Error);
}

TEST_CASE("Lipschitz comparison") {
  const Mesh a = generate_annulus(0.5, 1.0, 12);
  const auto g = pullback(a);
  SUBCASE("constant factor scales exactly") {
    const std::vector<double> h(static_cast<std::size_t>(a.num_vertices()), 2.0);
    const auto r = lipschitz_comparison_check(a, g, h, 2.0);
    CHECK(r.ratio == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(r.inside_sharp);
    CHECK(r.inside_quintic);
  }
  SUBCASE("random factor stays in the sharp window") {
    const auto h = random_smooth_factor(a, 0.5, 2.0, 3);
    const auto r = lipschitz_comparison_check(a, g, h, 2.0);
    CHECK(r.ratio >= 0.5);
    CHECK(r.ratio <= 2.0);
    CHECK(r.inside_sharp);
  }
  SUBCASE("invalid input") {
    const auto h = random_smooth_factor(a, 0.5, 2.0, 3);
    CHECK_THROWS_AS(lipschitz_comparison_check(a, g, h, 1.5), Error);
    CHECK_THROWS_AS(lipschitz_comparison_check(a, g, h, 0.5), Error);
  }
}
