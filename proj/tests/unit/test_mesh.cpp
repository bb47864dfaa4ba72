#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "csl/error.hpp"
#include "csl/mesh.hpp"
#include "csl/mesh_io.hpp"

using namespace csl;

TEST_CASE("minimal disk fan") {
  const Mesh m = generate_disk(1.0, 1);
  CHECK(m.euler_characteristic() == 1);
  CHECK(m.boundary_loops().size() == 1);
  CHECK(validate(m).pass);
}

TEST_CASE("topology of generated surfaces across resolutions") {
  for (int res = 3; res <= 9; ++res) {
    CAPTURE(res);
    const Mesh d = generate_disk(1.0, res);
    CHECK(d.euler_characteristic() == 1);
    CHECK(d.boundary_loops().size() == 1);
    CHECK(d.num_triangles() == 3 * res * res);
    const Mesh a = generate_annulus(0.5, 1.0, res);
    CHECK(a.euler_characteristic() == 0);
    CHECK(a.boundary_loops().size() == 2);
    CHECK(validate(a).pass);
  }
  const Mesh a32 = generate_annulus(0.5, 1.0, 32);
  CHECK(a32.euler_characteristic() == 0);
  CHECK(a32.boundary_loops().size() == 2);
}

TEST_CASE("annulus boundary lengths approximate the circles") {
  const Mesh a = generate_annulus(0.9, 1.0, 64);
  auto lengths = a.loop_lengths();
  REQUIRE(lengths.size() == 2);
  std::sort(lengths.begin(), lengths.end());
  CHECK(std::abs(lengths[0] / (2 * M_PI * 0.9) - 1.0) < 0.005);
  CHECK(std::abs(lengths[1] / (2 * M_PI) - 1.0) < 0.005);
}

TEST_CASE("disk area deficit is second order") {
  // Inscribed polygon with n sides: deficit ~ (2 pi^3 / 3) / n^2.
  for (int res : {8, 16, 32}) {
    const double d1 = M_PI - generate_disk(1.0, res).area();
    const double d2 = M_PI - generate_disk(1.0, 2 * res).area();
    CAPTURE(res);
    CHECK(d1 > 0.0);
    CHECK(d1 / d2 >= 3.0);
  }
}

TEST_CASE("ribbons: band and Moebius topology") {
  RibbonSpec s;
  s.skeleton = circle_skeleton(1.0, 128);
  s.width = 0.05;
  s.half_twists = 0;
  const Mesh band = generate_ribbon(s);
  CHECK(band.euler_characteristic() == 0);
  CHECK(band.boundary_loops().size() == 2);
  CHECK(validate(band).pass);
  CHECK_FALSE(has_self_intersection(band));
  // Developable strip: area = skeleton length x width.
  CHECK(std::abs(band.area() / (2 * M_PI * 0.05) - 1.0) < 0.02);

  s.half_twists = 1;
  const Mesh mob = generate_ribbon(s);
  CHECK(mob.euler_characteristic() == 0);
  CHECK(mob.boundary_loops().size() == 1);
  CHECK(validate(mob).pass);
  // A Moebius band of width w has boundary length ~ 2 * 2 pi.
  CHECK(std::abs(mob.loop_lengths()[0] / (4 * M_PI) - 1.0) < 0.01);

  s.half_twists = 3;
  CHECK(generate_ribbon(s).boundary_loops().size() == 1);
}

TEST_CASE("ribbon width constraint and embedding failure") {
  RibbonSpec s;
  s.skeleton = circle_skeleton(1.0, 64);
  s.width = 1.5;
  try {
    generate_ribbon(s);
    FAIL("expected a constraint violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstraintViolation);
  }

  // Figure-eight skeleton in the plane: the strip crosses itself.
  std::vector<Eigen::Vector3d> eight;
  for (int i = 0; i < 200; ++i) {
    const double t = 2 * M_PI * i / 200;
    eight.emplace_back(std::sin(t), std::sin(t) * std::cos(t), 0.0);
  }
  s.skeleton = eight;
  s.width = 0.02;
  s.samples_along = 200;
  try {
    generate_ribbon(s);
    FAIL("expected an embedding failure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmbeddingFailure);
  }
}

TEST_CASE("min curvature radius of a circle") {
  CHECK(min_curvature_radius(circle_skeleton(2.0, 100), true) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("validate flags broken meshes") {
  Eigen::MatrixXd v(5, 2);
  v << 0, 0, 1, 0, 0, 1, 0, -1, -1, 0;
  // Three triangles on edge (0,1): non-manifold.
  const Mesh nm(v, {{0, 1, 2}, {1, 0, 3}, {0, 1, 4}});
  const MeshReport r = validate(nm);
  CHECK_FALSE(r.pass);
  CHECK(r.nonmanifold_edges == 1);

  Eigen::MatrixXd w(6, 2);
  w << 0, 0, 1, 0, 0, 1, 5, 5, 6, 5, 5, 6;
  const Mesh two(w, {{0, 1, 2}, {3, 4, 5}});
  CHECK_FALSE(validate(two).connected);
  CHECK_FALSE(validate(two).pass);

  Eigen::MatrixXd d(3, 2);
  d << 0, 0, 1, 0, 2, 0;
  const Mesh flat(d, {{0, 1, 2}});
  CHECK(validate(flat).degenerate_triangles == 1);

  const Mesh declared(generate_disk(1.0, 4).vertices(), generate_disk(1.0, 4).triangles(), "custom", 0);
  CHECK_FALSE(validate(declared).euler_matches_declared);
}

TEST_CASE("equilateral triangle has quality 1") {
  Eigen::MatrixXd v(3, 2);
  v << 0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2;
  CHECK(validate(Mesh(v, {{0, 1, 2}})).min_quality == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constructor rejects bad input") {
  Eigen::MatrixXd v(3, 2);
  v << 0, 0, 1, 0, 0, 1;
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 3}}), Error);
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 1}}), Error);
  CHECK_THROWS_AS(Mesh(Eigen::MatrixXd(3, 1), {{0, 1, 2}}), Error);
}

TEST_CASE("text round trip keeps the fingerprint") {
  const Mesh m = generate_annulus(0.5, 1.0, 8);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh back = read_mesh(ss);
  CHECK(back.family() == "annulus");
  CHECK(mesh_fingerprint(back) == mesh_fingerprint(m));
  CHECK(back.vertices() == m.vertices());

  std::stringstream bad("CSLMESH 1\n3 1 2\n0 0\n1 0\n");
  CHECK_THROWS_AS(read_mesh(bad), Error);
}

TEST_CASE("fingerprint distinguishes meshes") {
  CHECK(mesh_fingerprint(generate_disk(1.0, 8)) != mesh_fingerprint(generate_disk(1.0, 9)));
  CHECK(mesh_fingerprint(generate_disk(1.0, 8)) == mesh_fingerprint(generate_disk(1.0, 8)));
}

TEST_CASE("vertex csv round trip") {
  std::stringstream ss;
  write_vertex_csv(ss, {1.5, 2.0, 0.25});
  const auto v = read_vertex_csv(ss, 4, 9.0);
  CHECK(v == std::vector<double>{1.5, 2.0, 0.25, 9.0});
  std::stringstream bad("vertex_index,value\n7,1\n");
  CHECK_THROWS_AS(read_vertex_csv(bad, 3, 1.0), Error);
}

TEST_CASE("merge welds shared vertices") {
  Eigen::MatrixXd a(3, 2), b(3, 2);
  a << 0, 0, 1, 0, 0, 1;
  b << 1, 0, 1, 1, 0, 1;
  const Mesh merged = merge_meshes({Mesh(a, {{0, 1, 2}}), Mesh(b, {{0, 1, 2}})}, 1e-9);
  CHECK(merged.num_vertices() == 4);
  CHECK(merged.euler_characteristic() == 1);
  CHECK(merged.boundary_loops().size() == 1);
}

TEST_CASE("graded disk is a valid disk with a tip at vertex 0") {
  const Mesh g = generate_graded_disk(1.0, 16, 1e-6);
  CHECK(g.euler_characteristic() == 1);
  CHECK(g.boundary_loops().size() == 1);
  CHECK(validate(g).pass);
  CHECK(g.vertex(0).norm() < 1e-15);
  CHECK(g.is_boundary_vertex(0));
  int inside = 0;
  for (int v = 0; v < g.num_vertices(); ++v) inside += g.vertex(v).norm() <= 1e-6 ? 1 : 0;
  CHECK(inside >= 8);
  CHECK(g.area() == doctest::Approx(M_PI).epsilon(0.01));
}

TEST_CASE("spherical cap areas") {
  // Cap of polar half-angle a has area 2 pi (1 - cos a).
  for (double a : {0.5, M_PI / 2, 2.5}) {
    const Mesh c = generate_spherical_cap(a, 48);
    CAPTURE(a);
    CHECK(c.area() == doctest::Approx(2 * M_PI * (1 - std::cos(a))).epsilon(0.01));
    CHECK(c.euler_characteristic() == 1);
  }
}
