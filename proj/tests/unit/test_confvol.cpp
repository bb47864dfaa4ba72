#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "csl/confvol.hpp"
#include "csl/error.hpp"
#include "csl/spectral.hpp"

using namespace csl;

namespace {

// j'_{1,1}^2: first nonzero Neumann eigenvalue of the unit disk.
constexpr double kNeumannDisk = 1.8411837813406593 * 1.8411837813406593;

std::vector<double> constant(const Mesh& m, double c) {
  return std::vector<double>(static_cast<std::size_t>(m.num_vertices()), c);
}

}  // namespace

TEST_CASE("constants") {
  CHECK(sphere_area() == doctest::Approx(4 * M_PI));
  CHECK(global_bound() == doctest::Approx(8 * M_PI));
  CHECK(kVolumeExponent == 1.0);
  CHECK(kSteklovVolumeExponent == 0.0);
}

TEST_CASE("flat disk: left side is pi j'11^2 and the bound holds") {
  const Mesh d = generate_disk(1.0, 32);
  const ConformalMetric g = pullback(d);
  const BoundReport r = neumann_bound_report(d, g, Immersion::of(d));
  CHECK(r.left == doctest::Approx(M_PI * kNeumannDisk).epsilon(0.01));
  CHECK(r.margin_lemma() > 0.0);
  CHECK(r.margin_global() > 0.0);
  CHECK(r.eigenvalue <= r.rayleigh_bound * (1 + 1e-12));
  CHECK(r.balance_witness.has_value());
  CHECK(r.moebius_witness.has_value());
  CHECK(r.conformality_deviation < 1e-10);
  CHECK_FALSE(r.conformality_warning);

  // A constant rescaling of the metric leaves every quantity alone.
  const BoundReport rc = neumann_bound_report(d, g.with_factor(d, constant(d, 3.7)), Immersion::of(d));
  CHECK(rc.left == doctest::Approx(r.left).epsilon(1e-8));
  CHECK(rc.right_lemma == doctest::Approx(r.right_lemma).epsilon(1e-8));
  CHECK(rc.conformal_class == r.conformal_class);
}

TEST_CASE("annulus with random smooth factors satisfies the lemma") {
  const Mesh a = generate_annulus(0.5, 1.0, 24);
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    CAPTURE(seed);
    const auto g = pullback(a).with_factor(a, random_smooth_factor(a, 0.5, 2.0, seed));
    const BoundReport r = neumann_bound_report(a, g, Immersion::of(a));
    CHECK(r.margin_lemma() > 0.0);
    CHECK(r.margin_global() > 0.0);
    CHECK(r.eigenvalue <= r.rayleigh_bound * (1 + 1e-12));
    CHECK(r.right_lemma <= 2 * sphere_area());
  }
}

TEST_CASE("Steklov on the disk with the equatorial immersion") {
  const Mesh d = generate_disk(1.0, 32);
  const ConformalMetric g = pullback(d);
  const auto rho = BoundaryDensity::uniform(d, 1.0);
  const BoundReport r = steklov_bound_report(d, g, rho, equatorial_ball_immersion(d));
  // sigma_1 L = 2 pi; the flat disk is the equality case.
  CHECK(r.left == doctest::Approx(2 * M_PI).epsilon(0.01));
  CHECK(r.right_lemma == doctest::Approx(2 * M_PI).epsilon(0.01));
  CHECK(r.eigenvalue <= r.rayleigh_bound * (1 + 1e-12));

  const BoundReport r2 = steklov_bound_report(d, g, BoundaryDensity::uniform(d, 2.5), equatorial_ball_immersion(d));
  CHECK(r2.left == doctest::Approx(r.left).epsilon(1e-9));
}

TEST_CASE("Steklov on the annulus with a stereographic ball map") {
  const Mesh a = generate_annulus(0.5, 1.0, 16);
  const auto g = pullback(a);
  const auto rho = BoundaryDensity::uniform(a, 1.0);
  const Immersion phi = stereographic_ball_immersion(a, 1.0);
  const BoundReport r = steklov_bound_report(a, g, rho, phi);
  CHECK(r.left < 8 * M_PI);
  CHECK(r.eigenvalue <= r.rayleigh_bound * (1 + 1e-12));

  Immersion shrunk{0.5 * phi.points};
  try {
    steklov_bound_report(a, g, rho, shrunk);
    FAIL("expected InvalidImmersion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidImmersion);
  }
}

TEST_CASE("conformal energy equals twice the image area for conformal maps") {
  const Mesh d = generate_disk(1.0, 16);
  const auto g = pullback(d);
  const EnergyReport id = conformal_energy(Immersion::of(d), d, g);
  CHECK(id.deviation <= 1e-10);
  CHECK(id.image_area == doctest::Approx(d.area()));

  const EnergyReport twice = conformal_energy(Immersion{2.0 * d.vertices()}, d, g);
  CHECK(twice.energy == doctest::Approx(4.0 * id.energy).epsilon(1e-12));

  // Stereographic image of the unit disk: a hemisphere, conformal in the
  // limit. The discrete deviation shrinks with refinement.
  const Mesh d64 = generate_disk(1.0, 64), d128 = generate_disk(1.0, 128);
  const double dev64 = conformal_energy(stereographic_ball_immersion(d64, 1.0), d64, pullback(d64)).deviation;
  const double dev128 = conformal_energy(stereographic_ball_immersion(d128, 1.0), d128, pullback(d128)).deviation;
  CHECK(dev64 <= 0.02);
  CHECK(dev128 < dev64);
  CHECK(immersed_area(stereographic_ball_immersion(d64, 1.0), d64) == doctest::Approx(2 * M_PI).epsilon(0.01));
}

TEST_CASE("round cap metrics approach but stay below 8 pi") {
  // h = 4 / (1 + R^2 |x|^2)^2 * R^2 pulls back the round sphere onto a cap
  // whose size grows with R.
  const Mesh d = generate_disk(1.0, 24);
  std::vector<BoundReport> reports;
  double prev = 0.0;
  for (double R : {0.5, 1.0, 2.0, 4.0}) {
    std::vector<double> h(static_cast<std::size_t>(d.num_vertices()));
    for (int v = 0; v < d.num_vertices(); ++v)
      h[static_cast<std::size_t>(v)] = R * R * sphere_factor(Eigen::VectorXd(R * d.vertex(v)));
    const auto r = neumann_bound_report(d, pullback(d).with_factor(d, h), Immersion::of(d));
    CAPTURE(R);
    CHECK(r.left > prev);
    CHECK(r.left < 8 * M_PI);
    CHECK(r.margin_lemma() > 0.0);
    prev = r.left;
    reports.push_back(r);
  }
  const auto rows = witness_summary(reports);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].invariant == "nu");
  CHECK(rows[0].side == "lower");
  CHECK(rows[0].samples == 4);
  CHECK(rows[0].best == doctest::Approx(prev));
  CHECK(rows[0].consistent);
  CHECK(witness_summary({}).empty());
}

TEST_CASE("sup-volume report on a Moebius ribbon") {
  RibbonSpec s;
  s.skeleton = circle_skeleton(1.0, 32);
  s.width = 0.1;
  s.samples_along = 32;
  s.half_twists = 1;
  const Mesh mob = generate_ribbon(s);
  SearchBudget b;
  b.max_evaluations = 400;
  b.anchors = 10;
  const BoundReport r = sup_volume_report(mob, Immersion::of(mob), b);
  CHECK(r.kind == BoundKind::SupVolume);
  CHECK(r.right_global == doctest::Approx(4 * M_PI));
  CHECK(r.left > 0.0);
  CHECK(r.left < 4 * M_PI);
  const auto rows = witness_summary({r});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].invariant == "V_M");
  CHECK(rows[0].side == "upper");
  CHECK(witness_csv(rows).rfind("invariant,", 0) == 0);
}

TEST_CASE("serialization") {
  const Mesh d = generate_disk(1.0, 8);
  const BoundReport r = neumann_bound_report(d, pullback(d), Immersion::of(d));
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j["kind"] == "neumann");
  CHECK(j["left"].get<double>() == r.left);
  const std::string csv = sweep_csv({{"h0", r}});
  CHECK(csv.rfind("h_id,left,right_lemma,right_global,margin\n", 0) == 0);
  CHECK(csv.find("h0,") != std::string::npos);
}
