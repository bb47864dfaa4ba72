#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "csl/mesh.hpp"
#include "csl/metric.hpp"
#include "csl/moebius.hpp"

namespace csl {

/// Surface dimension. Everything below is 2-D; the exponents are kept here so
/// the general shape lambda * Vol^(2/n) <= n * V^(2/n) stays readable.
inline constexpr int kSurfaceDim = 2;
inline constexpr double kVolumeExponent = 2.0 / kSurfaceDim;              // 2/n
inline constexpr double kSteklovVolumeExponent = (2.0 - kSurfaceDim) / kSurfaceDim;  // (2-n)/n

/// Area of the round unit 2-sphere.
double sphere_area();
/// n * omega_n^(2/n) for n = 2, i.e. 8 pi.
double global_bound();

enum class BoundKind { Neumann, Steklov, SupVolume };
std::string_view to_string(BoundKind kind);

struct BalanceWitness {
  Eigen::VectorXd parameter;  // a = s p in the open ball
  double residual = 0.0;
  int iterations = 0;
};

struct BoundReport {
  BoundKind kind = BoundKind::Neumann;
  /// lambda_1 * area, sigma_1 * boundary mass, or the best sup-volume found.
  double left = 0.0;
  /// Bound from the balanced witness (absent for SupVolume).
  double right_lemma = 0.0;
  /// 8 pi for the eigenvalue bounds, 4 pi for sup-volume.
  double right_global = 0.0;

  double eigenvalue = 0.0;
  /// Area (Neumann) or rho-weighted boundary length (Steklov).
  double measure = 0.0;
  /// Discrete Rayleigh quotient of the balanced coordinate functions; the
  /// eigenvalue never exceeds it.
  double rayleigh_bound = 0.0;

  std::optional<MoebiusElement> moebius_witness;
  std::optional<BalanceWitness> balance_witness;

  /// Max over faces of the relative spread of |dphi|-edge ratios.
  double conformality_deviation = 0.0;
  bool conformality_warning = false;

  /// Hash of the mesh together with the base lengths (the conformal class).
  std::string conformal_class;

  double margin_lemma() const { return right_lemma - left; }
  double margin_global() const { return right_global - left; }
};

/// Neumann instance: left = lambda_1 area under the metric, right_lemma =
/// 2 * spherical_volume of the immersion moved by the volume-balanced
/// reduced element. `immersion` lives in the stereographic chart R^m.
BoundReport neumann_bound_report(const Mesh& mesh, const ConformalMetric& metric, const Immersion& immersion,
                                 const BalanceOptions& balance = {});

/// Steklov instance for a map into the closed unit ball of R^(m+1) with
/// boundary vertices on the sphere. Throws InvalidImmersion otherwise.
BoundReport steklov_bound_report(const Mesh& mesh, const ConformalMetric& metric, const BoundaryDensity& rho,
                                 const Immersion& ball_immersion, const BalanceOptions& balance = {});

/// Upper witness for the Moebius volume: the best value found by
/// sup_volume_search, compared against 4 pi.
BoundReport sup_volume_report(const Mesh& mesh, const Immersion& immersion, const SearchBudget& budget);

struct EnergyReport {
  double energy = 0.0;
  double image_area = 0.0;
  double deviation = 0.0;
};

/// Dirichlet energy sum_i phi_i^T K phi_i with the conformally invariant
/// stiffness of `metric`, against twice the Euclidean area of the image.
EnergyReport conformal_energy(const Immersion& phi, const Mesh& mesh, const ConformalMetric& metric);

/// Euclidean area of the immersed mesh.
double immersed_area(const Immersion& phi, const Mesh& mesh);

/// Relative spread of pulled-back versus base edge length ratios, max over
/// faces. Zero for a conformal (face-wise similar) immersion.
double conformality_deviation(const Immersion& phi, const Mesh& mesh, const ConformalMetric& metric);

/// (x, y) -> (x, y, 0); requires a planar mesh inside the closed unit disk.
Immersion equatorial_ball_immersion(const Mesh& mesh);
/// Inverse stereographic projection of scale * x: a conformal map onto a
/// region of the unit sphere (hence into the closed ball).
Immersion stereographic_ball_immersion(const Mesh& mesh, double scale);

struct WitnessRow {
  std::string invariant;  // "nu" (lambda_1 Vol), "steklov", "V_M" (Moebius volume)
  std::string side;       // "lower" or "upper"
  double best = 0.0;
  double claimed = 0.0;
  int samples = 0;
  bool consistent = true;
};

/// One-sided evidence per invariant: eigenvalue products give lower
/// witnesses of nu (claimed 8 pi), sup-volumes give upper witnesses of the
/// Moebius volume (claimed 4 pi). Consistency means the witness sits on the
/// correct side of the claim.
std::vector<WitnessRow> witness_summary(const std::vector<BoundReport>& reports);

std::string to_json(const BoundReport& report);
std::string witness_csv(const std::vector<WitnessRow>& rows);
/// `h_id,left,right_lemma,right_global,margin` with margin = right_lemma - left.
std::string sweep_csv(const std::vector<std::pair<std::string, BoundReport>>& rows);

}  // namespace csl
