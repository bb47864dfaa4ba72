#include "csl/confvol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include <json.hpp>

#include "csl/error.hpp"
#include "csl/hash.hpp"
#include "csl/mesh_io.hpp"
#include "csl/spectral.hpp"

namespace csl {

double sphere_area() { return 4.0 * M_PI; }

double global_bound() { return kSurfaceDim * std::pow(sphere_area(), kVolumeExponent); }

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::Neumann: return "neumann";
    case BoundKind::Steklov: return "steklov";
    case BoundKind::SupVolume: return "sup-volume";
  }
  return "unknown";
}

namespace {

std::string conformal_class_of(const Mesh& mesh, const ConformalMetric& metric) {
  std::string text = mesh_fingerprint(mesh);
  char buf[32];
  for (double l : metric.base_edge_lengths()) {
    std::snprintf(buf, sizeof buf, ";%.17g", l);
    text += buf;
  }
  return hex64(fnv1a64(text));
}

/// sum_i y_i^T M y_i over the columns of Y.
double quadratic_sum(const SparseMatrix& M, const Eigen::MatrixXd& Y) {
  double s = 0.0;
  for (Eigen::Index c = 0; c < Y.cols(); ++c) s += Y.col(c).dot(M * Y.col(c));
  return s;
}

std::vector<double> row_sums(const SparseMatrix& M) {
  const Eigen::VectorXd s = M * Eigen::VectorXd::Ones(M.cols());
  return {s.data(), s.data() + s.size()};
}

}  // namespace

double immersed_area(const Immersion& phi, const Mesh& mesh) {
  if (phi.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  double sum = 0.0;
  for (const auto& tri : mesh.triangles())
    sum += triangle_area(phi.points.row(tri[0]).transpose(), phi.points.row(tri[1]).transpose(),
                         phi.points.row(tri[2]).transpose());
  return sum;
}

double conformality_deviation(const Immersion& phi, const Mesh& mesh, const ConformalMetric& metric) {
  if (phi.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  const auto& base = metric.base_edge_lengths();
  double worst = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    double lo = INFINITY, hi = 0.0;
    for (int k = 0; k < 3; ++k) {
      const int e = mesh.triangle_edges()[t][k];
      const Edge& edge = mesh.edges()[e];
      const double ratio = (phi.points.row(edge.a) - phi.points.row(edge.b)).norm() / base[e];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (hi > 0.0) worst = std::max(worst, (hi - lo) / hi);
  }
  return worst;
}

BoundReport neumann_bound_report(const Mesh& mesh, const ConformalMetric& metric, const Immersion& immersion,
                                 const BalanceOptions& balance) {
  if (immersion.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  const FemSystem sys = assemble(mesh, metric);
  const SpectrumResult spec = neumann_spectrum(sys, 1);

  BoundReport r;
  r.kind = BoundKind::Neumann;
  r.eigenvalue = spec.eigenvalues.at(1);
  r.measure = area(mesh, metric);
  r.left = r.eigenvalue * std::pow(r.measure, kVolumeExponent);
  r.right_global = global_bound();
  r.conformal_class = conformal_class_of(mesh, metric);
  r.conformality_deviation = conformality_deviation(immersion, mesh, metric);
  r.conformality_warning = r.conformality_deviation > 0.02;

  // Balancing against A * 1 makes the sphere coordinates exactly
  // A-orthogonal to constants, so they are admissible test functions.
  const Eigen::MatrixXd sphere = to_sphere(immersion);
  const BalanceResult b = hersch_balance(sphere, row_sums(sys.mass), balance);
  const MoebiusElement gamma = reduce_dilation(b.parameter());
  r.right_lemma = kSurfaceDim * std::pow(spherical_volume_exact(apply(gamma, immersion), mesh), kVolumeExponent);
  r.moebius_witness = gamma;
  r.balance_witness = BalanceWitness{b.parameter(), b.residual, b.iterations};
  r.rayleigh_bound = quadratic_sum(sys.stiffness, b.balanced) / quadratic_sum(sys.mass, b.balanced);
  return r;
}

BoundReport steklov_bound_report(const Mesh& mesh, const ConformalMetric& metric, const BoundaryDensity& rho,
                                 const Immersion& ball_immersion, const BalanceOptions& balance) {
  if (ball_immersion.size() != mesh.num_vertices())
    throw Error(ErrorCode::InvalidParameter, "immersion size does not match the mesh");
  const auto bnd = mesh.boundary_vertices();
  if (bnd.empty()) throw Error(ErrorCode::InvalidParameter, "Steklov bound needs a boundary");
  for (int v = 0; v < ball_immersion.size(); ++v) {
    const double r = ball_immersion.points.row(v).norm();
    if (r > 1.0 + 1e-6)
      throw Error(ErrorCode::InvalidImmersion, "vertex " + std::to_string(v) + " lies outside the unit ball");
  }
  for (int v : bnd) {
    const double r = ball_immersion.points.row(v).norm();
    if (std::abs(r - 1.0) > 1e-6)
      throw Error(ErrorCode::InvalidImmersion, "boundary vertex " + std::to_string(v) + " is off the unit sphere");
  }

  const FemSystem sys = assemble(mesh, metric, rho);
  const SpectrumResult spec = steklov_spectrum(sys, 1);

  BoundReport r;
  r.kind = BoundKind::Steklov;
  r.eigenvalue = spec.eigenvalues.at(1);
  r.measure = boundary_mass(mesh, metric, rho);
  r.left = r.eigenvalue * r.measure * std::pow(area(mesh, metric), kSteklovVolumeExponent);
  r.right_global = global_bound();
  r.conformal_class = conformal_class_of(mesh, metric);

  Eigen::MatrixXd boundary_points(static_cast<Eigen::Index>(bnd.size()), ball_immersion.dim());
  const std::vector<double> all_weights = row_sums(sys.boundary_mass);
  std::vector<double> weights;
  weights.reserve(bnd.size());
  for (std::size_t i = 0; i < bnd.size(); ++i) {
    boundary_points.row(static_cast<Eigen::Index>(i)) = ball_immersion.points.row(bnd[i]).normalized();
    weights.push_back(all_weights[static_cast<std::size_t>(bnd[i])]);
  }
  const BalanceResult b = hersch_balance(boundary_points, weights, balance);
  const Immersion moved{ball_dilation_rows(b.parameter(), ball_immersion.points)};

  r.right_lemma = kSurfaceDim * std::pow(immersed_area(moved, mesh), kVolumeExponent);
  r.balance_witness = BalanceWitness{b.parameter(), b.residual, b.iterations};
  r.rayleigh_bound = quadratic_sum(sys.stiffness, moved.points) / quadratic_sum(sys.boundary_mass, moved.points);
  r.conformality_deviation = conformality_deviation(ball_immersion, mesh, metric);
  r.conformality_warning = r.conformality_deviation > 0.02;
  return r;
}

BoundReport sup_volume_report(const Mesh& mesh, const Immersion& immersion, const SearchBudget& budget) {
  const SearchResult s = sup_volume_search(immersion, mesh, budget);
  BoundReport r;
  r.kind = BoundKind::SupVolume;
  r.left = s.best_volume;
  r.right_lemma = sphere_area();
  r.right_global = sphere_area();
  r.measure = s.best_volume;
  r.moebius_witness = s.best;
  r.conformal_class = mesh_fingerprint(mesh);
  return r;
}

EnergyReport conformal_energy(const Immersion& phi, const Mesh& mesh, const ConformalMetric& metric) {
  const FemSystem sys = assemble(mesh, metric);
  EnergyReport e;
  e.energy = quadratic_sum(sys.stiffness, phi.points);
  e.image_area = immersed_area(phi, mesh);
  e.deviation = e.energy > 0.0 ? std::abs(e.energy - kSurfaceDim * e.image_area) / e.energy : 0.0;
  return e;
}

Immersion equatorial_ball_immersion(const Mesh& mesh) {
  if (mesh.dim() != 2) throw Error(ErrorCode::InvalidParameter, "equatorial immersion needs a planar mesh");
  Immersion out{Eigen::MatrixXd::Zero(mesh.num_vertices(), 3)};
  out.points.leftCols(2) = mesh.vertices();
  return out;
}

Immersion stereographic_ball_immersion(const Mesh& mesh, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidParameter, "scale must be > 0");
  return {to_sphere(Immersion{scale * mesh.vertices()})};
}

std::vector<WitnessRow> witness_summary(const std::vector<BoundReport>& reports) {
  std::map<std::string, WitnessRow> rows;
  std::vector<std::string> order;
  for (const auto& rep : reports) {
    std::string key;
    WitnessRow proto;
    switch (rep.kind) {
      case BoundKind::Neumann: proto = {"nu", "lower", 0.0, global_bound(), 0, true}; break;
      case BoundKind::Steklov: proto = {"steklov", "lower", 0.0, global_bound(), 0, true}; break;
      case BoundKind::SupVolume: proto = {"V_M", "upper", INFINITY, sphere_area(), 0, true}; break;
    }
    key = proto.invariant;
    auto [it, fresh] = rows.try_emplace(key, proto);
    if (fresh) order.push_back(key);
    WitnessRow& row = it->second;
    ++row.samples;
    // A lower witness is the largest product seen, an upper witness the
    // smallest sup found. Each must stay strictly on its side of the claim.
    if (row.side == "lower") {
      row.best = std::max(row.best, rep.left);
      row.consistent = row.consistent && rep.left < row.claimed;
    } else {
      row.best = std::min(row.best, rep.left);
      row.consistent = row.consistent && rep.left < row.claimed;
    }
  }
  std::vector<WitnessRow> out;
  for (const auto& k : order) out.push_back(rows.at(k));
  return out;
}

std::string to_json(const BoundReport& r) {
  nlohmann::ordered_json j;
  j["kind"] = std::string(to_string(r.kind));
  j["left"] = r.left;
  j["right_lemma"] = r.right_lemma;
  j["right_global"] = r.right_global;
  j["margin_lemma"] = r.margin_lemma();
  j["margin_global"] = r.margin_global();
  j["eigenvalue"] = r.eigenvalue;
  j["measure"] = r.measure;
  j["rayleigh_bound"] = r.rayleigh_bound;
  if (r.moebius_witness) {
    j["moebius_witness"] = {{"scale", r.moebius_witness->scale},
                            {"translation", std::vector<double>(r.moebius_witness->translation.data(),
                                                                r.moebius_witness->translation.data() +
                                                                    r.moebius_witness->translation.size())}};
  }
  if (r.balance_witness) {
    const auto& b = *r.balance_witness;
    j["balance_witness"] = {{"parameter", std::vector<double>(b.parameter.data(), b.parameter.data() + b.parameter.size())},
                            {"residual", b.residual},
                            {"iterations", b.iterations}};
  }
  j["conformality"] = {{"deviation", r.conformality_deviation}, {"warning", r.conformality_warning}};
  j["conformal_class"] = r.conformal_class;
  return j.dump(2);
}

std::string witness_csv(const std::vector<WitnessRow>& rows) {
  std::string out = "invariant,side,best,claimed,samples,consistent\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%.17g,%d,%d\n", r.invariant.c_str(), r.side.c_str(), r.best,
                  r.claimed, r.samples, r.consistent ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string sweep_csv(const std::vector<std::pair<std::string, BoundReport>>& rows) {
  std::string out = "h_id,left,right_lemma,right_global,margin\n";
  char buf[160];
  for (const auto& [id, r] : rows) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g,%.17g\n", r.left, r.right_lemma, r.right_global,
                  r.margin_lemma());
    out += id + buf;
  }
  return out;
}

}  // namespace csl
