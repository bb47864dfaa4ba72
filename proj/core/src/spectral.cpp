#include "csl/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <json.hpp>

#include "csl/error.hpp"
#include "csl/mesh_io.hpp"

namespace csl {

std::string_view to_string(Problem p) {
  switch (p) {
    case Problem::Neumann: return "neumann";
    case Problem::Dirichlet: return "dirichlet";
    case Problem::Steklov: return "steklov";
    case Problem::Schrodinger: return "schrodinger";
  }
  return "unknown";
}

Problem problem_from_string(std::string_view name) {
  if (name == "neumann") return Problem::Neumann;
  if (name == "dirichlet") return Problem::Dirichlet;
  if (name == "steklov") return Problem::Steklov;
  if (name == "schrodinger") return Problem::Schrodinger;
  throw Error(ErrorCode::InvalidParameter, "unknown problem '" + std::string(name) + "'");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_face_mass(Triplets& out, const Triangle& tri, double weight, MassMode mode) {
  if (mode == MassMode::Lumped) {
    for (int a : tri) out.emplace_back(a, a, weight / 3.0);
    return;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out.emplace_back(tri[i], tri[j], weight * (i == j ? 2.0 : 1.0) / 12.0);
}

SparseMatrix build(int n, const Triplets& t) {
  SparseMatrix m(n, n);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

SparseMatrix restrict_to(const SparseMatrix& A, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> col_map(static_cast<std::size_t>(A.cols()), -1);
  std::vector<int> row_map(static_cast<std::size_t>(A.rows()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) row_map[rows[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<int>(j);
  Triplets t;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) {
      const int r = row_map[it.row()];
      const int c = col_map[it.col()];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SparseMatrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

double zero_tolerance_for(const std::vector<double>& values) {
  double largest = values.empty() ? 0.0 : std::abs(values.back());
  return 1e-8 * std::max(largest, 1.0);
}

void snap_zero_mode(SpectrumResult& r) {
  r.zero_tolerance = zero_tolerance_for(r.eigenvalues);
  for (double& v : r.eigenvalues)
    if (std::abs(v) <= r.zero_tolerance) v = 0.0;
}

}  // namespace

FemSystem assemble(const Mesh& mesh, const ConformalMetric& metric, const BoundaryDensity& rho, MassMode mode) {
  const int n = mesh.num_vertices();
  const auto& l = metric.base_edge_lengths();
  const auto& h = metric.factor();

  FemSystem sys;
  sys.mass_mode = mode;
  sys.triangles = mesh.triangles();
  sys.weighted_face_area.resize(static_cast<std::size_t>(mesh.num_triangles()));

  Triplets kt, mt, bt;
  kt.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 12);
  mt.reserve(static_cast<std::size_t>(mesh.num_triangles()) * 9);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const auto& e = mesh.triangle_edges()[t];
    const double len[3] = {l[e[0]], l[e[1]], l[e[2]]};
    const double a = heron_area(len[0], len[1], len[2]);
    if (!(a > 0.0)) throw Error(ErrorCode::DegenerateMetric, "triangle inequality fails on face " + std::to_string(t));
    for (int k = 0; k < 3; ++k) {
      // Cotangent of the angle at local vertex k, opposite edge e[k].
      const double lk = len[k], l1 = len[(k + 1) % 3], l2 = len[(k + 2) % 3];
      const double w = 0.5 * (l1 * l1 + l2 * l2 - lk * lk) / (4.0 * a);
      const int p = tri[(k + 1) % 3], q = tri[(k + 2) % 3];
      kt.emplace_back(p, q, -w);
      kt.emplace_back(q, p, -w);
      kt.emplace_back(p, p, w);
      kt.emplace_back(q, q, w);
    }
    const double weighted = a * (h[tri[0]] + h[tri[1]] + h[tri[2]]) / 3.0;
    sys.weighted_face_area[t] = weighted;
    add_face_mass(mt, tri, weighted, mode);
  }
  for (int e : mesh.boundary_edges()) {
    const Edge& ed = mesh.edges()[e];
    const double len = l[e] * std::sqrt(0.5 * (h[ed.a] + h[ed.b]));
    const double w = len * 0.5 * (rho[ed.a] + rho[ed.b]);
    if (mode == MassMode::Lumped) {
      bt.emplace_back(ed.a, ed.a, w / 2.0);
      bt.emplace_back(ed.b, ed.b, w / 2.0);
    } else {
      bt.emplace_back(ed.a, ed.a, w / 3.0);
      bt.emplace_back(ed.b, ed.b, w / 3.0);
      bt.emplace_back(ed.a, ed.b, w / 6.0);
      bt.emplace_back(ed.b, ed.a, w / 6.0);
    }
  }
  sys.stiffness = build(n, kt);
  sys.mass = build(n, mt);
  sys.boundary_mass = build(n, bt);
  sys.boundary_dofs = mesh.boundary_vertices();
  sys.interior_dofs = mesh.interior_vertices();
  sys.mesh_fingerprint = mesh_fingerprint(mesh);
  return sys;
}

FemSystem assemble(const Mesh& mesh, const ConformalMetric& metric, MassMode mode) {
  return assemble(mesh, metric, BoundaryDensity::uniform(mesh, 1.0), mode);
}

SparseMatrix weighted_mass(const FemSystem& sys, const std::vector<double>& w) {
  if (static_cast<int>(w.size()) != sys.size()) throw Error(ErrorCode::InvalidParameter, "weight size mismatch");
  Triplets t;
  t.reserve(sys.triangles.size() * 9);
  for (std::size_t f = 0; f < sys.triangles.size(); ++f) {
    const auto& tri = sys.triangles[f];
    const double mean = (w[tri[0]] + w[tri[1]] + w[tri[2]]) / 3.0;
    add_face_mass(t, tri, mean * sys.weighted_face_area[f], sys.mass_mode);
  }
  return build(sys.size(), t);
}

namespace {

SpectrumResult package(Problem problem, const EigenPairs& pairs, const FemSystem& sys,
                       const EigenOptions& options) {
  SpectrumResult r;
  r.problem = problem;
  r.eigenvalues.assign(pairs.values.data(), pairs.values.data() + pairs.values.size());
  r.residuals = pairs.residuals;
  r.solver_tolerance = options.tolerance;
  r.method = pairs.method;
  r.mesh_fingerprint = sys.mesh_fingerprint;
  return r;
}

}  // namespace

SpectrumResult neumann_spectrum(const FemSystem& sys, int k, const EigenOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  const EigenPairs pairs = smallest_eigenpairs(sys.stiffness, sys.mass, k + 1, 0.0, options);
  SpectrumResult r = package(Problem::Neumann, pairs, sys, options);
  r.eigenvectors = pairs.vectors;
  r.dofs = sys.size();
  snap_zero_mode(r);
  return r;
}

SpectrumResult dirichlet_spectrum(const FemSystem& sys, int k, const EigenOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  if (sys.boundary_dofs.empty()) throw Error(ErrorCode::InvalidParameter, "Dirichlet problem needs a boundary");
  if (sys.interior_dofs.empty()) throw Error(ErrorCode::InvalidParameter, "mesh has no interior vertices");
  const auto& in = sys.interior_dofs;
  const SparseMatrix K = restrict_to(sys.stiffness, in, in);
  const SparseMatrix M = restrict_to(sys.mass, in, in);
  const EigenPairs pairs = smallest_eigenpairs(K, M, k, 0.0, options);
  SpectrumResult r = package(Problem::Dirichlet, pairs, sys, options);
  r.eigenvectors = Eigen::MatrixXd::Zero(sys.size(), k);
  for (std::size_t i = 0; i < in.size(); ++i) r.eigenvectors.row(in[i]) = pairs.vectors.row(static_cast<int>(i));
  r.dofs = static_cast<int>(in.size());
  r.zero_tolerance = zero_tolerance_for(r.eigenvalues);
  return r;
}

SpectrumResult steklov_spectrum(const FemSystem& sys, int k, const EigenOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  const auto& bd = sys.boundary_dofs;
  const auto& in = sys.interior_dofs;
  if (bd.empty()) throw Error(ErrorCode::InvalidParameter, "Steklov problem needs a boundary");
  const int nb = static_cast<int>(bd.size());
  if (k + 1 > nb) throw Error(ErrorCode::InvalidParameter, "k exceeds the number of boundary vertices");

  const Eigen::MatrixXd Kbb(restrict_to(sys.stiffness, bd, bd));
  Eigen::MatrixXd S = Kbb;
  Eigen::MatrixXd extension;  // interior values per unit boundary value
  if (!in.empty()) {
    const SparseMatrix Kii = restrict_to(sys.stiffness, in, in);
    const SparseMatrix Kib = restrict_to(sys.stiffness, in, bd);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(Kii);
    if (ldlt.info() != Eigen::Success)
      throw Error(ErrorCode::Internal, "interior stiffness block is singular");
    const Eigen::MatrixXd rhs(Kib);
    extension = -ldlt.solve(rhs);
    S += Eigen::MatrixXd(Kib).transpose() * extension;
  }
  S = 0.5 * (S + S.transpose());
  const Eigen::MatrixXd Bbb(restrict_to(sys.boundary_mass, bd, bd));

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Bbb);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::Internal, "Steklov eigensolver failed");

  SpectrumResult r;
  r.problem = Problem::Steklov;
  r.solver_tolerance = options.tolerance;
  r.method = "dense-schur-complement";
  r.mesh_fingerprint = sys.mesh_fingerprint;
  r.dofs = nb;
  r.eigenvectors = Eigen::MatrixXd::Zero(sys.size(), k + 1);
  for (int j = 0; j <= k; ++j) {
    const double sigma = es.eigenvalues()[j];
    const Eigen::VectorXd ub = es.eigenvectors().col(j);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(sys.size());
    for (int i = 0; i < nb; ++i) full[bd[i]] = ub[i];
    if (!in.empty()) {
      const Eigen::VectorXd ui = extension * ub;
      for (std::size_t i = 0; i < in.size(); ++i) full[in[i]] = ui[static_cast<int>(i)];
    }
    r.eigenvalues.push_back(sigma);
    r.eigenvectors.col(j) = full;
    const double res = relative_residual(sys.stiffness, sys.boundary_mass, sigma, full);
    r.residuals.push_back(res);
    if (!(res <= options.tolerance))
      throw ConvergenceError("Steklov residual above tolerance", res, 1);
  }
  snap_zero_mode(r);
  return r;
}

SpectrumResult schrodinger_neumann_spectrum(const FemSystem& sys, const std::vector<double>& potential, int k,
                                            const EigenOptions& options) {
  if (k < 1) throw Error(ErrorCode::InvalidParameter, "k must be >= 1");
  if (static_cast<int>(potential.size()) != sys.size())
    throw Error(ErrorCode::InvalidParameter, "potential size does not match the system");
  const SparseMatrix op = sys.stiffness + weighted_mass(sys, potential);
  const double lower = std::min(0.0, *std::min_element(potential.begin(), potential.end()));
  const EigenPairs pairs = smallest_eigenpairs(op, sys.mass, k + 1, lower, options);
  SpectrumResult r = package(Problem::Schrodinger, pairs, sys, options);
  r.eigenvectors = pairs.vectors;
  r.dofs = sys.size();
  r.zero_tolerance = zero_tolerance_for(r.eigenvalues);
  return r;
}

std::string to_json(const SpectrumResult& result) {
  nlohmann::ordered_json j;
  j["problem"] = std::string(to_string(result.problem));
  j["eigenvalues"] = result.eigenvalues;
  j["tolerances"] = {{"zero", result.zero_tolerance}, {"solver", result.solver_tolerance}};
  j["mesh_fingerprint"] = result.mesh_fingerprint;
  j["discretization"] = {{"element", "P1"},
                         {"method", result.method},
                         {"dofs", result.dofs},
                         {"residuals", result.residuals}};
  return j.dump(2);
}

}  // namespace csl
