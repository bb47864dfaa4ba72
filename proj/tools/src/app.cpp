#include "csl_cli/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csl/confvol.hpp"
#include "csl/deform.hpp"
#include "csl/error.hpp"
#include "csl/hash.hpp"
#include "csl/mesh_io.hpp"
#include "csl/moebius.hpp"
#include "csl/spectral.hpp"
#include "csl_cli/artifacts.hpp"
#include "csl_cli/compare.hpp"

#ifndef CSL_TOOL_VERSION
#define CSL_TOOL_VERSION "0.0.0"
#endif

namespace csl::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string mesh = "disk64";
  std::string metric;
  std::string rho;
  std::string problem = "neumann";
  int k = 5;
  double eps = 0.2;
  std::string lengths = "0,0.5,1,2,4";
  double tau = 0.0;
  int budget = 10000;
  std::uint64_t seed = 1;
  std::string out = ".";
  double tolerance = 0.01;
  bool force = false;
  bool stamp = false;
  std::vector<std::string> files;
};

/// Relative paths are tried as given, then under $CSL_DATA_DIR.
fs::path locate(const std::string& name) {
  if (fs::exists(name)) return name;
  if (const char* dir = std::getenv("CSL_DATA_DIR"); dir && *dir && fs::path(name).is_relative()) {
    const fs::path p = fs::path(dir) / name;
    if (fs::exists(p)) return p;
  }
  throw Error(ErrorCode::InvalidParameter, "input file '" + name + "' not found");
}

std::vector<double> per_vertex(const std::string& spec, const Mesh& mesh, const char* what) {
  const int n = mesh.num_vertices();
  if (spec.empty()) return std::vector<double>(static_cast<std::size_t>(n), 1.0);
  char* end = nullptr;
  const double c = std::strtod(spec.c_str(), &end);
  if (end != spec.c_str() && *end == '\0') {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::InvalidParameter, std::string(what) + " must be > 0");
    return std::vector<double>(static_cast<std::size_t>(n), c);
  }
  return load_vertex_csv(locate(spec), n, 1.0);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || *end != '\0') throw Error(ErrorCode::InvalidParameter, "bad number '" + cell + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::InvalidParameter, "empty list");
  return out;
}

std::string format_seconds_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string config_hash(const std::string& experiment, const Options& o) {
  std::ostringstream s;
  s.precision(17);
  s << "experiment=" << experiment << "\nmesh=" << o.mesh << "\nmetric=" << o.metric << "\nrho=" << o.rho
    << "\nproblem=" << o.problem << "\nk=" << o.k << "\neps=" << o.eps << "\nlengths=" << o.lengths
    << "\ntau=" << o.tau << "\nbudget=" << o.budget << "\nseed=" << o.seed << "\ntolerance=" << o.tolerance
    << "\nforce=" << o.force << "\n";
  for (const auto& f : o.files) s << "file=" << f << "\n";
  return hex64(fnv1a64(s.str()));
}

Header make_header(const std::string& experiment, const Options& o, const Mesh* mesh) {
  Header h;
  h.experiment = experiment;
  h.tool_version = CSL_TOOL_VERSION;
  h.config_hash = config_hash(experiment, o);
  if (mesh) {
    h.mesh_fingerprint = mesh_fingerprint(*mesh);
    h.mesh_family = mesh->family();
  }
  h.seed = o.seed;
  if (o.stamp) h.timestamp = format_seconds_utc();
  return h;
}

Json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Json moebius_json(const MoebiusElement& g) { return {{"scale", g.scale}, {"translation", vec_json(g.translation)}}; }

Json with_header(const Header& h, const std::string& body_json) {
  Json j;
  j["header"] = header_json(h);
  const Json body = Json::parse(body_json);
  for (auto it = body.begin(); it != body.end(); ++it) j[it.key()] = it.value();
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Boundary vertex at the tip for graded disks, otherwise the boundary vertex
/// with the largest first coordinate.
int cylinder_center(const Mesh& mesh) {
  if (mesh.family() == "graded-disk") return 0;
  int best = -1;
  for (int v : mesh.boundary_vertices())
    if (best < 0 || mesh.vertices()(v, 0) > mesh.vertices()(best, 0)) best = v;
  if (best < 0) throw Error(ErrorCode::InvalidParameter, "blow-up needs a mesh with boundary");
  return best;
}

// --- experiments -----------------------------------------------------------

int mesh_gen(const Options& o, ArtifactSet& files) {
  const Mesh mesh = resolve_mesh(o.mesh);
  const MeshReport rep = validate(mesh);
  const Header h = make_header("mesh-gen", o, &mesh);
  std::ostringstream text;
  text << header_comment(h);
  write_mesh(text, mesh);
  files.add("mesh.cslmesh", text.str());

  Json j;
  j["header"] = header_json(h);
  j["vertices"] = mesh.num_vertices();
  j["triangles"] = mesh.num_triangles();
  j["euler_characteristic"] = rep.euler_characteristic;
  j["boundary_loops"] = rep.boundary_loop_count;
  j["min_quality"] = rep.min_quality;
  j["connected"] = rep.connected;
  j["pass"] = rep.pass;
  j["failures"] = rep.failures;
  files.add("mesh_report.json", dump(j));
  return rep.pass ? kSuccess : kInvariantFailure;
}

int spectrum(const Options& o, ArtifactSet& files) {
  if (o.k < 1) throw Error(ErrorCode::InvalidParameter, "--k must be >= 1");
  const Problem problem = problem_from_string(o.problem);
  const Mesh mesh = resolve_mesh(o.mesh);
  const ConformalMetric g = pullback(mesh).with_factor(mesh, per_vertex(o.metric, mesh, "metric factor"));
  const BoundaryDensity rho(mesh, per_vertex(o.rho, mesh, "rho"));
  const FemSystem sys = assemble(mesh, g, rho);
  EigenOptions eo;
  eo.seed = o.seed;
  SpectrumResult r;
  switch (problem) {
    case Problem::Neumann: r = neumann_spectrum(sys, o.k, eo); break;
    case Problem::Dirichlet: r = dirichlet_spectrum(sys, o.k, eo); break;
    case Problem::Steklov: r = steklov_spectrum(sys, o.k, eo); break;
    case Problem::Schrodinger:
      throw Error(ErrorCode::InvalidParameter, "the schrodinger problem needs a potential; use the library API");
  }
  Json j = with_header(make_header("spectrum", o, &mesh), to_json(r));
  files.add("spectrum.json", dump(j));
  return kSuccess;
}

int moebius_sup(const Options& o, ArtifactSet& files) {
  const Mesh mesh = resolve_mesh(o.mesh);
  SearchBudget b;
  b.max_evaluations = o.budget;
  b.seed = o.seed;
  const SearchResult s = sup_volume_search(Immersion::of(mesh), mesh, b);
  const Header h = make_header("moebius-sup", o, &mesh);
  Json j;
  j["header"] = header_json(h);
  j["best_volume"] = s.best_volume;
  j["sphere_area"] = sphere_area();
  j["relative_margin"] = 1.0 - s.best_volume / sphere_area();
  j["best"] = moebius_json(s.best);
  j["evaluations"] = s.evaluations;
  files.add("sup_volume.json", dump(j));
  files.add("trace.csv", header_comment(h) + trace_csv(s));
  return s.best_volume < sphere_area() ? kSuccess : kInvariantFailure;
}

int balance(const Options& o, ArtifactSet& files) {
  const Problem problem = problem_from_string(o.problem);
  const Mesh mesh = resolve_mesh(o.mesh);
  const ConformalMetric g = pullback(mesh).with_factor(mesh, per_vertex(o.metric, mesh, "metric factor"));
  const BoundaryDensity rho(mesh, per_vertex(o.rho, mesh, "rho"));
  const FemSystem sys = assemble(mesh, g, rho);
  const bool boundary = problem == Problem::Steklov;
  const SparseMatrix& M = boundary ? sys.boundary_mass : sys.mass;
  const Eigen::VectorXd lumped = M * Eigen::VectorXd::Ones(M.cols());
  const std::vector<int> verts = boundary ? mesh.boundary_vertices() : [&] {
    std::vector<int> all(static_cast<std::size_t>(mesh.num_vertices()));
    for (int v = 0; v < mesh.num_vertices(); ++v) all[static_cast<std::size_t>(v)] = v;
    return all;
  }();
  if (verts.empty()) throw Error(ErrorCode::InvalidParameter, "no vertices carry the requested measure");
  const Eigen::MatrixXd sphere = to_sphere(Immersion::of(mesh));
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(verts.size()), sphere.cols());
  std::vector<double> w;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    pts.row(static_cast<Eigen::Index>(i)) = sphere.row(verts[i]);
    w.push_back(lumped[verts[i]]);
  }
  const BalanceResult b = hersch_balance(pts, w);
  Json j;
  j["header"] = header_json(make_header("balance", o, &mesh));
  j["measure"] = boundary ? "boundary" : "volume";
  j["dilation_center"] = vec_json(b.dilation_center);
  j["dilation_parameter"] = b.dilation_parameter;
  j["residual"] = b.residual;
  j["iterations"] = b.iterations;
  j["reduced_element"] = moebius_json(reduce_dilation(b.parameter()));
  files.add("balance.json", dump(j));
  return kSuccess;
}

Json report_json(const BoundReport& r) { return Json::parse(to_json(r)); }

int verify_bounds(const Options& o, ArtifactSet& files) {
  const Mesh mesh = resolve_mesh(o.mesh);
  const ConformalMetric g = pullback(mesh).with_factor(mesh, per_vertex(o.metric, mesh, "metric factor"));
  const Header h = make_header("verify-bounds", o, &mesh);
  Json j;
  j["header"] = header_json(h);
  bool ok = true;
  std::vector<std::pair<std::string, BoundReport>> sweep;

  const BoundReport n = neumann_bound_report(mesh, g, Immersion::of(mesh));
  j["neumann"] = report_json(n);
  ok = ok && n.margin_global() > 0.0;
  sweep.emplace_back("neumann", n);

  if (mesh.has_boundary()) {
    const BoundaryDensity rho(mesh, per_vertex(o.rho, mesh, "rho"));
    const BoundReport s = steklov_bound_report(mesh, g, rho, stereographic_ball_immersion(mesh, 1.0));
    j["steklov"] = report_json(s);
    ok = ok && s.margin_global() > 0.0;
    sweep.emplace_back("steklov", s);
  }
  if (o.tau > 0.0) {
    const auto h_factor = random_smooth_factor(mesh, 1.0 / o.tau, o.tau, o.seed);
    const LipschitzReport l = lipschitz_comparison_check(mesh, g, h_factor, o.tau);
    j["lipschitz"] = {{"tau", l.tau},
                      {"lambda_base", l.lambda_base},
                      {"lambda_scaled", l.lambda_scaled},
                      {"ratio", l.ratio},
                      {"inside_sharp", l.inside_sharp},
                      {"inside_quintic", l.inside_quintic}};
    ok = ok && l.inside_sharp && l.inside_quintic;
  }
  j["pass"] = ok;
  files.add("bounds.json", dump(j));
  files.add("bounds_sweep.csv", header_comment(h) + sweep_csv(sweep));
  return ok ? kSuccess : kInvariantFailure;
}

int blowup(const Options& o, ArtifactSet& files) {
  const Mesh mesh = resolve_mesh(o.mesh);
  const ConformalMetric g = pullback(mesh).with_factor(mesh, per_vertex(o.metric, mesh, "metric factor"));
  const auto rows = blowup_experiment(mesh, g, cylinder_center(mesh), o.eps, parse_list(o.lengths));
  files.add("blowup.csv", header_comment(make_header("blowup", o, &mesh)) + blowup_csv(rows));
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.product_neumann() < global_bound();
  return ok ? kSuccess : kInvariantFailure;
}

int compare(const Options& o, ArtifactSet& files, std::ostream& out) {
  if (o.files.size() != 2) throw Error(ErrorCode::InvalidParameter, "compare needs exactly two files");
  const CompareReport r = compare_artifacts(locate(o.files[0]), locate(o.files[1]), o.tolerance, o.force);
  const std::string text = to_json(r) + "\n";
  out << text;
  files.add("compare.json", text);
  return r.pass ? kSuccess : kInvariantFailure;
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidParameter:
    case ErrorCode::Parse:
    case ErrorCode::InvalidComparison: return kConfigError;
    case ErrorCode::ConstraintViolation:
    case ErrorCode::InvalidImmersion: return kInvariantFailure;
    default: return e.is_numeric() ? kNumericFailure : kInvariantFailure;
  }
}

}  // namespace

Mesh resolve_mesh(const std::string& spec) {
  static const std::regex shorthand(R"(^(disk|annulus|graded-disk|ribbon|band|sphere-minus-cap)(\d*)$)");
  std::smatch m;
  if (std::regex_match(spec, m, shorthand)) {
    const std::string kind = m[1];
    const int res = m[2].length() ? std::stoi(m[2]) : -1;
    auto pick = [res](int fallback) { return res > 0 ? res : fallback; };
    if (kind == "disk") return generate_disk(1.0, pick(64));
    if (kind == "annulus") return generate_annulus(0.5, 1.0, pick(32));
    if (kind == "graded-disk") return generate_graded_disk(1.0, pick(32), 1e-10);
    if (kind == "sphere-minus-cap") {
      const Mesh cap = generate_spherical_cap(M_PI - 0.05, pick(32));
      Eigen::MatrixXd chart(cap.num_vertices(), 2);
      for (int v = 0; v < cap.num_vertices(); ++v) chart.row(v) = from_sphere(cap.vertex(v)).transpose();
      return Mesh(chart, cap.triangles(), "sphere-minus-cap", 1);
    }
    RibbonSpec r;
    r.skeleton = circle_skeleton(1.0, pick(128));
    r.samples_along = pick(128);
    r.width = 0.05;
    r.half_twists = kind == "ribbon" ? 1 : 0;
    return generate_ribbon(r);
  }
  return load_mesh(locate(spec));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conformal spectral laboratory", "csl"};
  app.set_version_flag("--version", std::string(CSL_TOOL_VERSION));
  app.set_config("--config", "", "Flat key=value file; command-line values take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  Options o;
  app.add_option("--mesh", o.mesh, "Mesh shorthand or file")->capture_default_str();
  app.add_option("--metric", o.metric, "Conformal factor: a constant or a vertex CSV");
  app.add_option("--rho", o.rho, "Boundary density: a constant or a vertex CSV");
  app.add_option("--problem", o.problem, "neumann | dirichlet | steklov")->capture_default_str();
  app.add_option("--k", o.k, "Number of eigenvalues")->capture_default_str();
  app.add_option("--eps", o.eps, "Cylinder radius")->capture_default_str();
  app.add_option("--lengths", o.lengths, "Comma-separated cylinder lengths")->capture_default_str();
  app.add_option("--tau", o.tau, "Lipschitz window for the comparison check");
  app.add_option("--budget", o.budget, "Sup-volume evaluation budget")->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for every random choice")->capture_default_str();
  app.add_option("--out", o.out, "Output directory")->capture_default_str();
  app.add_option("--tolerance", o.tolerance, "Relative tolerance for compare")->capture_default_str();
  app.add_flag("--force", o.force, "Compare across mesh families");
  app.add_flag("--stamp", o.stamp, "Add a UTC timestamp to headers");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"mesh-gen", "Generate and validate a mesh"},
      {"spectrum", "Neumann, Dirichlet or Steklov eigenvalues"},
      {"moebius-sup", "Search the sup of the spherical image volume"},
      {"balance", "Hersch-balance the volume or boundary measure"},
      {"verify-bounds", "Neumann and Steklov bound reports"},
      {"blowup", "Cylinder blow-up sweep"},
      {"compare", "Field-wise comparison of two artifacts"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.get_subcommand("compare")->add_option("files", o.files, "Two artifacts")->expected(2);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  ArtifactSet files{fs::path(o.out)};
  try {
    int status = kSuccess;
    if (experiment == "mesh-gen") status = mesh_gen(o, files);
    else if (experiment == "spectrum") status = spectrum(o, files);
    else if (experiment == "moebius-sup") status = moebius_sup(o, files);
    else if (experiment == "balance") status = balance(o, files);
    else if (experiment == "verify-bounds") status = verify_bounds(o, files);
    else if (experiment == "blowup") status = blowup(o, files);
    else status = compare(o, files, out);
    for (const auto& p : files.commit()) out << "wrote " << p.string() << "\n";
    return status;
  } catch (const Error& e) {
    err << "csl " << experiment << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "csl " << experiment << ": " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "csl " << experiment << ": " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace csl::cli
