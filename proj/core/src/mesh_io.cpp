#include "csl/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "csl/error.hpp"
#include "csl/hash.hpp"

namespace csl {

namespace {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Next non-comment, non-blank line. Collects "# family:" tags on the way.
bool next_line(std::istream& in, std::string& line, std::string* family) {
  while (std::getline(in, line)) {
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      const std::string tag = "# family:";
      if (family && line.compare(first, tag.size(), tag) == 0) {
        std::istringstream ss(line.substr(first + tag.size()));
        ss >> *family;
      }
      continue;
    }
    return true;
  }
  return false;
}

}  // namespace

std::string mesh_to_text(const Mesh& mesh) {
  std::string out;
  out.reserve(static_cast<std::size_t>(mesh.num_vertices()) * 48 + mesh.num_triangles() * 24);
  out += "CSLMESH 1\n";
  out += "# family: " + mesh.family() + "\n";
  out += std::to_string(mesh.num_vertices()) + " " + std::to_string(mesh.num_triangles()) + " " +
         std::to_string(mesh.dim()) + "\n";
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    for (int d = 0; d < mesh.dim(); ++d) {
      if (d) out += ' ';
      out += format_double(mesh.vertices()(i, d));
    }
    out += '\n';
  }
  for (const auto& t : mesh.triangles())
    out += std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]) + "\n";
  return out;
}

void write_mesh(std::ostream& out, const Mesh& mesh) { out << mesh_to_text(mesh); }

Mesh read_mesh(std::istream& in) {
  std::string line;
  std::string family = "file";
  if (!next_line(in, line, &family)) throw Error(ErrorCode::Parse, "empty mesh stream");
  {
    std::istringstream ss(line);
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "CSLMESH" || version != 1)
      throw Error(ErrorCode::Parse, "expected header 'CSLMESH 1'");
  }
  long long nv = 0, nf = 0, m = 0;
  if (!next_line(in, line, &family)) throw Error(ErrorCode::Parse, "missing size line");
  {
    std::istringstream ss(line);
    if (!(ss >> nv >> nf >> m) || nv <= 0 || nf <= 0 || m < 2)
      throw Error(ErrorCode::Parse, "bad size line '" + line + "'");
  }
  Eigen::MatrixXd v(nv, m);
  for (long long i = 0; i < nv; ++i) {
    if (!next_line(in, line, &family)) throw Error(ErrorCode::Parse, "truncated vertex block");
    std::istringstream ss(line);
    for (long long d = 0; d < m; ++d)
      if (!(ss >> v(i, d))) throw Error(ErrorCode::Parse, "bad vertex line " + std::to_string(i));
  }
  std::vector<Triangle> tris(static_cast<std::size_t>(nf));
  for (long long f = 0; f < nf; ++f) {
    if (!next_line(in, line, &family)) throw Error(ErrorCode::Parse, "truncated triangle block");
    std::istringstream ss(line);
    auto& t = tris[static_cast<std::size_t>(f)];
    if (!(ss >> t[0] >> t[1] >> t[2])) throw Error(ErrorCode::Parse, "bad triangle line " + std::to_string(f));
  }
  return Mesh(std::move(v), std::move(tris), family);
}

void save_mesh(const std::filesystem::path& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Parse, "cannot write " + path.string());
  write_mesh(out, mesh);
}

Mesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open mesh file " + path.string());
  return read_mesh(in);
}

std::string mesh_fingerprint(const Mesh& mesh) { return hex64(fnv1a64(mesh_to_text(mesh))); }

void write_vertex_csv(std::ostream& out, const std::vector<double>& values) {
  out << "vertex_index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ',' << format_double(values[i]) << '\n';
}

std::vector<double> read_vertex_csv(std::istream& in, int count, double fill) {
  std::vector<double> values(static_cast<std::size_t>(count), fill);
  std::string line;
  bool header_seen = false;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      if (line.compare(first, 12, "vertex_index") == 0) continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::Parse, "row " + std::to_string(row) + ": expected 'index,value'");
    try {
      std::size_t used = 0;
      const long long idx = std::stoll(line.substr(0, comma), &used);
      const double value = std::stod(line.substr(comma + 1));
      if (idx < 0 || idx >= count) throw Error(ErrorCode::Parse, "row " + std::to_string(row) + ": vertex index out of range");
      values[static_cast<std::size_t>(idx)] = value;
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::Parse, "row " + std::to_string(row) + ": malformed number");
    }
  }
  return values;
}

std::vector<double> load_vertex_csv(const std::filesystem::path& path, int count, double fill) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Parse, "cannot open " + path.string());
  return read_vertex_csv(in, count, fill);
}

}  // namespace csl
