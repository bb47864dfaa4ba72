#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "csl/mesh.hpp"

namespace csl {

// CSLMESH text format:
//   CSLMESH 1
//   <V> <F> <m>
//   V lines of m coordinates
//   F lines of 3 zero-based indices
// Lines starting with '#' are comments. A comment "# family: <name>" is
// read back as the mesh family tag.

/// Canonical serialization (no comments other than the family tag); this is
/// the text the fingerprint is computed from.
std::string mesh_to_text(const Mesh& mesh);
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

void save_mesh(const std::filesystem::path& path, const Mesh& mesh);
Mesh load_mesh(const std::filesystem::path& path);

/// Hex FNV-1a of mesh_to_text().
std::string mesh_fingerprint(const Mesh& mesh);

/// Per-vertex sidecar CSV with header `vertex_index,value`.
void write_vertex_csv(std::ostream& out, const std::vector<double>& values);
/// Reads a sidecar; vertices not listed keep `fill`. Throws Parse on bad rows
/// or indices outside [0, count).
std::vector<double> read_vertex_csv(std::istream& in, int count, double fill);
std::vector<double> load_vertex_csv(const std::filesystem::path& path, int count, double fill);

}  // namespace csl
