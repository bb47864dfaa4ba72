#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csl/mesh.hpp"

namespace csl::cli {

/// Process exit statuses.
enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kNumericFailure = 3,
  kInvariantFailure = 4,
};

/// Runs the `csl` front-end. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Mesh shorthands (disk64, annulus32, graded-disk32, ribbon128, band128,
/// sphere-minus-cap32) or a mesh file, looked up as given and then under
/// $CSL_DATA_DIR.
Mesh resolve_mesh(const std::string& spec);

}  // namespace csl::cli
