#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace csl::cli {

/// Provenance stamped on every artifact.
struct Header {
  std::string experiment;
  std::string tool_version;
  std::string config_hash;
  std::string mesh_fingerprint;
  std::string mesh_family;
  std::uint64_t seed = 0;
  std::optional<std::string> timestamp;
};

nlohmann::ordered_json header_json(const Header& h);
/// `# key: value` lines, one per header field.
std::string header_comment(const Header& h);

/// Collects outputs in memory and writes them only on commit(), each via a
/// temporary file renamed into place. If any write fails, files already
/// renamed by this commit are removed again.
class ArtifactSet {
 public:
  explicit ArtifactSet(std::filesystem::path dir) : dir_(std::move(dir)) {}

  void add(const std::string& name, std::string content);
  /// Returns the written paths.
  std::vector<std::filesystem::path> commit() const;

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace csl::cli
