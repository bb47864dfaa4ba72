#include "csl_cli/artifacts.hpp"

#include <fstream>
#include <system_error>

#include <unistd.h>

namespace csl::cli {

namespace fs = std::filesystem;

nlohmann::ordered_json header_json(const Header& h) {
  nlohmann::ordered_json j;
  j["experiment"] = h.experiment;
  j["tool_version"] = h.tool_version;
  j["config_hash"] = h.config_hash;
  j["mesh_fingerprint"] = h.mesh_fingerprint;
  j["mesh_family"] = h.mesh_family;
  j["seed"] = h.seed;
  if (h.timestamp) j["timestamp"] = *h.timestamp;
  return j;
}

std::string header_comment(const Header& h) {
  std::string out;
  out += "# experiment: " + h.experiment + "\n";
  out += "# tool_version: " + h.tool_version + "\n";
  out += "# config_hash: " + h.config_hash + "\n";
  out += "# mesh_fingerprint: " + h.mesh_fingerprint + "\n";
  out += "# mesh_family: " + h.mesh_family + "\n";
  out += "# seed: " + std::to_string(h.seed) + "\n";
  if (h.timestamp) out += "# timestamp: " + *h.timestamp + "\n";
  return out;
}

void write_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw fs::filesystem_error("cannot open for writing", tmp, std::make_error_code(std::errc::io_error));
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignore;
      fs::remove(tmp, ignore);
      throw fs::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw fs::filesystem_error("rename failed", tmp, path, ec);
  }
}

void ArtifactSet::add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

std::vector<fs::path> ArtifactSet::commit() const {
  fs::create_directories(dir_);
  std::vector<fs::path> written;
  try {
    for (const auto& [name, content] : files_) {
      const fs::path p = dir_ / name;
      write_atomic(p, content);
      written.push_back(p);
    }
  } catch (...) {
    std::error_code ignore;
    for (const auto& p : written) fs::remove(p, ignore);
    throw;
  }
  return written;
}

}  // namespace csl::cli
