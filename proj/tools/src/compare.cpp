#include "csl_cli/compare.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "csl/error.hpp"

namespace csl::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Parsed {
  std::string experiment;
  std::string family;
  /// Field path -> value, in document order.
  std::vector<std::pair<std::string, double>> values;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidParameter, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, double>>& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (prefix.empty() && (k == "header" || k == "discretization")) continue;
      flatten(v, prefix.empty() ? k : prefix + "." + k, out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_number()) {
    out.emplace_back(prefix, j.get<double>());
  } else if (j.is_boolean()) {
    out.emplace_back(prefix, j.get<bool>() ? 1.0 : 0.0);
  }
}

Parsed parse_json(const std::string& text, const std::filesystem::path& p) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, p.string() + ": " + e.what());
  }
  Parsed out;
  if (j.contains("header")) {
    out.experiment = j["header"].value("experiment", "");
    out.family = j["header"].value("mesh_family", "");
  }
  flatten(j, "", out.values);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

Parsed parse_csv(const std::string& text, const std::filesystem::path& p) {
  Parsed out;
  std::stringstream in(text);
  std::string line;
  std::vector<std::string> columns;
  int row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = line.substr(1, colon - 1);
      std::string value = line.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      if (key.find("experiment") != std::string::npos) out.experiment = value;
      if (key.find("mesh_family") != std::string::npos) out.family = value;
      continue;
    }
    if (columns.empty()) {
      columns = split(line, ',');
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != columns.size())
      throw Error(ErrorCode::Parse, p.string() + ": row " + std::to_string(row) + " has the wrong width");
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      if (end != cells[c].c_str() && *end == '\0')
        out.values.emplace_back("row" + std::to_string(row) + "." + columns[c], v);
    }
    ++row;
  }
  return out;
}

Parsed parse(const std::filesystem::path& p) {
  const std::string text = slurp(p);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) return parse_json(text, p);
  return parse_csv(text, p);
}

}  // namespace

CompareReport compare_artifacts(const std::filesystem::path& a, const std::filesystem::path& b, double tolerance,
                                bool force) {
  if (!(tolerance >= 0.0)) throw Error(ErrorCode::InvalidParameter, "tolerance must be >= 0");
  const Parsed pa = parse(a);
  const Parsed pb = parse(b);
  if (pa.experiment != pb.experiment)
    throw Error(ErrorCode::InvalidComparison,
                "experiment kinds differ ('" + pa.experiment + "' vs '" + pb.experiment + "')");
  if (pa.family != pb.family && !force)
    throw Error(ErrorCode::InvalidComparison,
                "mesh families differ ('" + pa.family + "' vs '" + pb.family + "'); pass --force to compare anyway");

  CompareReport r;
  r.experiment = pa.experiment;
  r.tolerance = tolerance;
  r.forced = force && pa.family != pb.family;

  std::map<std::string, double> rhs(pb.values.begin(), pb.values.end());
  for (const auto& [field, va] : pa.values) {
    FieldDiff d{field, va, 0.0, 0.0, true};
    auto it = rhs.find(field);
    if (it == rhs.end()) {
      d.relative = INFINITY;
    } else {
      d.b = it->second;
      d.relative = std::abs(va - d.b) / std::max({std::abs(va), std::abs(d.b), 1e-9});
      rhs.erase(it);
    }
    d.pass = d.relative <= tolerance;
    r.fields.push_back(d);
  }
  for (const auto& [field, vb] : pb.values) {
    if (!rhs.count(field)) continue;
    r.fields.push_back({field, 0.0, vb, INFINITY, false});
  }
  for (const auto& d : r.fields) {
    r.max_relative = std::max(r.max_relative, d.relative);
    r.pass = r.pass && d.pass;
  }
  return r;
}

std::string to_json(const CompareReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["tolerance"] = r.tolerance;
  j["forced"] = r.forced;
  j["pass"] = r.pass;
  j["max_relative"] = std::isfinite(r.max_relative) ? Json(r.max_relative) : Json("inf");
  Json fields = Json::array();
  for (const auto& d : r.fields) {
    fields.push_back({{"field", d.field},
                      {"a", d.a},
                      {"b", d.b},
                      {"relative", std::isfinite(d.relative) ? Json(d.relative) : Json("inf")},
                      {"pass", d.pass}});
  }
  j["fields"] = fields;
  return j.dump(2);
}

}  // namespace csl::cli
