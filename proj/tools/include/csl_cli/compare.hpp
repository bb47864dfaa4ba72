#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace csl::cli {

struct FieldDiff {
  std::string field;
  double a = 0.0;
  double b = 0.0;
  /// |a - b| / max(|a|, |b|, 1e-9); infinity when the field is missing on
  /// one side.
  double relative = 0.0;
  bool pass = true;
};

struct CompareReport {
  std::string experiment;
  double tolerance = 0.0;
  bool forced = false;
  std::vector<FieldDiff> fields;
  double max_relative = 0.0;
  bool pass = true;
};

/// Compares two CLI artifacts (JSON or CSV) field by field. Provenance
/// ("header") and discretization details are skipped. Different experiments
/// always raise InvalidComparison; different mesh families do too unless
/// `force` is set.
CompareReport compare_artifacts(const std::filesystem::path& a, const std::filesystem::path& b, double tolerance,
                                bool force);

std::string to_json(const CompareReport& report);

}  // namespace csl::cli
