#pragma once

#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace qha {

/// One measured quantity with its acceptance window [lower, tolerance].
struct ReportEntry {
  std::string name;
  std::string anchor;  ///< identity or estimate the value belongs to; "plumbing" for harness checks
  double value = 0.0;
  double tolerance = 0.0;
  double lower = -std::numeric_limits<double>::infinity();
  bool skipped = false;
  std::string note;
  std::map<std::string, double> extra;

  /// Derived verdict: a skipped entry passes, otherwise lower ≤ value ≤ tolerance.
  bool pass() const { return skipped || (value >= lower && value <= tolerance); }
};

struct NormReport {
  std::vector<ReportEntry> entries;
  nlohmann::json metadata = nlohmann::json::object();

  ReportEntry& add(std::string name, std::string anchor, double value, double tolerance,
                   double lower = -std::numeric_limits<double>::infinity());
  ReportEntry& skip(std::string name, std::string anchor, std::string note);
  void merge(const NormReport& other);
  bool all_pass() const;
  const ReportEntry* find(const std::string& name) const;
};

nlohmann::json to_json(const NormReport& r);
NormReport report_from_json(const nlohmann::json& j);

enum class ReportFormat { json, csv };

std::string to_csv(const NormReport& r);
void emit_report(const NormReport& r, ReportFormat format, const std::filesystem::path& path);

}  // namespace qha
