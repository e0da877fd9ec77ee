#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "qha/phase_space.hpp"
#include "qha/report.hpp"

namespace qha {

struct SuiteConfig {
  std::size_t d = 1;
  std::size_t n = 64;
  double L = 16.0;
  std::vector<std::int64_t> moduli{3, 5, 7};
  std::vector<std::string> suites;  ///< empty selects every suite
  std::map<std::string, double> tolerance_overrides;
  std::filesystem::path out_dir;
  unsigned workers = 1;
  std::uint64_t seed = 20261019;
};

/// Suite names in execution order.
const std::vector<std::string>& suite_names();

/// Throws QhaError describing the first invalid setting.
void validate(const SuiteConfig& config);

/// Runs the selected suites in declared order. A suite that throws contributes
/// a failing "suite_error" entry and the remaining suites still run.
NormReport run_suite(const SuiteConfig& config);

/// The ten smooth test symbols used by the embedding and boundedness suites.
std::vector<std::pair<std::string, Symbol>> test_symbol_family(const PhaseGrid& grid);

}  // namespace qha
