// Command-line harness: runs verification suites and writes JSON or CSV reports.

#include <cstdio>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "qha/suites.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

void print_summary(const qha::NormReport& report) {
  std::size_t failed = 0, skipped = 0;
  for (const auto& e : report.entries) {
    const char* verdict = e.skipped ? "SKIP" : (e.pass() ? "PASS" : "FAIL");
    if (e.skipped) ++skipped;
    if (!e.pass()) ++failed;
    std::printf("%s  %-44s value=%-12.5g tol=%-12.5g%s%s\n", verdict, e.name.c_str(), e.value, e.tolerance,
                e.note.empty() ? "" : "  ", e.note.c_str());
  }
  std::printf("%zu entries, %zu failed, %zu skipped\n", report.entries.size(), failed, skipped);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space harmonic analysis verification harness"};
  app.require_subcommand(1);

  qha::SuiteConfig config;
  std::string out_dir;
  std::string format = "json";
  std::map<std::string, double> tolerances;

  auto* run = app.add_subcommand("run", "Run verification suites");
  run->add_option("--suite", config.suites, "Suites to run (default: all)")
      ->check(CLI::IsMember(qha::suite_names()));
  run->add_option("--d", config.d, "Phase-space half dimension")->check(CLI::Range(1, 2));
  run->add_option("--n", config.n, "Grid points per axis");
  run->add_option("--L", config.L, "Position period");
  run->add_option("--N", config.moduli, "Odd moduli for the finite suite")->delimiter(',');
  run->add_option("--workers", config.workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--seed", config.seed, "Random seed");
  run->add_option("--out", out_dir, "Output directory (default: $QHA_OUT or .)");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_option("--tol", tolerances, "Tolerance override as NAME VALUE pairs");

  auto* finite = app.add_subcommand("verify-finite", "Exhaustive finite-group verification");
  finite->add_option("--N", config.moduli, "Odd moduli, comma separated")->delimiter(',')->required();
  finite->add_option("--seed", config.seed, "Random seed");
  finite->add_option("--out", out_dir, "Output directory (default: $QHA_OUT or .)");
  finite->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (finite->parsed()) config.suites = {"finite"};
  config.tolerance_overrides = tolerances;
  if (out_dir.empty()) {
    const char* env = std::getenv("QHA_OUT");
    out_dir = env && *env ? env : ".";
  }
  config.out_dir = out_dir;

  try {
    qha::validate(config);
  } catch (const qha::QhaError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  const qha::NormReport report = qha::run_suite(config);
  print_summary(report);

  const auto fmt = format == "csv" ? qha::ReportFormat::csv : qha::ReportFormat::json;
  const auto path = config.out_dir / (format == "csv" ? "report.csv" : "report.json");
  try {
    std::filesystem::create_directories(config.out_dir);
    qha::emit_report(report, fmt, path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  std::cout << "report: " << path.string() << "\n";
  return report.all_pass() ? 0 : kExitFail;
}
