#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace diffwave {

struct AcceptanceOptions {
  /// Skip the long runs (P4 to P8).
  bool fast = false;
  /// Newton tolerance used for the P1 profiles.
  double profile_tol = 1.0e-10;
  /// Directory for verify.json and the CSV/SVG artifacts; empty writes nothing.
  std::string out_dir = "verify_out";
  /// Worker threads; zero reads DIFFWAVE_THREADS, then the hardware count.
  unsigned threads = 0;
  std::uint64_t seed = 20240601;
};

/// One measured quantity and the bound it is held to.
struct Check {
  std::string name;
  double value = 0.0;
  /// Human-readable bound, e.g. "< 1e-08".
  std::string bound;
  bool pass = false;
  /// Reported only; does not affect the criterion.
  bool informational = false;
};

struct CriterionResult {
  std::string id;
  std::string title;
  bool skipped = false;
  std::vector<Check> checks;

  bool pass() const;
  /// "P1 PASS  title  (n/m checks)" and, on failure, the failing checks.
  std::string summary_line() const;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  bool fast = false;
  /// A scenario stopped with a BlowUpError.
  bool blow_up = false;

  /// True when no criterion that ran has a failing gated check.
  bool pass() const;
};

/// Runs P1 to P9. Independent scenarios are spread over `threads` workers;
/// the report does not depend on the thread count or the order they finish.
AcceptanceReport run_acceptance(const AcceptanceOptions& options);

/// verify.json body: options, criteria and checks. No timing data.
std::string format_report_json(const AcceptanceReport& report, const AcceptanceOptions& options);

/// DIFFWAVE_THREADS if set and positive, else hardware_concurrency (at least 1).
unsigned default_thread_count();

}  // namespace diffwave
