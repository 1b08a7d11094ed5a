#pragma once

// The acceptance suite shared by `cosob verify` and the acceptance test binary.
//
// Every criterion is computed from seeded inputs and reduced in a fixed order,
// so the serialized report depends only on the criterion logic, never on the
// worker count. Runtimes are measured but kept out of the report unless asked.

#include <cstdint>
#include <string>
#include <vector>

#include "cosob/energy.hpp"

namespace cosob {

inline constexpr int kCriterionCount = 14;

struct CriterionResult {
  int id = 0;
  std::string name;
  std::string expected;
  std::string observed;
  std::string tolerance;
  bool pass = false;
  double runtime_ms = 0.0;
  double budget_ms = 0.0;  // 0: no runtime budget
};

struct GnRow {
  std::string label;
  std::string family;
  std::string params;
  int k = 2, j = 1;
  double p = 1.0;
  GnRatio result;
  GnStatus expected = GnStatus::Finite;
  bool pass = false;
};

struct AcceptanceOptions {
  int threads = 0;  // 0: resolve_threads()
  /// Worker count for the determinism rerun; 0 picks one different from `threads`.
  int rerun_threads = 0;
};

struct AcceptanceReport {
  std::vector<CriterionResult> criteria;
  std::vector<GnRow> gn_table;

  bool all_pass() const;
  /// Fixed-width table; the runtime column appears only when `timing` is set.
  std::string to_text(bool timing = false) const;
  std::string to_json(bool timing = false) const;
};

/// Runs criterion id in 1..13. Criterion 13 also fills `gn_table` when given.
CriterionResult run_criterion(int id, const AcceptanceOptions& opts, std::vector<GnRow>* gn_table = nullptr);

/// Runs criteria 1..13, then criterion 14, which repeats 1..13 with a different
/// worker count and compares the serialized reports byte for byte.
AcceptanceReport run_acceptance(const AcceptanceOptions& opts);

struct NormComposeSummary {
  int pairs = 0;
  int violations = 0;  // |h o f| > |h| |f| + 1e-12
  double worst_ratio = 0.0;  // max |h o f| / (|h| |f|)
};

/// Random double morphism pairs f: R^m -> R^n, h: R^n -> R^p with m, n, p in 1..4.
NormComposeSummary norm_compose_check(int pairs, std::uint64_t seed);

/// The GN ratio rows: both counterexample families and smooth flat references.
std::vector<GnRow> gn_table(int threads);

}  // namespace cosob
