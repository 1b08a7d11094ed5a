// Acceptance suite: one pass/fail line per criterion, runtime budgets enforced.

#include <cstdio>
#include <string>

#include "cosob/acceptance.hpp"

int main() {
  const cosob::AcceptanceReport rep = cosob::run_acceptance({});
  int failures = 0;
  for (const auto& c : rep.criteria) {
    const bool in_budget = c.budget_ms <= 0.0 || c.runtime_ms <= c.budget_ms;
    const bool ok = c.pass && in_budget;
    failures += !ok;
    std::printf("%s criterion %02d %s: %s [%.0f ms", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), c.observed.c_str(),
                c.runtime_ms);
    if (c.budget_ms > 0.0) std::printf(" of %.0f ms budget%s", c.budget_ms, in_budget ? "" : ", OVER BUDGET");
    std::printf("]\n");
  }
  const std::string text = rep.to_text();
  const std::size_t table = text.find("GN ratio table (");
  if (table != std::string::npos) std::printf("\n%s", text.substr(table).c_str());
  std::printf("%d of %zu criteria failed\n", failures, rep.criteria.size());
  return failures == 0 ? 0 : 1;
}
