#pragma once

// The invariant suite behind the `check` subcommand: every identity and
// bound the library promises, run against seeded instances.

#include <cstdint>
#include <string>
#include <vector>

namespace lpt {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;  // empty on pass, diagnostic on fail
};

struct CheckOptions {
  bool quick = false;
  std::uint64_t seed = 0;
};

std::vector<CheckResult> run_checks(const CheckOptions& options);

/// Independent dense-grid oracle for the truncated state metric on the
/// two-level tower dims (1,2) with alpha = (0, alpha1) at p = 2, between
/// the two point states. Searches real cores exhaustively plus local
/// refinement; used to cross-check mk_lower.
double metric_grid_oracle_12(double alpha1);

}  // namespace lpt
