#pragma once

#include <string>
#include <vector>

namespace qtele {

/// One comparison between a reference closed form and the simulation.
struct CheckResult {
  unsigned criterion = 0;
  std::string group;
  std::string name;
  bool passed = false;
  std::string expected;
  std::string actual;
};

struct VerifyOptions {
  /// Substring matched against group and check names; empty runs everything.
  std::string filter;
  /// Negative control: shifts the reference threshold constant so the
  /// threshold checks must fail.
  bool perturb_threshold_constant = false;
};

struct CriterionInfo {
  unsigned criterion;
  std::string group;
  std::string summary;
};

/// The ten criterion groups in order.
const std::vector<CriterionInfo>& verification_groups();

/// Runs every group whose name, or any of whose check names, matches the
/// filter. Checks are returned grouped by criterion, in a fixed order.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

}  // namespace qtele
