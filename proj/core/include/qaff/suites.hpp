#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaff/numchecks.hpp"

namespace qaff {

struct SuiteInfo {
  int index;  // stable; feeds seed derivation
  std::string name;
  std::string description;
  bool axb_only = false;
  bool grid = false;  // counts are sub-checks, --samples is ignored
};

const std::vector<SuiteInfo>& list_suites();
const SuiteInfo* find_suite(const std::string& name);

// Raised for suite/model combinations that cannot be run (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SuiteOptions {
  SamplePlan plan;
  std::optional<int> grid_n;  // overrides the single-grid size of grid suites
  double L = 12.0;
};

struct SuiteRun {
  // One line per suite: parts merged, identity = suite name.
  VerificationReport report;
  std::vector<VerificationReport> parts;
  std::vector<ConvergenceRow> convergence;
  std::optional<DeformationTable> deformation;
  std::vector<DeformationGridRow> deformation_grid;

  bool passed() const;
  // Any part short of its own valid-sample floor.
  bool starved() const;
};

// Names expanded from a comma list; "exact", "grid" and "all" select groups.
// Result follows registry order. Throws ConfigError on unknown names.
std::vector<std::string> expand_suites(const std::string& list);
// Same, restricted to suites that apply to the model. Group keywords skip
// inapplicable suites; an explicitly named one raises ConfigError.
std::vector<std::string> expand_suites(const std::string& list, const std::string& model);
// Reason the suite cannot run on the model, if any.
std::optional<std::string> suite_rejects(const SuiteInfo& s, const DualOrbitModel& m);

// Throws ConfigError for unknown suites and unsupported models.
SuiteRun run_suite(const std::string& suite, const std::string& model, const SuiteOptions& opt);

}  // namespace qaff
