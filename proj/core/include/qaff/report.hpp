#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qaff {

struct SamplePlan {
  std::uint64_t seed = 42;
  long count = 10000;
  double margin = 1e-3;
  double tolerance = 1e-9;
};

struct FailRecord {
  long index = -1;
  std::string detail;
};

// One identity check. For sampled suites count/valid/failed are sample counts;
// grid suites count sub-checks (family members, grid sizes) instead.
struct VerificationReport {
  std::string identity;
  std::string model;
  std::uint64_t seed = 0;
  long count = 0;
  double margin = 0.0;
  double tolerance = 0.0;
  long valid = 0;
  long failed = 0;
  double worst_map_err = 0.0;
  double worst_weight_err = 0.0;
  std::optional<FailRecord> first_fail;
  double millis = 0.0;
  // Minimum fraction of attempted samples that must pass their guards.
  double min_valid_fraction = 0.9;
  std::vector<std::string> notes;

  bool starved() const { return static_cast<double>(valid) < min_valid_fraction * static_cast<double>(count); }
  bool passed() const { return failed == 0 && !starved(); }

  void record_failure(long index, std::string detail);
  // Deterministic merge: worst errors by max, first failure by lowest index.
  void merge(const VerificationReport& other);

  // Single JSON line. Wall time is written only when with_timing is set, so
  // that reports are a pure function of the run configuration.
  std::string to_json_line(bool with_timing = false) const;
};

VerificationReport make_report(std::string identity, std::string model, const SamplePlan& plan);

}  // namespace qaff
