#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "qaff/report.hpp"

namespace qaff {

VerificationReport make_report(std::string identity, std::string model, const SamplePlan& plan) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.model = std::move(model);
  r.seed = plan.seed;
  r.count = plan.count;
  r.margin = plan.margin;
  r.tolerance = plan.tolerance;
  return r;
}

void VerificationReport::record_failure(long index, std::string detail) {
  ++failed;
  if (!first_fail || index < first_fail->index) first_fail = FailRecord{index, std::move(detail)};
}

void VerificationReport::merge(const VerificationReport& o) {
  valid += o.valid;
  failed += o.failed;
  // NaN counts as worst.
  auto worst = [](double a, double b) { return (std::isnan(a) || std::isnan(b)) ? NAN : std::max(a, b); };
  worst_map_err = worst(worst_map_err, o.worst_map_err);
  worst_weight_err = worst(worst_weight_err, o.worst_weight_err);
  if (o.first_fail && (!first_fail || o.first_fail->index < first_fail->index)) first_fail = o.first_fail;
  millis += o.millis;
}

namespace {

nlohmann::json num(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

std::string VerificationReport::to_json_line(bool with_timing) const {
  nlohmann::ordered_json j;
  j["identity"] = identity;
  j["model"] = model;
  j["seed"] = seed;
  j["count"] = count;
  j["margin"] = num(margin);
  j["tolerance"] = num(tolerance);
  j["valid"] = valid;
  j["failed"] = failed;
  j["worst_map_err"] = num(worst_map_err);
  j["worst_weight_err"] = num(worst_weight_err);
  if (first_fail) {
    j["first_fail"] = {{"index", first_fail->index}, {"detail", first_fail->detail}};
  } else if (starved()) {
    j["first_fail"] = {{"index", -1}, {"detail", "insufficient valid samples"}};
  } else {
    j["first_fail"] = nullptr;
  }
  if (with_timing) {
    j["millis"] = std::round(millis * 1000.0) / 1000.0;
  } else {
    j["millis"] = nullptr;
  }
  if (!notes.empty()) j["notes"] = notes;
  return j.dump();
}

}  // namespace qaff
