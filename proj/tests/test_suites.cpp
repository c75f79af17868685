#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "qaff/suites.hpp"

using namespace qaff;

namespace {
SuiteOptions opts(long n = 1000) {
  SuiteOptions o;
  o.plan.count = n;
  return o;
}
}  // namespace

TEST_CASE("registry") {
  std::set<int> idx;
  std::set<std::string> names;
  for (const auto& s : list_suites()) {
    idx.insert(s.index);
    names.insert(s.name);
    CHECK_FALSE(s.description.empty());
  }
  CHECK(idx.size() == list_suites().size());
  CHECK(names.size() == list_suites().size());
  for (const char* n : {"orbit", "cocycle", "pentagon", "multunitary", "bar", "stachura", "matchedpair", "selfdual",
                        "decompose", "kn-unitarity", "star", "equivariance", "duflomoore", "chistar", "deformation"})
    CHECK(find_suite(n) != nullptr);
  CHECK(find_suite("nope") == nullptr);
}

TEST_CASE("suite expansion") {
  CHECK(expand_suites("exact", "axb").size() == 10);
  CHECK(expand_suites("grid", "axb").size() == 7);
  CHECK(expand_suites("all", "axb").size() == 17);
  // registry order regardless of the order given
  auto two = expand_suites("bar,orbit", "axb");
  REQUIRE(two.size() == 2);
  CHECK(two[0] == "orbit");
  // group keywords skip suites that do not apply
  auto gl2 = expand_suites("exact", "gl2");
  CHECK(std::find(gl2.begin(), gl2.end(), "stachura") == gl2.end());
  CHECK(expand_suites("all", "exoo-negative") == std::vector<std::string>{"orbit"});

  CHECK_THROWS_AS(expand_suites("stachura", "gl2"), ConfigError);
  CHECK_THROWS_AS(expand_suites("orbit,typo", "axb"), ConfigError);
  CHECK_THROWS_AS(expand_suites("orbit", "sl3"), ConfigError);
  CHECK_THROWS_AS(run_suite("kn-unitarity", "gl1", opts()), ConfigError);
  CHECK_THROWS_AS(run_suite("cocycle", "exoo-negative", opts()), ConfigError);
}

TEST_CASE("one report line per suite, deterministic") {
  for (const char* s : {"cocycle", "matchedpair", "chistar"}) {
    CAPTURE(s);
    SuiteRun a = run_suite(s, "axb", opts());
    SuiteRun b = run_suite(s, "axb", opts());
    CHECK(a.report.identity == s);
    CHECK(a.passed());
    CHECK(a.report.to_json_line() == b.report.to_json_line());
    std::string line = a.report.to_json_line();
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"millis\":null") != std::string::npos);
  }
}

TEST_CASE("seed changes sampled results") {
  SuiteOptions o1 = opts(), o2 = opts();
  o2.plan.seed = 43;
  auto a = run_suite("cocycle", "gl2", o1).report;
  auto b = run_suite("cocycle", "gl2", o2).report;
  CHECK(a.worst_map_err != b.worst_map_err);
}

TEST_CASE("merged report offsets first_fail by part") {
  auto r = run_suite("orbit", "exoo-negative", opts(200));
  CHECK_FALSE(r.passed());
  REQUIRE(r.report.first_fail);
  CHECK(r.report.first_fail->detail.rfind("orbit-condition: ", 0) == 0);
}

TEST_CASE("starvation is reported") {
  SuiteOptions o = opts(200);
  o.plan.margin = 1e6;  // every guard fails
  auto r = run_suite("cocycle", "axb", o);
  CHECK(r.starved());
  CHECK_FALSE(r.passed());
  CHECK(r.report.failed == 0);
}

TEST_CASE("report JSON schema") {
  auto r = run_suite("bar", "gl1", opts(100)).report;
  std::string line = r.to_json_line();
  for (const char* k : {"identity", "model", "seed", "count", "margin", "tolerance", "valid", "failed",
                        "worst_map_err", "worst_weight_err", "first_fail", "millis"})
    CHECK(line.find(std::string("\"") + k + "\":") != std::string::npos);
  CHECK(r.to_json_line(true).find("\"millis\":null") == std::string::npos);
}

TEST_CASE("CSV tables") {
  std::ostringstream c, d;
  write_convergence_csv(c, {ConvergenceRow{128, 1e-5, 2e-4, 3e-4, 7}});
  CHECK(c.str().rfind("N,kn_err,star_hom,star_assoc,star_dropped\n128,", 0) == 0);
  DeformationTable t;
  t.rows.push_back({1.0, 0.3, 0.5});
  write_deformation_csv(d, t, {DeformationGridRow{1.0, 0.4, 1.0, 0.0}});
  CHECK(d.str().rfind("theta,map_sup,weight_sup,grid_norm\n1,", 0) == 0);
}
