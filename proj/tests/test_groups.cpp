#include <doctest.h>

#include <cmath>

#include "qaff/groups.hpp"

using namespace qaff;

namespace {
SamplePlan small_plan(long n = 2000) {
  SamplePlan p;
  p.count = n;
  return p;
}
}  // namespace

TEST_CASE("axb group law by hand") {
  auto m = make_model("axb");
  GroupElem a{{2.0}, {1.0}}, b{{3.0}, {4.0}};
  GroupElem ab = g_mul(*m, a, b);
  CHECK(ab.q[0] == doctest::Approx(6.0));
  CHECK(ab.v[0] == doctest::Approx(9.0));

  GroupElem i = g_inv(*m, GroupElem{{2.0}, {4.0}});
  CHECK(i.q[0] == doctest::Approx(0.5));
  CHECK(i.v[0] == doctest::Approx(-2.0));

  // (−1, 3) is an involution
  GroupElem j = g_inv(*m, GroupElem{{-1.0}, {3.0}});
  CHECK(j.q[0] == doctest::Approx(-1.0));
  CHECK(j.v[0] == doctest::Approx(3.0));
}

TEST_CASE("modular function") {
  CHECK(delta_G(*make_model("gl1"), GroupElem{{2.0}, {7.0}}) == doctest::Approx(0.5));
  // |diag(2,1)| = det² = 4 on Mat₂
  auto gl2 = make_model("gl2");
  CHECK(delta_G(*gl2, GroupElem{{2.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 0.0, 0.0}}) == doctest::Approx(0.25));
}

TEST_CASE("dual semidirect product law") {
  auto m = make_model("axb");
  AffDualElem a{{-2.0}, {0.0}}, b{{-1.0}, {-2.0}};
  AffDualElem ab = affdual_mul(*m, a, b);
  CHECK(ab.q[0] == doctest::Approx(2.0));
  CHECK(ab.xi[0] == doctest::Approx(1.0));
}

TEST_CASE("phi and phi_inv on axb by hand") {
  auto m = make_model("axb");
  CHECK(m->phi(QElem{2.0})[0] == doctest::Approx(-0.5));
  CHECK(m->phi_inv(DualElem{4.0})[0] == doctest::Approx(-0.25));
  CHECK(m->flat(QElem{2.0}, DualElem{3.0})[0] == doctest::Approx(1.5));
}

TEST_CASE("orbit condition holds on positive models") {
  for (const char* name : {"axb", "gl1", "gl2", "complex-axb"}) {
    CAPTURE(name);
    auto m = make_model(name);
    auto r = check_orbit_condition(*m, small_plan());
    CHECK(r.passed());
    CHECK(r.worst_map_err <= 1e-12);
    auto inv = check_model_invariants(*m, small_plan());
    CHECK(inv.passed());
  }
}

TEST_CASE("negative instance fails with a witness") {
  auto m = make_model("exoo-negative");
  CHECK(m->negative_instance());
  auto r = check_orbit_condition(*m, small_plan(500));
  CHECK_FALSE(r.passed());
  REQUIRE(r.first_fail.has_value());
  CHECK_FALSE(r.first_fail->detail.empty());
}

TEST_CASE("unknown model is rejected") { CHECK_THROWS_AS(make_model("sl2"), std::invalid_argument); }

TEST_CASE("Haar measure transport d_Q -> d xi on axb") {
  CHECK(dqdxi_relative_error(0.7, 0.5) < 1e-6);
  CHECK(dqdxi_relative_error(-1.3, 0.8) < 1e-6);
}

TEST_CASE("sampling is reproducible") {
  auto m = make_model("gl2");
  Rng a(7), b(7);
  for (int i = 0; i < 20; ++i) CHECK(distance(m->sample_q(a), m->sample_q(b)) == 0.0);
}
