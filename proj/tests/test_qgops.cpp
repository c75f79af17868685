#include <doctest.h>

#include <cmath>

#include "qaff/qgops.hpp"

using namespace qaff;

namespace {

XPoint pt(double q, double xi) { return XPoint{{q}, {xi}}; }

SamplePlan plan(long n = 2000) {
  SamplePlan p;
  p.count = n;
  return p;
}

const char* kPositive[] = {"axb", "gl1", "gl2", "complex-axb"};

void check_point(const SymEval& e, std::initializer_list<double> coords, double w) {
  int i = 0;
  for (double c : coords) {
    int leg = i / 2;
    double got = (i % 2 == 0) ? e.image[leg].q[0] : e.image[leg].xi[0];
    CHECK(got == doctest::Approx(c));
    ++i;
  }
  CHECK(e.weight.real() == doctest::Approx(w));
  CHECK(e.weight.imag() == doctest::Approx(0.0));
}

// Ω with weight multiplied by 1 + δ sin ξ₁. A constant factor would cancel
// between the two sides of the cocycle identity.
SymOp perturbed_omega(const ModelPtr& m, double delta) {
  SymOp om = omega(m);
  return SymOp("Omega[perturbed]", 2, false, [om, delta](const Legs& x, double eps) -> std::optional<SymEval> {
    auto e = om.eval(x, eps);
    if (e) e->weight *= 1.0 + delta * std::sin(x[0].xi[0]);
    return e;
  });
}

}  // namespace

TEST_CASE("Omega on axb by hand") {
  auto m = make_model("axb");
  // r = φ⁻¹(−1 + 3) = −1/2
  auto e = omega(m).eval(Legs{pt(1, 3), pt(2, 1)}, 1e-3);
  REQUIRE(e);
  check_point(*e, {1, 3, -1, -2}, 2.0);
}

TEST_CASE("W-hat* on axb by hand") {
  auto m = make_model("axb");
  auto e = what_star(m).eval(Legs{pt(1, 3), pt(2, 1)}, 1e-3);
  REQUIRE(e);
  check_point(*e, {0.5, 6, 2, 4}, 2.0);
}

TEST_CASE("W-hat_Omega on axb by hand") {
  auto m = make_model("axb");
  auto e = what_omega_closed(m).eval(Legs{pt(1, 3), pt(2, 1)}, 1e-3);
  REQUIRE(e);
  check_point(*e, {2, 1.5, 0.5, 1}, 1.0);
}

TEST_CASE("JU*UJ on axb by hand") {
  auto m = make_model("axb");
  auto e = ju_u_j(m).eval(Legs{pt(3, 3)}, 1e-3);
  REQUIRE(e);
  check_point(*e, {-6, -1.5}, std::pow(0.5, 1.5));
}

TEST_CASE("Omega is undefined where xi0 + xi1 leaves the orbit") {
  auto m = make_model("axb");
  CHECK_FALSE(omega(m).eval(Legs{pt(1, 1.0), pt(2, 1)}, 1e-3).has_value());
  CHECK(omega(m).eval(Legs{pt(1, 1.01), pt(2, 1)}, 1e-3).has_value());
}

TEST_CASE("inverse laws for the building blocks") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto m = make_model(name);
    for (const SymOp& t : {omega(m), what(m), what_omega_closed(m), omega_bar(m), ju_u_j(m)})
      CHECK(check_inverse_law(m, t, t.name(), plan(500)).passed());
  }
}

TEST_CASE("cocycle identity on all positive models") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto r = check_cocycle(make_model(name), plan());
    CHECK(r.passed());
    CHECK(r.valid >= 0.9 * r.count);
  }
}

TEST_CASE("cocycle mutation is detected") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto m = make_model(name);
    auto r = check_cocycle_of(m, perturbed_omega(m, 1e-6), "cocycle[mutated]", plan(500));
    CHECK(r.failed > 0);
  }
}

TEST_CASE("coproduct of lambda_g is lambda_g (x) lambda_g") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto m = make_model(name);
    Rng rng(11);
    for (int k = 0; k < 5; ++k) {
      GroupElem g{m->sample_q(rng), m->sample_v(rng)};
      SymOp l = lambda_op(m, g);
      auto r = random_equality_test(coproduct(m, l), tensor(l, l), "coproduct(lambda)", m, plan(300), k);
      CHECK(r.passed());
    }
  }
}

TEST_CASE("lambda is a representation") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    CHECK(check_lambda_rep(make_model(name), plan(500)).passed());
  }
}

TEST_CASE("pentagon for W-hat and W-hat_Omega") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto m = make_model(name);
    CHECK(check_pentagon(m, what(m), "pentagon", plan()).passed());
    CHECK(check_pentagon(m, what_omega_closed(m), "pentagon-omega", plan()).passed());
  }
}

TEST_CASE("pentagon rejects mutated and non-multiplicative operators") {
  auto m = make_model("axb");
  // W₁₂W₁₃W₂₃ carries c³, W₂₃W₁₂ only c²
  CHECK(check_pentagon(m, scale_weight(what(m), 1.0 + 1e-6), "pentagon[scaled]", plan(500)).failed > 0);
  CHECK(check_pentagon(m, omega(m), "pentagon[Omega]", plan(500)).failed > 0);
}

TEST_CASE("multiplicative unitary factorization") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    CHECK(check_multunitary(make_model(name), plan()).passed());
  }
}

TEST_CASE("Omega-bar relation") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    CHECK(check_bar_relation(make_model(name), plan()).passed());
  }
}

TEST_CASE("Omega_q direct vs composed, including -id") {
  auto m = make_model("axb");
  auto qs = cohomologous_q_samples(m, 42, 10);
  REQUIRE(qs.size() == 10);
  CHECK(qs[0][0] == doctest::Approx(-1.0));
  CHECK(check_cohomologous(m, qs, plan(500)).passed());
  for (const char* name : {"gl1", "gl2", "complex-axb"}) {
    CAPTURE(name);
    auto mm = make_model(name);
    CHECK(check_cohomologous(mm, cohomologous_q_samples(mm, 42, 10), plan(300)).passed());
  }
}

TEST_CASE("Stachura cocycle equals transported Omega-bar") {
  auto r = check_stachura(plan());
  CHECK(r.passed());
}

TEST_CASE("Stachura orientation: only the (1 + xi2) dilation is a cocycle") {
  auto axb = make_model("axb");
  SymOp uu = tensor(footnote_U(), footnote_U());
  auto good = check_cocycle_of(axb, compose({uu, stachura_op(), uu}), "stachura-back", plan(500));
  auto bad = check_cocycle_of(axb, compose({uu, stachura_reversed_op(), uu}), "stachura-reversed", plan(500));
  CHECK(good.passed());
  CHECK(bad.failed > 0);
  CHECK(random_equality_test(stachura_transported(axb), stachura_reversed_op(), "reversed", axb, plan(500)).failed > 0);
}

TEST_CASE("Stachura generator flow oracle") {
  auto r = stachura_flow_oracle(64);
  CHECK(r.n == 64);
  CHECK(r.rel_err <= 1e-3);
}

TEST_CASE("Omega_theta tends to the identity") {
  auto axb = make_model("axb");
  auto t = omega_theta_limit(axb, default_thetas(), plan(1000));
  REQUIRE(t.rows.size() == 5);
  CHECK(t.strictly_decreasing);
  // |ξ| ≤ 1/2: weight |1 − θξ₁| deviates from 1 by at most θ/2
  for (const auto& r : t.rows) CHECK(r.weight_sup <= 0.5 * r.theta + 1e-12);
  CHECK_THROWS(omega_theta_limit(make_model("exoo-negative"), default_thetas(), plan(10)));
}
