#include <doctest.h>

#include "qaff/matchedpair.hpp"

using namespace qaff;

namespace {

XPoint pt(double q, double xi) { return XPoint{{q}, {xi}}; }

SamplePlan plan(long n = 2000) {
  SamplePlan p;
  p.count = n;
  return p;
}

const char* kPositive[] = {"axb", "gl1", "gl2", "complex-axb"};

}  // namespace

TEST_CASE("f2 and decompose on axb by hand") {
  auto m = make_model("axb");
  auto f = f2(*m, pt(2, 2), 1e-3);
  REQUIRE(f);
  CHECK((*f)[0] == doctest::Approx(-1.0));

  // q₁ = φ⁻¹(1 + φ(2)) = φ⁻¹(1/2) = −2, q₂ = q₁⁻¹·2 = −1
  auto d = decompose(*m, AffDualElem{{2.0}, {1.0}}, 1e-3);
  REQUIRE(d);
  CHECK(d->first[0] == doctest::Approx(-2.0));
  CHECK(d->second[0] == doctest::Approx(-1.0));
  AffDualElem back = affdual_mul(*m, h1(*m, d->first), h2(*m, d->second));
  CHECK(distance(back, AffDualElem{{2.0}, {1.0}}) < 1e-15);
}

TEST_CASE("h2 on axb by hand") {
  auto m = make_model("axb");
  AffDualElem h = h2(*m, QElem{2.0});
  CHECK(h.q[0] == doctest::Approx(2.0));
  CHECK(h.xi[0] == doctest::Approx(-0.5));
  AffDualElem g = h1(*m, QElem{2.0});
  CHECK(g.xi[0] == 0.0);
}

TEST_CASE("v is the sigma of W-hat_Omega and v^-1 inverts it") {
  auto m = make_model("axb");
  XPoint x = pt(1, 3), y = pt(2, 1);
  auto v = v_map(*m, x, y, 1e-3);
  REQUIRE(v);
  CHECK(v->a.q[0] == doctest::Approx(2.0));
  CHECK(v->a.xi[0] == doctest::Approx(1.5));
  CHECK(v->b.q[0] == doctest::Approx(0.5));
  CHECK(v->b.xi[0] == doctest::Approx(1.0));
  auto back = v_inv_map(*m, v->a, v->b, 1e-3);
  REQUIRE(back);
  CHECK(distance(back->a, x) < 1e-14);
  CHECK(distance(back->b, y) < 1e-14);
}

TEST_CASE("matched pair identities on positive models") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto m = make_model(name);
    CHECK(check_v_inverse(m, plan()).passed());
    CHECK(check_reconstruction(m, plan()).passed());
    CHECK(check_35b(m, plan()).passed());
    CHECK(check_h_homomorphisms(m, plan()).passed());
    CHECK(check_pentagon_maps(m, plan()).passed());
  }
}

TEST_CASE("decompose success rate and recomposition") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    auto r = check_decompose(make_model(name), plan(5000));
    CHECK(r.passed());
    CHECK(r.valid >= 0.99 * r.count);
  }
}

TEST_CASE("mutations are detected") {
  auto m = make_model("axb");
  CHECK(check_35b(m, plan(500), 0, 1e-6).failed > 0);
  // unmutated control
  CHECK(check_35b(m, plan(500), 0, 0.0).passed());
  CHECK(check_pentagon_maps(m, plan(500), 0, 1e-6).failed > 0);
}

TEST_CASE("self-duality") {
  for (const char* name : kPositive) {
    CAPTURE(name);
    CHECK(selfdual_check(make_model(name), plan()).passed());
  }
}

TEST_CASE("each failing sample is counted once") {
  auto m = make_model("gl1");
  auto r = check_35b(m, plan(300), 0, 0.5);
  CHECK(r.failed <= r.valid);
  CHECK(r.failed > 0);
}
