#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "qaff/matchedpair.hpp"

namespace qaff {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

XPoint sample_x(const DualOrbitModel& m, Rng& rng) { return XPoint{m.sample_q(rng), m.sample_xi(rng)}; }

// Accumulates sub-check errors of one sample; at most one failure is counted per sample.
struct SampleCheck {
  VerificationReport& r;
  long i;
  double tol;
  bool failed = false;

  void operator()(double err, const std::string& what) {
    r.worst_map_err = std::max(r.worst_map_err, std::isnan(err) ? INFINITY : err);
    if (err <= tol || failed) return;
    failed = true;
    r.record_failure(i, what);
  }
};

}  // namespace

std::optional<XPair> v_map(const DualOrbitModel& m, const XPoint& x, const XPoint& y, double margin) {
  const auto& [q1, xi1] = x;
  const auto& [q2, xi2] = y;
  QElem q2i = m.q_inv(q2);
  DualElem s1 = m.flat(q2i, m.xi0()) + xi1;
  DualElem s2 = m.xi0() + xi1;
  if (!m.in_domain(s1, margin) || !m.in_domain(s2, margin)) return std::nullopt;
  QElem ai = m.q_inv(m.phi_inv(s1));
  XPair out{{m.q_mul(q2, q1), m.flat(q2, xi1)}, {m.q_mul(ai, m.phi_inv(s2)), m.flat(ai, m.flat(q2i, xi2) - xi1)}};
  if (!out.a.q.finite() || !out.a.xi.finite() || !out.b.q.finite() || !out.b.xi.finite()) return std::nullopt;
  return out;
}

std::optional<XPair> v_inv_map(const DualOrbitModel& m, const XPoint& a, const XPoint& b, double margin) {
  const auto& [q1, xi1] = a;
  const auto& [q2, xi2] = b;
  if (!m.in_domain(m.xi0() + xi1, margin)) return std::nullopt;
  QElem p = m.phi_inv(m.xi0() + xi1);
  DualElem t = m.flat(p, m.flat(q2, m.xi0())) - xi1;
  if (!m.in_domain(t, margin)) return std::nullopt;
  QElem s = m.phi_inv(t);
  QElem si = m.q_inv(s);
  XPair out{{m.q_mul(si, q1), m.flat(si, xi1)}, {s, xi1 + m.flat(p, xi2)}};
  if (!out.a.q.finite() || !out.a.xi.finite() || !out.b.q.finite() || !out.b.xi.finite()) return std::nullopt;
  return out;
}

QElem f1(const DualOrbitModel& m, const XPoint& x) { return m.q_inv(x.q); }

XPoint act1(const DualOrbitModel& m, const XPoint& x, const QElem& a) {
  QElem ai = m.q_inv(a);
  return {m.q_mul(ai, x.q), m.flat(ai, x.xi)};
}

std::optional<QElem> f2(const DualOrbitModel& m, const XPoint& x, double margin) {
  if (!m.in_domain(x.xi + m.xi0(), margin)) return std::nullopt;
  return m.q_inv(m.phi_inv(x.xi + m.xi0()));
}

std::optional<XPoint> act2(const DualOrbitModel& m, const XPoint& x, const QElem& b, double margin) {
  QElem bi = m.q_inv(b);
  DualElem t = m.flat(bi, m.phi(x.q) - m.xi0()) + m.xi0();
  if (!m.in_domain(t, margin)) return std::nullopt;
  return XPoint{m.phi_inv(t), m.flat(bi, x.xi + m.xi0()) - m.xi0()};
}

AffDualElem h1(const DualOrbitModel& m, const QElem& q) { return {q, m.dual_zero()}; }

AffDualElem h2(const DualOrbitModel& m, const QElem& q) { return {q, m.xi0() - m.phi(q)}; }

std::optional<std::pair<QElem, QElem>> decompose(const DualOrbitModel& m, const AffDualElem& g, double margin) {
  DualElem t = g.xi + m.phi(g.q);
  if (!m.in_domain(t, margin)) return std::nullopt;
  QElem q1 = m.phi_inv(t);
  return std::make_pair(q1, m.q_mul(m.q_inv(q1), g.q));
}

VerificationReport check_v_inverse(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  VerificationReport rep = make_report("v-inverse", m.name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    XPoint x = sample_x(m, rng), y = sample_x(m, rng);
    auto v = v_map(m, x, y, plan.margin);
    auto w = v_inv_map(m, x, y, plan.margin);
    if (!v || !w) return;
    auto vv = v_inv_map(m, v->a, v->b, plan.margin);
    auto ww = v_map(m, w->a, w->b, plan.margin);
    if (!vv || !ww) return;
    ++r.valid;
    SampleCheck chk{r, i, plan.tolerance};
    double e = std::max({distance(vv->a, x), distance(vv->b, y), distance(ww->a, x), distance(ww->b, y)});
    chk(e, "v/v_inv round trip at x=" + x.q.str() + "," + x.xi.str());
  });
  rep.millis = ms_since(t0);
  return rep;
}

VerificationReport check_reconstruction(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  VerificationReport rep = make_report("reconstruction", m.name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    XPoint x = sample_x(m, rng), y = sample_x(m, rng);
    QElem a = m.sample_q(rng), b = m.sample_q(rng);
    auto v = v_map(m, x, y, plan.margin);
    auto vi = v_inv_map(m, x, y, plan.margin);
    auto f2x = f2(m, x, plan.margin);
    auto x_b = act2(m, x, b, plan.margin);
    if (!v || !vi || !f2x || !x_b) return;
    auto y_f2x = act2(m, y, *f2x, plan.margin);
    auto f2xb = f2(m, *x_b, plan.margin);
    auto x_ba = act2(m, *x_b, a, plan.margin);
    auto x_b_a = act2(m, x, m.q_mul(b, a), plan.margin);
    if (!y_f2x || !f2xb || !x_ba || !x_b_a) return;
    ++r.valid;
    SampleCheck chk{r, i, plan.tolerance};
    const std::string at = " at x=" + x.q.str() + "," + x.xi.str() + " y=" + y.q.str() + "," + y.xi.str();
    // x•y = x f₁(y)
    chk(distance(v->a, act1(m, x, f1(m, y))), "x.y != x f1(y)" + at);
    // x*y = y f₂(x)
    chk(distance(vi->b, *y_f2x), "x*y != y f2(x)" + at);
    // equivariance of f₁, f₂
    chk(distance(f1(m, act1(m, x, a)), m.q_mul(f1(m, x), a)), "f1 not equivariant" + at);
    chk(distance(*f2xb, m.q_mul(*f2x, b)), "f2 not equivariant" + at);
    // right action laws
    chk(distance(act1(m, act1(m, x, a), b), act1(m, x, m.q_mul(a, b))), "act1 not an action" + at);
    chk(distance(*x_ba, *x_b_a), "act2 not an action" + at);
  });
  rep.millis = ms_since(t0);
  return rep;
}

VerificationReport check_35b(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream, double h2_xi_shift) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  auto h2m = [&](const QElem& q) {
    AffDualElem e = h2(m, q);
    for (int k = 0; k < e.xi.size(); ++k) e.xi[k] += h2_xi_shift;
    return e;
  };
  VerificationReport rep = make_report("bicrossed-compatibility", m.name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    XPoint x = sample_x(m, rng), y = sample_x(m, rng);
    auto v = v_map(m, x, y, plan.margin);
    auto f2x = f2(m, x, plan.margin);
    if (!v || !f2x) return;
    auto f2a = f2(m, v->a, plan.margin);
    if (!f2a) return;
    AffDualElem lhs = affdual_mul(m, h2m(*f2x), h1(m, f1(m, y)));
    AffDualElem rhs = affdual_mul(m, h1(m, f1(m, v->b)), h2m(*f2a));
    if (!lhs.q.finite() || !lhs.xi.finite() || !rhs.q.finite() || !rhs.xi.finite()) return;
    ++r.valid;
    SampleCheck chk{r, i, plan.tolerance};
    chk(distance(lhs, rhs), "h2(f2(x))h1(f1(y)) != h1(f1(b))h2(f2(a)) at x=" + x.q.str() + "," + x.xi.str());
  });
  rep.millis = ms_since(t0);
  return rep;
}

VerificationReport check_decompose(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  const double recompose_tol = 1e-10;
  VerificationReport rep = make_report("decompose", m.name(), plan);
  rep.tolerance = recompose_tol;
  rep.min_valid_fraction = 0.99;
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    AffDualElem g{m.sample_q(rng), m.sample_xi(rng)};
    auto d = decompose(m, g, plan.margin);
    if (!d) return;
    ++r.valid;
    SampleCheck chk{r, i, recompose_tol};
    AffDualElem back = affdual_mul(m, h1(m, d->first), h2(m, d->second));
    chk(distance(back, g), "h1(q1)h2(q2) != g for g=" + g.q.str() + "," + g.xi.str());
    // Reverse direction: (a, b) ↦ h₁(a)h₂(b) ↦ decompose returns (a, b).
    QElem a = m.sample_q(rng), b = m.sample_q(rng);
    auto d2 = decompose(m, affdual_mul(m, h1(m, a), h2(m, b)), plan.margin);
    if (d2) {
      double e = std::max(distance(d2->first, a), distance(d2->second, b));
      chk(e, "decompose(h1(a)h2(b)) != (a,b) for a=" + a.str() + " b=" + b.str());
    }
  });
  rep.notes.push_back("success rate " + std::to_string(static_cast<double>(rep.valid) / plan.count) +
                      " (required >= 0.99)");
  rep.millis = ms_since(t0);
  return rep;
}

VerificationReport check_h_homomorphisms(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  VerificationReport rep = make_report("h-embeddings", m.name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    QElem a = m.sample_q(rng), b = m.sample_q(rng);
    ++r.valid;
    SampleCheck chk{r, i, plan.tolerance};
    QElem ab = m.q_mul(a, b);
    chk(distance(affdual_mul(m, h1(m, a), h1(m, b)), h1(m, ab)), "h1 not a homomorphism");
    chk(distance(affdual_mul(m, h2(m, a), h2(m, b)), h2(m, ab)), "h2 not a homomorphism");
    // h₁(q) = h₂(q') forces q = q' and φ(q') = ξ₀, so the solved q' must be e.
    QElem sol = m.phi_inv(m.xi0());
    chk(distance(sol, m.q_identity()), "G1 and G2 intersect beyond e");
  });
  rep.millis = ms_since(t0);
  return rep;
}

VerificationReport selfdual_check(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  auto mi = m.minus_identity();
  if (!mi) throw std::invalid_argument("MinusIdNotInQ: " + m.name());
  const AffDualElem c{*mi, m.xi0()};
  const AffDualElem ci = affdual_inv(m, c);
  auto conj = [&](const AffDualElem& g) { return affdual_mul(m, affdual_mul(m, c, g), ci); };
  VerificationReport rep = make_report("selfdual", m.name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    QElem q = m.sample_q(rng);
    ++r.valid;
    SampleCheck chk{r, i, plan.tolerance};
    chk(distance(conj(h1(m, q)), h2(m, q)), "c h1(q) c^-1 != h2(q) at q=" + q.str());
    chk(distance(conj(h2(m, q)), h1(m, q)), "c h2(q) c^-1 != h1(q) at q=" + q.str());
  });
  rep.millis = ms_since(t0);
  return rep;
}

VerificationReport check_pentagon_maps(const ModelPtr& mp, const SamplePlan& plan, std::uint64_t stream,
                                       double mutate) {
  auto t0 = std::chrono::steady_clock::now();
  const DualOrbitModel& m = *mp;
  // v as a weight-free SymOp; only σ matters below.
  SymOp v("v", 2, false, [mp, mutate](const Legs& x, double margin) -> std::optional<SymEval> {
    auto out = v_map(*mp, x[0], x[1], margin);
    if (!out) return std::nullopt;
    if (mutate != 0.0) out->b.q = QElem((1.0 + mutate) * out->b.q.c);
    return SymEval{Legs{out->a, out->b}, 1.0};
  });
  SymOp lhs = pentagon_lhs(v), rhs = pentagon_rhs(v);
  LegSampler sampler = default_sampler(mp, 3);
  VerificationReport rep = make_report("pentagon-maps", m.name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    Legs x = sampler(rng);
    auto a = lhs.eval(x, plan.margin);
    auto b = rhs.eval(x, plan.margin);
    if (!a || !b) return;
    ++r.valid;
    SampleCheck chk{r, i, plan.tolerance};
    chk(distance(a->image, b->image), "v12 v13 v23 != v23 v12 at x=" + x.str());
  });
  rep.millis = ms_since(t0);
  return rep;
}

}  // namespace qaff
