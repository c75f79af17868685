#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qaff/qgops.hpp"

namespace qaff {

namespace {

Legs two(const XPoint& a, const XPoint& b) { return Legs{a, b}; }
Legs one(const XPoint& a) { return Legs{a}; }

// |q|^{3/2} Δ_Q(q)^{-1/2}
double jhat_weight(const DualOrbitModel& m, const QElem& q) {
  return std::pow(m.mod_v(q), 1.5) / std::sqrt(m.delta_q(q));
}

}  // namespace

SymOp omega(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.guard = [m](const Legs& x, double eps) { return m->in_domain(m->xi0() + x[0].xi, eps); };
  s.sigma = [m](const Legs& x) {
    QElem r = m->phi_inv(m->xi0() + x[0].xi);
    return two(x[0], {m->q_mul(r, x[1].q), m->flat(r, x[1].xi)});
  };
  s.weight = [m](const Legs& x) { return cplx(1.0 / m->mod_v(m->phi_inv(m->xi0() + x[0].xi))); };
  s.guard_inv = s.guard;
  s.sigma_inv = [m](const Legs& y) {
    QElem ri = m->q_inv(m->phi_inv(m->xi0() + y[0].xi));
    return two(y[0], {m->q_mul(ri, y[1].q), m->flat(ri, y[1].xi)});
  };
  return make_point_op("Omega", 2, false, std::move(s));
}

SymOp omega_star(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.guard = [m](const Legs& x, double eps) { return m->in_domain(m->xi0() + x[0].xi, eps); };
  s.sigma = [m](const Legs& x) {
    QElem ri = m->q_inv(m->phi_inv(m->xi0() + x[0].xi));
    return two(x[0], {m->q_mul(ri, x[1].q), m->flat(ri, x[1].xi)});
  };
  s.weight = [m](const Legs& x) { return cplx(m->mod_v(m->phi_inv(m->xi0() + x[0].xi))); };
  s.guard_inv = s.guard;
  s.sigma_inv = [m](const Legs& y) {
    QElem r = m->phi_inv(m->xi0() + y[0].xi);
    return two(y[0], {m->q_mul(r, y[1].q), m->flat(r, y[1].xi)});
  };
  return make_point_op("Omega*", 2, false, std::move(s));
}

SymOp what_star(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.sigma = [m](const Legs& x) {
    QElem q2i = m->q_inv(x[1].q);
    return two({m->q_mul(q2i, x[0].q), m->flat(q2i, x[0].xi)}, {x[1].q, x[0].xi + x[1].xi});
  };
  s.weight = [m](const Legs& x) { return cplx(m->mod_v(x[1].q)); };
  s.sigma_inv = [m](const Legs& y) {
    const QElem& q2 = y[1].q;
    DualElem xi1 = m->flat(q2, y[0].xi);
    return two({m->q_mul(q2, y[0].q), xi1}, {q2, y[1].xi - xi1});
  };
  return make_point_op("What*", 2, false, std::move(s));
}

SymOp what(const ModelPtr& m) { return invert(what_star(m)).renamed("What"); }

SymOp conj_J(const ModelPtr& mp) {
  PointMapSpec s;
  s.sigma = [](const Legs& x) { return one({x[0].q, -x[0].xi}); };
  s.weight = [](const Legs&) { return cplx(1.0); };
  s.sigma_inv = s.sigma;
  (void)mp;
  return make_point_op("J", 1, true, std::move(s));
}

SymOp conj_Jhat(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.sigma = [m](const Legs& x) {
    QElem qi = m->q_inv(x[0].q);
    return one({qi, m->flat(qi, x[0].xi)});
  };
  s.weight = [m](const Legs& x) { return cplx(jhat_weight(*m, x[0].q)); };
  s.sigma_inv = s.sigma;
  return make_point_op("Jhat", 1, true, std::move(s));
}

SymOp ju_u_j(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.guard = [m](const Legs& x, double eps) { return m->in_domain(m->xi0() + x[0].xi, eps); };
  s.sigma = [m](const Legs& x) {
    QElem pi = m->q_inv(m->phi_inv(m->xi0() + x[0].xi));
    return one({m->q_mul(pi, x[0].q), m->flat(pi, x[0].xi)});
  };
  s.weight = [m](const Legs& x) { return cplx(jhat_weight(*m, m->phi_inv(m->xi0() + x[0].xi))); };
  // η = (p⁻¹)♭ξ with ξ = φ(p) − ξ₀ gives φ(p⁻¹) = ξ₀ − η.
  s.guard_inv = [m](const Legs& y, double eps) { return m->in_domain(m->xi0() - y[0].xi, eps); };
  s.sigma_inv = [m](const Legs& y) {
    QElem p = m->q_inv(m->phi_inv(m->xi0() - y[0].xi));
    return one({m->q_mul(p, y[0].q), m->phi(p) - m->xi0()});
  };
  return make_point_op("JUJ", 1, false, std::move(s));
}

SymOp what_omega_closed(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.guard = [m](const Legs& x, double eps) {
    return m->in_domain(m->phi(m->q_inv(x[1].q)) + x[0].xi, eps) && m->in_domain(m->xi0() + x[0].xi, eps);
  };
  s.sigma = [m](const Legs& x) {
    const auto& [q1, xi1] = x[0];
    const auto& [q2, xi2] = x[1];
    QElem q2i = m->q_inv(q2);
    QElem ai = m->q_inv(m->phi_inv(m->phi(q2i) + xi1));
    QElem b = m->phi_inv(m->xi0() + xi1);
    return two({m->q_mul(q2, q1), m->flat(q2, xi1)}, {m->q_mul(ai, b), m->flat(ai, m->flat(q2i, xi2) - xi1)});
  };
  s.weight = [m](const Legs& x) {
    return cplx(m->mod_v(m->phi_inv(m->phi(m->q_inv(x[1].q)) + x[0].xi)));
  };
  // Inverse transformation: p = φ⁻¹(ξ₀+ξ₁), s = φ⁻¹(φ(p q₂) − ξ₁).
  s.guard_inv = [m](const Legs& y, double eps) {
    if (!m->in_domain(m->xi0() + y[0].xi, eps)) return false;
    QElem p = m->phi_inv(m->xi0() + y[0].xi);
    return m->in_domain(m->phi(m->q_mul(p, y[1].q)) - y[0].xi, eps);
  };
  s.sigma_inv = [m](const Legs& y) {
    const auto& [q1, xi1] = y[0];
    const auto& [q2, xi2] = y[1];
    QElem p = m->phi_inv(m->xi0() + xi1);
    QElem sq = m->phi_inv(m->phi(m->q_mul(p, q2)) - xi1);
    QElem si = m->q_inv(sq);
    return two({m->q_mul(si, q1), m->flat(si, xi1)}, {sq, xi1 + m->flat(p, xi2)});
  };
  return make_point_op("WhatOmega", 2, false, std::move(s));
}

SymOp what_omega_composed(const ModelPtr& m) {
  SymOp jj = tensor(conj_J(m), conj_Jhat(m));
  return compose({embed(ju_u_j(m), 2, {0}), jj, omega(m), what_star(m), jj, omega_star(m)})
      .renamed("WhatOmega[composed]");
}

SymOp omega_bar(const ModelPtr& mp) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.guard = [m](const Legs& x, double eps) { return m->in_domain(m->xi0() - x[1].xi, eps); };
  s.sigma = [m](const Legs& x) {
    QElem r = m->phi_inv(m->xi0() - x[1].xi);
    return two({m->q_mul(r, x[0].q), m->flat(r, x[0].xi)}, x[1]);
  };
  s.weight = [m](const Legs& x) { return cplx(1.0 / m->mod_v(m->phi_inv(m->xi0() - x[1].xi))); };
  s.guard_inv = s.guard;
  s.sigma_inv = [m](const Legs& y) {
    QElem ri = m->q_inv(m->phi_inv(m->xi0() - y[1].xi));
    return two({m->q_mul(ri, y[0].q), m->flat(ri, y[0].xi)}, y[1]);
  };
  return make_point_op("OmegaBar", 2, false, std::move(s));
}

SymOp omega_bar_composed(const ModelPtr& m) {
  SymOp jj = tensor(conj_J(m), conj_J(m));
  return compose({jj, swap_legs(omega(m), {1, 0}), jj}).renamed("OmegaBar[composed]");
}

SymOp coproduct_left(const ModelPtr& m, const SymOp& t) {
  return compose({embed(what_star(m), 3, {0, 1}), embed(t, 3, {1, 2}), embed(what(m), 3, {0, 1})});
}

SymOp coproduct_right(const ModelPtr& m, const SymOp& t) {
  return compose({embed(what_star(m), 3, {1, 2}), embed(t, 3, {0, 2}), embed(what(m), 3, {1, 2})});
}

SymOp coproduct(const ModelPtr& m, const SymOp& t) {
  return compose({what_star(m), embed(t, 2, {1}), what(m)});
}

SymOp lambda_q(const ModelPtr& mp, const QElem& q) {
  ModelPtr m = mp;
  QElem qi = m->q_inv(q);
  PointMapSpec s;
  s.sigma = [m, qi](const Legs& x) { return one({m->q_mul(qi, x[0].q), m->flat(qi, x[0].xi)}); };
  double w = m->mod_v(q);
  s.weight = [w](const Legs&) { return cplx(w); };
  s.sigma_inv = [m, q](const Legs& y) { return one({m->q_mul(q, y[0].q), m->flat(q, y[0].xi)}); };
  return make_point_op("lambda_q", 1, false, std::move(s));
}

SymOp lambda_v(const ModelPtr& mp, const VElem& v) {
  ModelPtr m = mp;
  PointMapSpec s;
  s.sigma = [](const Legs& x) { return x; };
  s.weight = [m, v](const Legs& x) { return m->pairing(x[0].xi, -v); };
  s.sigma_inv = s.sigma;
  return make_point_op("lambda_v", 1, false, std::move(s));
}

SymOp lambda_op(const ModelPtr& m, const GroupElem& g) {
  return compose(lambda_v(m, g.v), lambda_q(m, g.q)).renamed("lambda");
}

SymOp omega_q_direct(const ModelPtr& mp, const QElem& q) {
  ModelPtr m = mp;
  const DualElem xq = m->phi(q);
  const QElem qi = m->q_inv(q);
  // r = φ_q⁻¹(q♭ξ₀ + ξ₁) = φ⁻¹(q♭ξ₀ + ξ₁)·q⁻¹
  auto r_of = [m, xq, qi](const Legs& x) { return m->q_mul(m->phi_inv(xq + x[0].xi), qi); };
  PointMapSpec s;
  s.guard = [m, xq](const Legs& x, double eps) { return m->in_domain(xq + x[0].xi, eps); };
  s.sigma = [m, r_of](const Legs& x) {
    QElem r = r_of(x);
    return two(x[0], {m->q_mul(r, x[1].q), m->flat(r, x[1].xi)});
  };
  s.weight = [m, r_of](const Legs& x) { return cplx(1.0 / m->mod_v(r_of(x))); };
  s.guard_inv = s.guard;
  s.sigma_inv = [m, r_of](const Legs& y) {
    QElem ri = m->q_inv(r_of(y));
    return two(y[0], {m->q_mul(ri, y[1].q), m->flat(ri, y[1].xi)});
  };
  return make_point_op("Omega_q", 2, false, std::move(s));
}

SymOp omega_q_composed(const ModelPtr& m, const QElem& q) {
  SymOp lq = lambda_q(m, q);
  return compose({tensor(lq, lq), omega(m), invert(coproduct(m, lq))}).renamed("Omega_q[composed]");
}

SymOp cocycle_lhs(const ModelPtr& m, const SymOp& om) {
  return compose(embed(om, 3, {0, 1}), coproduct_left(m, om));
}

SymOp cocycle_rhs(const ModelPtr& m, const SymOp& om) {
  return compose(embed(om, 3, {1, 2}), coproduct_right(m, om));
}

SymOp pentagon_lhs(const SymOp& w) {
  return compose({embed(w, 3, {0, 1}), embed(w, 3, {0, 2}), embed(w, 3, {1, 2})});
}

SymOp pentagon_rhs(const SymOp& w) { return compose(embed(w, 3, {1, 2}), embed(w, 3, {0, 1})); }

VerificationReport check_cocycle_of(const ModelPtr& m, const SymOp& om, const std::string& identity,
                                    const SamplePlan& plan, std::uint64_t stream) {
  return random_equality_test(cocycle_lhs(m, om), cocycle_rhs(m, om), identity, m, plan, stream);
}

VerificationReport check_cocycle(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream) {
  return check_cocycle_of(m, omega(m), "cocycle", plan, stream);
}

VerificationReport check_pentagon(const ModelPtr& m, const SymOp& w, const std::string& identity,
                                  const SamplePlan& plan, std::uint64_t stream) {
  return random_equality_test(pentagon_lhs(w), pentagon_rhs(w), identity, m, plan, stream);
}

VerificationReport check_multunitary(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream) {
  return random_equality_test(what_omega_closed(m), what_omega_composed(m), "multunitary", m, plan, stream);
}

VerificationReport check_bar_relation(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream) {
  return random_equality_test(omega_bar(m), omega_bar_composed(m), "bar-relation", m, plan, stream);
}

VerificationReport check_inverse_law(const ModelPtr& m, const SymOp& t, const std::string& identity,
                                     const SamplePlan& plan, std::uint64_t stream) {
  SymOp id = identity_op(t.legs());
  VerificationReport a = random_equality_test(compose(t, invert(t)), id, identity, m, plan, stream);
  VerificationReport b = random_equality_test(compose(invert(t), t), id, identity, m, plan, stream + 1);
  a.merge(b);
  a.count += b.count;
  return a;
}

std::vector<QElem> cohomologous_q_samples(const ModelPtr& m, std::uint64_t seed, int count) {
  std::vector<QElem> qs;
  if (auto mi = m->minus_identity()) qs.push_back(*mi);
  Rng rng(derive_seed(seed, 0xc0c1));
  while (static_cast<int>(qs.size()) < count) qs.push_back(m->sample_q(rng));
  return qs;
}

VerificationReport check_cohomologous(const ModelPtr& m, const std::vector<QElem>& qs, const SamplePlan& plan,
                                      std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport total = make_report("omega-q", m->name(), plan);
  total.count = 0;
  for (size_t k = 0; k < qs.size(); ++k) {
    VerificationReport r = random_equality_test(omega_q_direct(m, qs[k]), omega_q_composed(m, qs[k]), "omega-q", m,
                                                plan, derive_seed(stream, k));
    if (r.first_fail) r.first_fail->detail = "q=" + qs[k].str() + " " + r.first_fail->detail;
    if (r.first_fail) r.first_fail->index += static_cast<long>(k) * plan.count;
    total.merge(r);
    total.count += r.count;
  }
  total.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return total;
}

VerificationReport check_lambda_rep(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream) {
  auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep = make_report("lambda-representation", m->name(), plan);
  rep = parallel_samples(rep, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    GroupElem g{m->sample_q(rng), m->sample_v(rng)}, h{m->sample_q(rng), m->sample_v(rng)};
    Legs x{XPoint{m->sample_q(rng), m->sample_xi(rng)}};
    SymOp lhs = compose(lambda_op(m, g), lambda_op(m, h));
    SymOp rhs = lambda_op(m, g_mul(*m, g, h));
    EqualResult e = equal_at(lhs, rhs, x, plan.margin, plan.tolerance);
    if (e.status == EqualStatus::GuardFail) return;
    ++r.valid;
    r.worst_map_err = std::max(r.worst_map_err, e.map_err);
    r.worst_weight_err = std::max(r.worst_weight_err, e.weight_err);
    if (e.status != EqualStatus::Ok) r.record_failure(i, "lambda_g lambda_h != lambda_gh at x=" + x.str());
  });
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<double> default_thetas() { return {1.0, 0.5, 0.25, 0.125, 0.0625}; }

DeformationTable omega_theta_limit(const ModelPtr& m, const std::vector<double>& thetas, const SamplePlan& plan,
                                   double box, std::uint64_t stream) {
  if (!m->phi_open()) throw std::invalid_argument("omega_theta_limit: openness flag not set for " + m->name());
  DeformationTable table;
  for (double theta : thetas) {
    auto q = m->scalar(theta);
    if (!q) throw std::invalid_argument("omega_theta_limit: no real scalings in Q for " + m->name());
    SymOp op = omega_q_direct(m, *q);
    DeformationRow row{theta, 0.0, 0.0};
    // Same sample stream for every θ so rows are comparable point by point.
    for (long i = 0; i < plan.count; ++i) {
      Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
      Legs x = default_sampler(m, 2)(rng);
      for (int l = 0; l < 2; ++l) x[l].xi = m->sample_xi(rng, box);
      auto e = op.eval(x, plan.margin);
      if (!e) continue;
      row.map_sup = std::max(row.map_sup, distance(e->image, x));
      row.weight_sup = std::max(row.weight_sup, std::abs(e->weight - 1.0));
    }
    table.rows.push_back(row);
  }
  table.strictly_decreasing = true;
  for (size_t k = 1; k < table.rows.size(); ++k) {
    if (!(table.rows[k].map_sup < table.rows[k - 1].map_sup) ||
        !(table.rows[k].weight_sup < table.rows[k - 1].weight_sup))
      table.strictly_decreasing = false;
  }
  return table;
}

}  // namespace qaff
