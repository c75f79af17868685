#include <cmath>
#include <cstdio>
#include <sstream>

#include "qaff/groups.hpp"

namespace qaff {

std::string Coords::str() const {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (int i = 0; i < n; ++i) os << (i ? "," : "") << c[i];
  os << ')';
  return os.str();
}

GroupElem g_mul(const DualOrbitModel& m, const GroupElem& a, const GroupElem& b) {
  return {m.q_mul(a.q, b.q), a.v + m.q_act_v(a.q, b.v)};
}

GroupElem g_inv(const DualOrbitModel& m, const GroupElem& a) {
  QElem qi = m.q_inv(a.q);
  return {qi, -m.q_act_v(qi, a.v)};
}

GroupElem g_identity(const DualOrbitModel& m) { return {m.q_identity(), m.v_zero()}; }

double delta_G(const DualOrbitModel& m, const GroupElem& a) { return m.delta_q(a.q) / m.mod_v(a.q); }

AffDualElem affdual_mul(const DualOrbitModel& m, const AffDualElem& a, const AffDualElem& b) {
  return {m.q_mul(a.q, b.q), a.xi + m.flat(a.q, b.xi)};
}

AffDualElem affdual_inv(const DualOrbitModel& m, const AffDualElem& a) {
  QElem qi = m.q_inv(a.q);
  return {qi, -m.flat(qi, a.xi)};
}

AffDualElem affdual_identity(const DualOrbitModel& m) { return {m.q_identity(), m.dual_zero()}; }

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

VerificationReport check_orbit_condition(const DualOrbitModel& m, const SamplePlan& plan) {
  VerificationReport rep = make_report("orbit-condition", m.name(), plan);
  if (m.negative_instance()) rep.notes.push_back("declared negative instance: failure with a witness is the expected outcome");
  for (long i = 0; i < plan.count; ++i) {
    Rng rng(derive_seed(plan.seed, 0x0b17, static_cast<std::uint64_t>(i)));
    QElem q = m.sample_q(rng);
    double e1 = distance(m.phi_inv(m.phi(q)), q);

    DualElem xi = m.sample_xi(rng);
    double e2 = 0.0;
    bool xi_ok = m.in_domain(xi, plan.margin);
    if (xi_ok) e2 = distance(m.phi(m.phi_inv(xi)), xi);

    // A non-identity element fixing ξ₀ is a stabilizer witness.
    QElem p = m.perturb_identity(rng, 1e-3, 1e-1);
    double moved = distance(m.phi(p), m.xi0());
    double off_id = distance(p, m.q_identity());
    bool stab_bad = moved <= plan.tolerance && off_id > plan.tolerance;

    ++rep.valid;
    double e = std::max(e1, e2);
    rep.worst_map_err = std::max(rep.worst_map_err, e);
    if (e > plan.tolerance || stab_bad || !std::isfinite(e)) {
      std::ostringstream os;
      os.precision(17);
      if (stab_bad) {
        os << "stabilizer witness: q=" << p.str() << " fixes xi0=" << m.xi0().str();
      } else if (e1 >= e2) {
        os << "phi_inv(phi(q)) != q at q=" << q.str() << " (got " << m.phi_inv(m.phi(q)).str() << ")";
      } else {
        os << "phi(phi_inv(xi)) != xi at xi=" << xi.str() << " outside the orbit of xi0 (got "
           << m.phi(m.phi_inv(xi)).str() << ")";
      }
      rep.record_failure(i, os.str());
    }
  }
  return rep;
}

VerificationReport check_model_invariants(const DualOrbitModel& m, const SamplePlan& plan) {
  VerificationReport rep = make_report("model-invariants", m.name(), plan);
  const QElem id = m.q_identity();
  for (long i = 0; i < plan.count; ++i) {
    Rng rng(derive_seed(plan.seed, 0x1a7, static_cast<std::uint64_t>(i)));
    QElem a = m.sample_q(rng), b = m.sample_q(rng), c = m.sample_q(rng);
    VElem v = m.sample_v(rng);
    DualElem xi = m.sample_xi(rng);

    double e = 0.0, w = 0.0;
    e = std::max(e, distance(m.q_mul(a, m.q_inv(a)), id));
    e = std::max(e, distance(m.q_mul(m.q_mul(a, b), c), m.q_mul(a, m.q_mul(b, c))));
    e = std::max(e, distance(m.flat(a, m.flat(b, xi)), m.flat(m.q_mul(a, b), xi)));
    e = std::max(e, distance(m.q_act_v(a, m.q_act_v(b, v)), m.q_act_v(m.q_mul(a, b), v)));
    // ⟨q♭ξ, v⟩ = ⟨ξ, q⁻¹v⟩
    w = std::max(w, std::abs(m.pairing(m.flat(a, xi), v) - m.pairing(xi, m.q_act_v(m.q_inv(a), v))));
    w = std::max(w, rel_err(m.mod_v(m.q_mul(a, b)), m.mod_v(a) * m.mod_v(b)));
    w = std::max(w, rel_err(m.delta_q(m.q_mul(a, b)), m.delta_q(a) * m.delta_q(b)));
    GroupElem g{a, v}, h{b, m.sample_v(rng)};
    w = std::max(w, rel_err(delta_G(m, g_mul(m, g, h)), delta_G(m, g) * delta_G(m, h)));
    e = std::max(e, distance(g_mul(m, g, g_inv(m, g)), g_identity(m)));
    AffDualElem x{a, xi}, y{b, m.sample_xi(rng)}, z{c, m.sample_xi(rng)};
    e = std::max(e, distance(affdual_mul(m, affdual_mul(m, x, y), z), affdual_mul(m, x, affdual_mul(m, y, z))));
    e = std::max(e, distance(affdual_mul(m, x, affdual_inv(m, x)), affdual_identity(m)));
    e = std::max(e, distance(affdual_mul(m, affdual_inv(m, x), x), affdual_identity(m)));

    ++rep.valid;
    rep.worst_map_err = std::max(rep.worst_map_err, e);
    rep.worst_weight_err = std::max(rep.worst_weight_err, w);
    if (!(e <= plan.tolerance) || !(w <= plan.tolerance)) {
      std::ostringstream os;
      os.precision(17);
      os << "invariant violated at q=" << a.str() << " map_err=" << e << " scalar_err=" << w;
      rep.record_failure(i, os.str());
    }
  }
  return rep;
}

double dqdxi_relative_error(double center, double width) {
  auto f = [&](double xi) { return std::exp(-0.5 * (xi - center) * (xi - center) / (width * width)); };
  // Right side: ∫ f(y) dy/2π in closed form.
  const double rhs = width * std::sqrt(2.0 * M_PI) / (2.0 * M_PI);
  // Left side: q = s·e^t on both components, dq/(2π q²) = e^{-t} dt/(2π); composite Simpson.
  const double t0 = -40.0, t1 = 40.0;
  const int n = 400000;
  const double h = (t1 - t0) / n;
  double lhs = 0.0;
  for (double s : {1.0, -1.0}) {
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
      double t = t0 + k * h;
      double q = s * std::exp(t);
      double g = f(-1.0 / q) * std::exp(-t);
      double wk = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += wk * g;
    }
    lhs += acc * h / 3.0 / (2.0 * M_PI);
  }
  return std::abs(lhs - rhs) / rhs;
}

}  // namespace qaff
