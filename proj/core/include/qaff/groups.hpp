#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qaff/coords.hpp"
#include "qaff/report.hpp"
#include "qaff/rng.hpp"

namespace qaff {

using cplx = std::complex<double>;

struct GroupElem {
  QElem q;
  VElem v;
};

// Element of Q ⋉ V̂ with (q,ξ)(q',ξ') = (qq', ξ + q♭ξ').
struct AffDualElem {
  QElem q;
  DualElem xi;
};

// Point of the leg space X = Q × V̂.
struct XPoint {
  QElem q;
  DualElem xi;
};

inline double distance(const XPoint& a, const XPoint& b) {
  double d1 = distance(a.q, b.q), d2 = distance(a.xi, b.xi);
  return d1 > d2 ? d1 : d2;
}
inline double distance(const AffDualElem& a, const AffDualElem& b) {
  double d1 = distance(a.q, b.q), d2 = distance(a.xi, b.xi);
  return d1 > d2 ? d1 : d2;
}
inline double distance(const GroupElem& a, const GroupElem& b) {
  double d1 = distance(a.q, b.q), d2 = distance(a.v, b.v);
  return d1 > d2 ? d1 : d2;
}

// A pair (Q, V) with base point ξ₀ whose dual orbit map φ(q) = q♭ξ₀ is
// (for positive instances) a measure class isomorphism onto a dense orbit.
class DualOrbitModel {
 public:
  virtual ~DualOrbitModel() = default;

  virtual std::string name() const = 0;
  virtual std::string description() const = 0;
  virtual int q_dim() const = 0;
  virtual int v_dim() const = 0;

  virtual QElem q_mul(const QElem& a, const QElem& b) const = 0;
  virtual QElem q_inv(const QElem& a) const = 0;
  virtual QElem q_identity() const = 0;
  virtual VElem q_act_v(const QElem& q, const VElem& v) const = 0;
  virtual DualElem flat(const QElem& q, const DualElem& xi) const = 0;
  // All shipped instances use the coordinate dot product: e^{i ξ·v}.
  virtual cplx pairing(const DualElem& xi, const VElem& v) const;
  virtual DualElem xi0() const = 0;
  DualElem phi(const QElem& q) const { return flat(q, xi0()); }
  virtual QElem phi_inv(const DualElem& xi) const = 0;
  virtual double mod_v(const QElem& q) const = 0;
  virtual double delta_q(const QElem&) const { return 1.0; }
  virtual bool in_domain(const DualElem& xi, double margin) const = 0;

  virtual QElem sample_q(Rng& rng) const = 0;
  VElem sample_v(Rng& rng, double half_width = 4.0) const;
  DualElem sample_xi(Rng& rng, double half_width = 4.0) const;

  // Author-set metadata, not verified: is φ an open map?
  virtual bool phi_open() const { return true; }
  // Declared non-example; orbit checks are expected to fail with a witness.
  virtual bool negative_instance() const { return false; }
  virtual std::optional<QElem> minus_identity() const { return std::nullopt; }
  // t·id as an element of Q, when Q contains the real scalings.
  virtual std::optional<QElem> scalar(double t) const;
  // Element at chart distance in [lo, hi] from the identity along one randomly
  // chosen coordinate direction; feeds the stabilizer spot check.
  virtual QElem perturb_identity(Rng& rng, double lo, double hi) const;

  DualElem dual_zero() const { return DualElem(Coords::zeros(v_dim())); }
  VElem v_zero() const { return VElem(Coords::zeros(v_dim())); }
};

using ModelPtr = std::shared_ptr<const DualOrbitModel>;

// "axb", "gl1", "gl2", "complex-axb", "exoo-negative"; throws std::invalid_argument.
ModelPtr make_model(std::string_view name);
std::vector<std::string> model_names();

GroupElem g_mul(const DualOrbitModel& m, const GroupElem& a, const GroupElem& b);
GroupElem g_inv(const DualOrbitModel& m, const GroupElem& a);
GroupElem g_identity(const DualOrbitModel& m);
double delta_G(const DualOrbitModel& m, const GroupElem& a);

AffDualElem affdual_mul(const DualOrbitModel& m, const AffDualElem& a, const AffDualElem& b);
AffDualElem affdual_inv(const DualOrbitModel& m, const AffDualElem& a);
AffDualElem affdual_identity(const DualOrbitModel& m);

// φ⁻¹∘φ = id, φ∘φ⁻¹ = id on in-domain samples, and a stabilizer spot check
// near the identity. Negative instances report their witness in first_fail.
VerificationReport check_orbit_condition(const DualOrbitModel& m, const SamplePlan& plan);

// Sample-level check of the model's own invariants (action laws, pairing
// relation, multiplicativity of the moduli) at relative tolerance plan.tolerance.
VerificationReport check_model_invariants(const DualOrbitModel& m, const SamplePlan& plan);

// axb only: ∫ f(φ(q)) |q|⁻¹ d_Q(q) against ∫ f(ξ) dξ for a Gaussian f,
// with d_Q(q) = dq/(2π|q|) and dξ = dy/2π. Returns the relative error.
double dqdxi_relative_error(double center, double width);

}  // namespace qaff
