#pragma once

#include <vector>

#include "qaff/symop.hpp"

namespace qaff {

// All operators act on functions of XPoints (q, ξ), i.e. after the partial
// Fourier transform in the V variable on every leg.

SymOp omega(const ModelPtr& m);
SymOp omega_star(const ModelPtr& m);
SymOp what_star(const ModelPtr& m);
SymOp what(const ModelPtr& m);
SymOp conj_J(const ModelPtr& m);
SymOp conj_Jhat(const ModelPtr& m);
SymOp ju_u_j(const ModelPtr& m);
SymOp what_omega_closed(const ModelPtr& m);
SymOp what_omega_composed(const ModelPtr& m);
SymOp omega_bar(const ModelPtr& m);
// (J⊗J) Ω₂₁ (J⊗J)
SymOp omega_bar_composed(const ModelPtr& m);

// (Δ̂⊗ι)(T) = Ŵ₁₂* T₂₃ Ŵ₁₂
SymOp coproduct_left(const ModelPtr& m, const SymOp& t);
// (ι⊗Δ̂)(T) = Ŵ₂₃* T₁₃ Ŵ₂₃
SymOp coproduct_right(const ModelPtr& m, const SymOp& t);
// Δ̂(T) = Ŵ*(1⊗T)Ŵ for a one-leg T.
SymOp coproduct(const ModelPtr& m, const SymOp& t);

// Left regular representation: λ_{(q,0)} is a weighted point map, λ_{(1,v)}
// multiplies by the phase ⟨ξ, −v⟩.
SymOp lambda_q(const ModelPtr& m, const QElem& q);
SymOp lambda_v(const ModelPtr& m, const VElem& v);
SymOp lambda_op(const ModelPtr& m, const GroupElem& g);

// Ω with ξ₀ replaced by q♭ξ₀ and φ by q' ↦ φ(q'q).
SymOp omega_q_direct(const ModelPtr& m, const QElem& q);
// (λ_q⊗λ_q) Ω Δ̂(λ_q)*
SymOp omega_q_composed(const ModelPtr& m, const QElem& q);

// Two sides of the cocycle identity (Ω⊗1)(Δ̂⊗ι)(Ω) = (1⊗Ω)(ι⊗Δ̂)(Ω).
SymOp cocycle_lhs(const ModelPtr& m, const SymOp& om);
SymOp cocycle_rhs(const ModelPtr& m, const SymOp& om);
// W₁₂W₁₃W₂₃ and W₂₃W₁₂.
SymOp pentagon_lhs(const SymOp& w);
SymOp pentagon_rhs(const SymOp& w);

VerificationReport check_cocycle(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
VerificationReport check_cocycle_of(const ModelPtr& m, const SymOp& om, const std::string& identity,
                                    const SamplePlan& plan, std::uint64_t stream = 0);
VerificationReport check_pentagon(const ModelPtr& m, const SymOp& w, const std::string& identity,
                                  const SamplePlan& plan, std::uint64_t stream = 0);
VerificationReport check_multunitary(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
VerificationReport check_bar_relation(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
// T·invert(T) = id and the supplied closed-form inverse where one exists.
VerificationReport check_inverse_law(const ModelPtr& m, const SymOp& t, const std::string& identity,
                                     const SamplePlan& plan, std::uint64_t stream = 0);
// Ω_q both ways for each q in qs; plan.count samples per q.
VerificationReport check_cohomologous(const ModelPtr& m, const std::vector<QElem>& qs, const SamplePlan& plan,
                                      std::uint64_t stream = 0);
// Sampled q values used by the Ω_q suite: model samples plus, where present, −id.
std::vector<QElem> cohomologous_q_samples(const ModelPtr& m, std::uint64_t seed, int count);
// λ_g λ_h = λ_{gh} for random pairs.
VerificationReport check_lambda_rep(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);

struct DeformationRow {
  double theta;
  double map_sup;
  double weight_sup;
};

struct DeformationTable {
  std::vector<DeformationRow> rows;
  bool strictly_decreasing = false;
};

// Ω_θ = Ω_{θ·id}: sup over samples with |ξ| ≤ box of dist(σ(x), x) and |w(x) − 1|.
// Requires the model's openness flag and real scalings in Q.
DeformationTable omega_theta_limit(const ModelPtr& m, const std::vector<double>& thetas, const SamplePlan& plan,
                                   double box = 0.5, std::uint64_t stream = 0);
std::vector<double> default_thetas();

// Footnote representation (axb only). Leg-1 dilation by (1+ξ₂): the flow
// orientation fixed by the generator oracle and the cocycle identity.
SymOp stachura_op();
// Opposite orientation, (1+ξ₂)⁻¹; kept to show that it is not a cocycle.
SymOp stachura_reversed_op();
// (Uf)(q, ξ) = |q| f(q⁻¹, ξ), the intertwiner in the Fourier picture.
SymOp footnote_U();
// (U⊗U) Ω̄ (U⊗U)
SymOp stachura_transported(const ModelPtr& axb);
VerificationReport check_stachura(const SamplePlan& plan, std::uint64_t stream = 0);

struct FlowOracleResult {
  int n = 0;
  double rel_err = 0.0;  // worst relative L² error over the probe set
};

// Exponentiates the discretized dilation generator q∂_q + ξ∂_ξ (spectral
// differentiation on an n-point log grid, per sign component) and compares
// the flow followed by the parity for 1+ξ₂ < 0 against stachura_op's closed form.
FlowOracleResult stachura_flow_oracle(int n = 64);

}  // namespace qaff
