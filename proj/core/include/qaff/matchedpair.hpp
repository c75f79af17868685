#pragma once

#include <optional>
#include <utility>

#include "qaff/qgops.hpp"

namespace qaff {

// (x•y, x#y) = v(x, y) and (x⋄y, x*y) = v⁻¹(x, y).
struct XPair {
  XPoint a;
  XPoint b;
};

std::optional<XPair> v_map(const DualOrbitModel& m, const XPoint& x, const XPoint& y, double margin);
std::optional<XPair> v_inv_map(const DualOrbitModel& m, const XPoint& a, const XPoint& b, double margin);

// f₁(q, ξ) = q⁻¹ and act1((q, ξ), a) = (a⁻¹q, (a⁻¹)♭ξ).
QElem f1(const DualOrbitModel& m, const XPoint& x);
XPoint act1(const DualOrbitModel& m, const XPoint& x, const QElem& a);
// f₂(q, ξ) = φ⁻¹(ξ + ξ₀)⁻¹; act2((q, ξ), b) = (φ⁻¹((b⁻¹)♭(φ(q) − ξ₀) + ξ₀), (b⁻¹)♭(ξ + ξ₀) − ξ₀).
std::optional<QElem> f2(const DualOrbitModel& m, const XPoint& x, double margin);
std::optional<XPoint> act2(const DualOrbitModel& m, const XPoint& x, const QElem& b, double margin);

// h₁(q) = (q, 0), h₂(q) = (q, ξ₀ − φ(q)) in Q⋉V̂.
AffDualElem h1(const DualOrbitModel& m, const QElem& q);
AffDualElem h2(const DualOrbitModel& m, const QElem& q);

// g = h₁(q₁)h₂(q₂) with q₁ = φ⁻¹(ξ + φ(q)), q₂ = q₁⁻¹q; nullopt outside the dense image.
std::optional<std::pair<QElem, QElem>> decompose(const DualOrbitModel& m, const AffDualElem& g, double margin);

VerificationReport check_v_inverse(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
VerificationReport check_reconstruction(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
// h₂(f₂(x))h₁(f₁(y)) = h₁(f₁(b))h₂(f₂(a)), (a, b) = v(x, y). h2_xi_shift ≠ 0
// adds a constant to the V̂ part of h₂ (mutation control; a scaling would
// cancel, the identity being linear in that part).
VerificationReport check_35b(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0,
                             double h2_xi_shift = 0.0);
// Success rate on uniform (q, ξ) samples must reach 99%; recomposition at 1e-10.
VerificationReport check_decompose(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
// h₁, h₂ are homomorphisms and h₁(q) = h₂(q') only for q = q' = e.
VerificationReport check_h_homomorphisms(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
// c h₁(q) c⁻¹ = h₂(q) and c h₂(q) c⁻¹ = h₁(q), c = (−id, ξ₀). Throws if −id ∉ Q.
VerificationReport selfdual_check(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0);
// Map-level pentagon for v: σ-parts of W₁₂W₁₃W₂₃ and W₂₃W₁₂ for W = Ŵ_Ω.
// mutate ≠ 0 scales the third output coordinate of v by (1 + mutate).
VerificationReport check_pentagon_maps(const ModelPtr& m, const SamplePlan& plan, std::uint64_t stream = 0,
                                       double mutate = 0.0);

}  // namespace qaff
