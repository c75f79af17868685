#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qaff/groups.hpp"
#include "qaff/report.hpp"

namespace qaff {

constexpr int kMaxLegs = 3;

// A point of Xⁿ, n ≤ kMaxLegs.
struct Legs {
  std::array<XPoint, kMaxLegs> x{};
  int n = 0;

  Legs() = default;
  Legs(std::initializer_list<XPoint> pts) {
    if (pts.size() > kMaxLegs) throw std::invalid_argument("Legs: too many legs");
    for (const auto& p : pts) x[n++] = p;
  }
  XPoint& operator[](int i) { return x[i]; }
  const XPoint& operator[](int i) const { return x[i]; }
  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!x[i].q.finite() || !x[i].xi.finite()) return false;
    return true;
  }
  std::string str() const;
};

double distance(const Legs& a, const Legs& b);

struct SymEval {
  Legs image;
  cplx weight;
};

class SymOpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Weighted point transformation (Tf)(x) = w(x)·f(σ(x)), or w(x)·conj f(σ(x))
// when antilinear. Guard and evaluation are fused: eval returns nullopt where
// σ or w is undefined within the margin, or produces non-finite values.
class SymOp {
 public:
  using EvalFn = std::function<std::optional<SymEval>(const Legs&, double)>;
  using InvFn = std::function<std::optional<Legs>(const Legs&, double)>;

  SymOp() = default;
  SymOp(std::string name, int legs, bool antilinear, EvalFn fwd, InvFn inv = {});

  const std::string& name() const { return impl_->name; }
  int legs() const { return impl_->legs; }
  bool antilinear() const { return impl_->antilinear; }
  bool has_inverse() const { return static_cast<bool>(impl_->inv); }

  std::optional<SymEval> eval(const Legs& x, double margin) const;
  std::optional<Legs> eval_inv(const Legs& y, double margin) const;
  bool guard(const Legs& x, double margin) const { return eval(x, margin).has_value(); }

  SymOp renamed(std::string name) const;

 private:
  struct Impl {
    std::string name;
    int legs = 0;
    bool antilinear = false;
    EvalFn fwd;
    InvFn inv;
  };
  std::shared_ptr<const Impl> impl_;
};

// Convenience for primitive constructors: separate map, weight and guard
// closures over a single leg tuple. Finiteness is checked automatically.
struct PointMapSpec {
  std::function<Legs(const Legs&)> sigma;
  std::function<cplx(const Legs&)> weight;
  std::function<bool(const Legs&, double)> guard;          // empty = always defined
  std::function<Legs(const Legs&)> sigma_inv;              // empty = no inverse
  std::function<bool(const Legs&, double)> guard_inv;      // empty = always defined
};
SymOp make_point_op(std::string name, int legs, bool antilinear, PointMapSpec spec);

SymOp identity_op(int legs);

// Operator product AB ("apply B then A" on functions): σ = σ_B∘σ_A.
SymOp compose(const SymOp& a, const SymOp& b);
// Left-to-right product ops[0]·ops[1]·…
SymOp compose(std::initializer_list<SymOp> ops);
SymOp invert(const SymOp& t);
// T on legs `positions` of an n-leg tuple, identity elsewhere.
SymOp embed(const SymOp& t, int total_legs, std::vector<int> positions);
// Conjugation by the leg permutation: leg i of T acts on leg perm[i].
SymOp swap_legs(const SymOp& t, std::vector<int> perm);
// A⊗B on legs (A's legs, then B's). Both factors must share (anti)linearity.
SymOp tensor(const SymOp& a, const SymOp& b);
// Mutation helper: weight multiplied by `factor` (the inverse stays consistent).
SymOp scale_weight(const SymOp& t, cplx factor);

enum class EqualStatus { Ok, Fail, GuardFail, FlagMismatch };

struct EqualResult {
  EqualStatus status = EqualStatus::GuardFail;
  double map_err = 0.0;
  double weight_err = 0.0;
};

double weight_distance(cplx a, cplx b);

EqualResult equal_at(const SymOp& a, const SymOp& b, const Legs& x, double margin, double tolerance);

using LegSampler = std::function<Legs(Rng&)>;

// Independent (sample_q, sample_xi) per leg.
LegSampler default_sampler(const ModelPtr& model, int legs);

// Pointwise equality over plan.count samples; the per-sample stream is
// derive_seed(plan.seed, stream, index). Passes iff no valid sample exceeds
// plan.tolerance and at least 90% of samples pass both guards.
VerificationReport random_equality_test(const SymOp& a, const SymOp& b, const std::string& identity,
                                        const ModelPtr& model, const SamplePlan& plan,
                                        std::uint64_t stream = 0, LegSampler sampler = {});

// Runs body(i, report) for i in [0, count) on up to `threads` workers and
// merges the per-chunk reports in index order.
VerificationReport parallel_samples(VerificationReport base, long count,
                                    const std::function<void(long, VerificationReport&)>& body,
                                    unsigned threads = 0);

}  // namespace qaff
