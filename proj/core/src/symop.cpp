#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

#include "qaff/symop.hpp"

namespace qaff {

std::string Legs::str() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < n; ++i) os << (i ? "; " : "") << x[i].q.str() << ' ' << x[i].xi.str();
  os << ']';
  return os.str();
}

double distance(const Legs& a, const Legs& b) {
  if (a.n != b.n) return INFINITY;
  double d = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double e = distance(a[i], b[i]);
    if (!(e <= d)) d = e;
  }
  return d;
}

SymOp::SymOp(std::string name, int legs, bool antilinear, EvalFn fwd, InvFn inv) {
  if (legs < 1 || legs > kMaxLegs) throw SymOpError("SymOp: unsupported leg count");
  impl_ = std::make_shared<const Impl>(Impl{std::move(name), legs, antilinear, std::move(fwd), std::move(inv)});
}

std::optional<SymEval> SymOp::eval(const Legs& x, double margin) const { return impl_->fwd(x, margin); }

std::optional<Legs> SymOp::eval_inv(const Legs& y, double margin) const {
  if (!impl_->inv) throw SymOpError("NoInverseSupplied: " + impl_->name);
  return impl_->inv(y, margin);
}

SymOp SymOp::renamed(std::string name) const {
  return SymOp(std::move(name), impl_->legs, impl_->antilinear, impl_->fwd, impl_->inv);
}

SymOp make_point_op(std::string name, int legs, bool antilinear, PointMapSpec spec) {
  auto s = std::make_shared<const PointMapSpec>(std::move(spec));
  SymOp::EvalFn fwd = [s](const Legs& x, double margin) -> std::optional<SymEval> {
    if (s->guard && !s->guard(x, margin)) return std::nullopt;
    SymEval e{s->sigma(x), s->weight(x)};
    if (!e.image.finite() || !std::isfinite(e.weight.real()) || !std::isfinite(e.weight.imag())) return std::nullopt;
    return e;
  };
  SymOp::InvFn inv;
  if (s->sigma_inv) {
    inv = [s](const Legs& y, double margin) -> std::optional<Legs> {
      if (s->guard_inv && !s->guard_inv(y, margin)) return std::nullopt;
      Legs x = s->sigma_inv(y);
      if (!x.finite()) return std::nullopt;
      return x;
    };
  }
  return SymOp(std::move(name), legs, antilinear, std::move(fwd), std::move(inv));
}

SymOp identity_op(int legs) {
  return SymOp(
      "id", legs, false, [](const Legs& x, double) -> std::optional<SymEval> { return SymEval{x, 1.0}; },
      [](const Legs& y, double) -> std::optional<Legs> { return y; });
}

SymOp compose(const SymOp& a, const SymOp& b) {
  if (a.legs() != b.legs()) throw SymOpError("LegMismatch: " + a.name() + " * " + b.name());
  const bool anti_a = a.antilinear();
  SymOp::EvalFn fwd = [a, b, anti_a](const Legs& x, double margin) -> std::optional<SymEval> {
    auto ea = a.eval(x, margin);
    if (!ea) return std::nullopt;
    auto eb = b.eval(ea->image, margin);
    if (!eb) return std::nullopt;
    return SymEval{eb->image, ea->weight * (anti_a ? std::conj(eb->weight) : eb->weight)};
  };
  SymOp::InvFn inv;
  if (a.has_inverse() && b.has_inverse()) {
    inv = [a, b](const Legs& y, double margin) -> std::optional<Legs> {
      auto yb = b.eval_inv(y, margin);
      if (!yb) return std::nullopt;
      return a.eval_inv(*yb, margin);
    };
  }
  return SymOp("(" + a.name() + " " + b.name() + ")", a.legs(), a.antilinear() != b.antilinear(), std::move(fwd),
               std::move(inv));
}

SymOp compose(std::initializer_list<SymOp> ops) {
  if (ops.size() == 0) throw SymOpError("compose: empty product");
  auto it = ops.begin();
  SymOp acc = *it++;
  for (; it != ops.end(); ++it) acc = compose(acc, *it);
  return acc;
}

SymOp invert(const SymOp& t) {
  if (!t.has_inverse()) throw SymOpError("NoInverseSupplied: " + t.name());
  const bool anti = t.antilinear();
  SymOp::EvalFn fwd = [t, anti](const Legs& y, double margin) -> std::optional<SymEval> {
    auto x = t.eval_inv(y, margin);
    if (!x) return std::nullopt;
    auto e = t.eval(*x, margin);
    if (!e || e->weight == cplx(0.0)) return std::nullopt;
    cplx w = 1.0 / e->weight;
    return SymEval{*x, anti ? std::conj(w) : w};
  };
  SymOp::InvFn inv = [t](const Legs& x, double margin) -> std::optional<Legs> {
    auto e = t.eval(x, margin);
    if (!e) return std::nullopt;
    return e->image;
  };
  return SymOp("inv(" + t.name() + ")", t.legs(), anti, std::move(fwd), std::move(inv));
}

namespace {

void check_positions(int sub_legs, int total, const std::vector<int>& pos) {
  if (static_cast<int>(pos.size()) != sub_legs || total > kMaxLegs || sub_legs > total)
    throw SymOpError("BadIndices: wrong number of positions");
  for (size_t i = 0; i < pos.size(); ++i) {
    if (pos[i] < 0 || pos[i] >= total) throw SymOpError("BadIndices: position out of range");
    for (size_t j = 0; j < i; ++j)
      if (pos[i] == pos[j]) throw SymOpError("BadIndices: repeated position");
  }
}

Legs gather(const Legs& x, const std::vector<int>& pos) {
  Legs s;
  s.n = static_cast<int>(pos.size());
  for (int i = 0; i < s.n; ++i) s[i] = x[pos[i]];
  return s;
}

void scatter(Legs& x, const Legs& s, const std::vector<int>& pos) {
  for (int i = 0; i < s.n; ++i) x[pos[i]] = s[i];
}

}  // namespace

SymOp embed(const SymOp& t, int total_legs, std::vector<int> positions) {
  check_positions(t.legs(), total_legs, positions);
  std::ostringstream nm;
  nm << t.name() << "_{";
  for (int p : positions) nm << p + 1;
  nm << "}";
  SymOp::EvalFn fwd = [t, positions](const Legs& x, double margin) -> std::optional<SymEval> {
    auto e = t.eval(gather(x, positions), margin);
    if (!e) return std::nullopt;
    Legs y = x;
    scatter(y, e->image, positions);
    return SymEval{y, e->weight};
  };
  SymOp::InvFn inv;
  if (t.has_inverse()) {
    inv = [t, positions](const Legs& y, double margin) -> std::optional<Legs> {
      auto s = t.eval_inv(gather(y, positions), margin);
      if (!s) return std::nullopt;
      Legs x = y;
      scatter(x, *s, positions);
      return x;
    };
  }
  return SymOp(nm.str(), total_legs, t.antilinear(), std::move(fwd), std::move(inv));
}

SymOp swap_legs(const SymOp& t, std::vector<int> perm) { return embed(t, t.legs(), std::move(perm)); }

SymOp tensor(const SymOp& a, const SymOp& b) {
  if (a.antilinear() != b.antilinear()) throw SymOpError("tensor: mixed (anti)linearity");
  const int na = a.legs(), n = a.legs() + b.legs();
  if (n > kMaxLegs) throw SymOpError("tensor: too many legs");
  auto split = [na, n](const Legs& x) {
    Legs l, r;
    l.n = na;
    r.n = n - na;
    for (int i = 0; i < na; ++i) l[i] = x[i];
    for (int i = na; i < n; ++i) r[i - na] = x[i];
    return std::pair{l, r};
  };
  auto join = [na, n](const Legs& l, const Legs& r) {
    Legs x;
    x.n = n;
    for (int i = 0; i < na; ++i) x[i] = l[i];
    for (int i = na; i < n; ++i) x[i] = r[i - na];
    return x;
  };
  SymOp::EvalFn fwd = [a, b, split, join](const Legs& x, double margin) -> std::optional<SymEval> {
    auto [l, r] = split(x);
    auto ea = a.eval(l, margin);
    if (!ea) return std::nullopt;
    auto eb = b.eval(r, margin);
    if (!eb) return std::nullopt;
    return SymEval{join(ea->image, eb->image), ea->weight * eb->weight};
  };
  SymOp::InvFn inv;
  if (a.has_inverse() && b.has_inverse()) {
    inv = [a, b, split, join](const Legs& y, double margin) -> std::optional<Legs> {
      auto [l, r] = split(y);
      auto xa = a.eval_inv(l, margin);
      if (!xa) return std::nullopt;
      auto xb = b.eval_inv(r, margin);
      if (!xb) return std::nullopt;
      return join(*xa, *xb);
    };
  }
  return SymOp("(" + a.name() + "⊗" + b.name() + ")", n, a.antilinear(), std::move(fwd), std::move(inv));
}

SymOp scale_weight(const SymOp& t, cplx factor) {
  SymOp::EvalFn fwd = [t, factor](const Legs& x, double margin) -> std::optional<SymEval> {
    auto e = t.eval(x, margin);
    if (!e) return std::nullopt;
    e->weight *= factor;
    return e;
  };
  SymOp::InvFn inv;
  if (t.has_inverse()) inv = [t](const Legs& y, double margin) { return t.eval_inv(y, margin); };
  return SymOp(t.name() + "*c", t.legs(), t.antilinear(), std::move(fwd), std::move(inv));
}

double weight_distance(cplx a, cplx b) {
  double s = std::max(std::abs(a), std::abs(b));
  if (s == 0.0) return 0.0;
  return std::abs(a - b) / s;
}

EqualResult equal_at(const SymOp& a, const SymOp& b, const Legs& x, double margin, double tolerance) {
  EqualResult r;
  if (a.legs() != b.legs()) throw SymOpError("LegMismatch in equal_at");
  if (a.antilinear() != b.antilinear()) {
    r.status = EqualStatus::FlagMismatch;
    return r;
  }
  auto ea = a.eval(x, margin);
  auto eb = b.eval(x, margin);
  if (!ea || !eb) {
    r.status = EqualStatus::GuardFail;
    return r;
  }
  r.map_err = distance(ea->image, eb->image);
  r.weight_err = weight_distance(ea->weight, eb->weight);
  r.status = (r.map_err <= tolerance && r.weight_err <= tolerance) ? EqualStatus::Ok : EqualStatus::Fail;
  return r;
}

LegSampler default_sampler(const ModelPtr& model, int legs) {
  return [model, legs](Rng& rng) {
    Legs x;
    x.n = legs;
    for (int i = 0; i < legs; ++i) {
      x[i].q = model->sample_q(rng);
      x[i].xi = model->sample_xi(rng);
    }
    return x;
  };
}

VerificationReport parallel_samples(VerificationReport base, long count,
                                    const std::function<void(long, VerificationReport&)>& body,
                                    unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<long>(threads, std::max<long>(1, count / 256)));
  if (threads == 0) threads = 1;
  VerificationReport empty = base;
  empty.valid = empty.failed = 0;
  empty.worst_map_err = empty.worst_weight_err = 0.0;
  empty.first_fail.reset();
  std::vector<VerificationReport> parts(threads, empty);
  auto run = [&](unsigned t) {
    long lo = count * t / threads, hi = count * (t + 1) / threads;
    for (long i = lo; i < hi; ++i) body(i, parts[t]);
  };
  if (threads == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run, t);
    for (auto& th : pool) th.join();
  }
  VerificationReport out = base;
  for (const auto& p : parts) out.merge(p);
  return out;
}

VerificationReport random_equality_test(const SymOp& a, const SymOp& b, const std::string& identity,
                                        const ModelPtr& model, const SamplePlan& plan, std::uint64_t stream,
                                        LegSampler sampler) {
  auto t0 = std::chrono::steady_clock::now();
  if (!sampler) sampler = default_sampler(model, a.legs());
  VerificationReport base = make_report(identity, model->name(), plan);
  if (a.antilinear() != b.antilinear()) {
    base.valid = plan.count;
    base.record_failure(0, "FlagMismatch: " + a.name() + " vs " + b.name());
    base.failed = plan.count;
    return base;
  }
  VerificationReport rep = parallel_samples(base, plan.count, [&](long i, VerificationReport& r) {
    Rng rng(derive_seed(plan.seed, stream, static_cast<std::uint64_t>(i)));
    Legs x = sampler(rng);
    EqualResult e = equal_at(a, b, x, plan.margin, plan.tolerance);
    if (e.status == EqualStatus::GuardFail) return;
    ++r.valid;
    r.worst_map_err = std::max(r.worst_map_err, std::isnan(e.map_err) ? INFINITY : e.map_err);
    r.worst_weight_err = std::max(r.worst_weight_err, std::isnan(e.weight_err) ? INFINITY : e.weight_err);
    if (e.status == EqualStatus::Fail) {
      std::ostringstream os;
      os.precision(17);
      os << "x=" << x.str() << " map_err=" << e.map_err << " weight_err=" << e.weight_err;
      r.record_failure(i, os.str());
    }
  });
  rep.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace qaff
