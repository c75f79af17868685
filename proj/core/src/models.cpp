#include <cmath>
#include <stdexcept>

#include "qaff/groups.hpp"

namespace qaff {

namespace {

constexpr double kLogScale = 2.0;  // Q scales drawn log-uniformly on [e^-2, e^2]

double log_uniform_scale(Rng& rng) { return std::exp(rng.uniform(-kLogScale, kLogScale)); }

// Q = ℝ*, V = ℝ, pairing e^{iξv}, q♭ξ = ξ/q, ξ₀ = −1.
class RealAxB : public DualOrbitModel {
 public:
  std::string name() const override { return "axb"; }
  std::string description() const override { return "ax+b group: Q = R*, V = R, xi0 = -1, phi(q) = -1/q"; }
  int q_dim() const override { return 1; }
  int v_dim() const override { return 1; }

  QElem q_mul(const QElem& a, const QElem& b) const override { return {a[0] * b[0]}; }
  QElem q_inv(const QElem& a) const override { return {1.0 / a[0]}; }
  QElem q_identity() const override { return {1.0}; }
  VElem q_act_v(const QElem& q, const VElem& v) const override { return {q[0] * v[0]}; }
  DualElem flat(const QElem& q, const DualElem& xi) const override { return {xi[0] / q[0]}; }
  DualElem xi0() const override { return {-1.0}; }
  QElem phi_inv(const DualElem& xi) const override { return {-1.0 / xi[0]}; }
  double mod_v(const QElem& q) const override { return std::abs(q[0]); }
  bool in_domain(const DualElem& xi, double margin) const override {
    return std::isfinite(xi[0]) && std::abs(xi[0]) >= margin;
  }
  QElem sample_q(Rng& rng) const override { return {rng.sign() * log_uniform_scale(rng)}; }
  std::optional<QElem> minus_identity() const override { return QElem{-1.0}; }
};

// Q = ℂ*, V = ℂ as ℝ², pairing e^{i Re(conj(ξ) v)}, q♭ξ = ξ / conj(q), ξ₀ = −1.
class ComplexAxB : public DualOrbitModel {
 public:
  std::string name() const override { return "complex-axb"; }
  std::string description() const override {
    return "complex ax+b group: Q = C*, V = C, pairing exp(i Re(conj(xi) v)), xi0 = -1";
  }
  int q_dim() const override { return 2; }
  int v_dim() const override { return 2; }

  static cplx z(const Coords& c) { return {c[0], c[1]}; }
  template <class T>
  static T of(cplx w) { return T{w.real(), w.imag()}; }

  QElem q_mul(const QElem& a, const QElem& b) const override { return of<QElem>(z(a.c) * z(b.c)); }
  QElem q_inv(const QElem& a) const override { return of<QElem>(1.0 / z(a.c)); }
  QElem q_identity() const override { return {1.0, 0.0}; }
  VElem q_act_v(const QElem& q, const VElem& v) const override { return of<VElem>(z(q.c) * z(v.c)); }
  DualElem flat(const QElem& q, const DualElem& xi) const override {
    return of<DualElem>(z(xi.c) / std::conj(z(q.c)));
  }
  DualElem xi0() const override { return {-1.0, 0.0}; }
  QElem phi_inv(const DualElem& xi) const override { return of<QElem>(-1.0 / std::conj(z(xi.c))); }
  double mod_v(const QElem& q) const override { return std::norm(z(q.c)); }
  bool in_domain(const DualElem& xi, double margin) const override {
    return xi.finite() && std::abs(z(xi.c)) >= margin;
  }
  QElem sample_q(Rng& rng) const override {
    double r = log_uniform_scale(rng), t = rng.uniform(-M_PI, M_PI);
    return {r * std::cos(t), r * std::sin(t)};
  }
  std::optional<QElem> minus_identity() const override { return QElem{-1.0, 0.0}; }
  std::optional<QElem> scalar(double t) const override { return QElem{t, 0.0}; }
};

// GLn(ℝ) acting on Matn(ℝ) by left multiplication, n ∈ {1, 2}; matrices row-major.
// Pairing e^{i Tr(ᵗA B)}, q♭M = ᵗq⁻¹M, ξ₀ = I, |q| = |det q|ⁿ.
class GLn : public DualOrbitModel {
 public:
  explicit GLn(int n) : n_(n) {
    if (n != 1 && n != 2) throw std::invalid_argument("GLn: only n = 1, 2 are supported");
  }
  std::string name() const override { return n_ == 1 ? "gl1" : "gl2"; }
  std::string description() const override {
    return n_ == 1 ? "GL1(R) on Mat1(R) by left multiplication, xi0 = I"
                   : "GL2(R) on Mat2(R) by left multiplication, xi0 = I, |q| = det(q)^2";
  }
  int q_dim() const override { return n_ * n_; }
  int v_dim() const override { return n_ * n_; }

  Coords mul(const Coords& a, const Coords& b) const {
    if (n_ == 1) return {a[0] * b[0]};
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
  }
  double det(const Coords& a) const { return n_ == 1 ? a[0] : a[0] * a[3] - a[1] * a[2]; }
  Coords inv(const Coords& a) const {
    if (n_ == 1) return {1.0 / a[0]};
    double d = det(a);
    return {a[3] / d, -a[1] / d, -a[2] / d, a[0] / d};
  }
  Coords transpose(const Coords& a) const {
    if (n_ == 1) return a;
    return {a[0], a[2], a[1], a[3]};
  }
  // ᵗ(a⁻¹) in closed form.
  Coords inv_t(const Coords& a) const { return transpose(inv(a)); }

  QElem q_mul(const QElem& a, const QElem& b) const override { return QElem(mul(a.c, b.c)); }
  QElem q_inv(const QElem& a) const override { return QElem(inv(a.c)); }
  QElem q_identity() const override { return n_ == 1 ? QElem{1.0} : QElem{1.0, 0.0, 0.0, 1.0}; }
  VElem q_act_v(const QElem& q, const VElem& v) const override { return VElem(mul(q.c, v.c)); }
  DualElem flat(const QElem& q, const DualElem& xi) const override {
    return DualElem(mul(inv_t(q.c), xi.c));
  }
  DualElem xi0() const override { return DualElem(q_identity().c); }
  QElem phi_inv(const DualElem& xi) const override { return QElem(inv_t(xi.c)); }
  double mod_v(const QElem& q) const override { return std::pow(std::abs(det(q.c)), n_); }
  bool in_domain(const DualElem& xi, double margin) const override {
    return xi.finite() && std::abs(det(xi.c)) >= margin;
  }
  QElem sample_q(Rng& rng) const override {
    if (n_ == 1) return {rng.sign() * log_uniform_scale(rng)};
    // R(t1) · diag(±e^{u1}, ±e^{u2}) · R(t2)
    double t1 = rng.uniform(-M_PI, M_PI), t2 = rng.uniform(-M_PI, M_PI);
    double s1 = rng.sign() * log_uniform_scale(rng), s2 = rng.sign() * log_uniform_scale(rng);
    Coords r1{std::cos(t1), -std::sin(t1), std::sin(t1), std::cos(t1)};
    Coords r2{std::cos(t2), -std::sin(t2), std::sin(t2), std::cos(t2)};
    Coords d{s1, 0.0, 0.0, s2};
    return QElem(mul(mul(r1, d), r2));
  }
  std::optional<QElem> minus_identity() const override { return QElem(-q_identity().c); }

 private:
  int n_;
};

// n = 1, m = 2 instance of the block upper-triangular pair: Q = {[[1,b],[0,a]]}
// acting on ℝ², chart (a, b). The dual action fixes the first coordinate, so
// every orbit lies on a line and the stabilizer of ξ₀ = (1,0) is {b = 0}.
class ExooNegative : public DualOrbitModel {
 public:
  std::string name() const override { return "exoo-negative"; }
  std::string description() const override {
    return "negative instance: Q = {[[1,b],[0,a]]} on R^2; orbits are lines, dual orbit condition fails";
  }
  int q_dim() const override { return 2; }
  int v_dim() const override { return 2; }

  QElem q_mul(const QElem& x, const QElem& y) const override {
    return {x[0] * y[0], y[1] + x[1] * y[0]};
  }
  QElem q_inv(const QElem& x) const override { return {1.0 / x[0], -x[1] / x[0]}; }
  QElem q_identity() const override { return {1.0, 0.0}; }
  VElem q_act_v(const QElem& q, const VElem& v) const override {
    return {v[0] + q[1] * v[1], q[0] * v[1]};
  }
  DualElem flat(const QElem& q, const DualElem& xi) const override {
    return {xi[0], (xi[1] - q[1] * xi[0]) / q[0]};
  }
  DualElem xi0() const override { return {1.0, 0.0}; }
  // Right inverse on the orbit line ξ₁ = 1 only; there is no inverse off it.
  QElem phi_inv(const DualElem& xi) const override { return {1.0, -xi[1]}; }
  double mod_v(const QElem& q) const override { return std::abs(q[0]); }
  // The orbit is a null set; every sample is admitted so that φ∘φ⁻¹ exposes it.
  bool in_domain(const DualElem& xi, double) const override { return xi.finite(); }
  QElem sample_q(Rng& rng) const override {
    return {rng.sign() * log_uniform_scale(rng), rng.uniform(-4.0, 4.0)};
  }
  bool phi_open() const override { return false; }
  bool negative_instance() const override { return true; }
  std::optional<QElem> scalar(double) const override { return std::nullopt; }
};

}  // namespace

std::optional<QElem> DualOrbitModel::scalar(double t) const {
  if (q_dim() == 1) return QElem{t};
  if (q_dim() == 4 && v_dim() == 4) return QElem{t, 0.0, 0.0, t};
  return std::nullopt;
}

QElem DualOrbitModel::perturb_identity(Rng& rng, double lo, double hi) const {
  QElem e = q_identity();
  int k = static_cast<int>(rng.u01() * e.size());
  if (k >= e.size()) k = e.size() - 1;
  e[k] += rng.sign() * rng.uniform(lo, hi);
  return e;
}

cplx DualOrbitModel::pairing(const DualElem& xi, const VElem& v) const {
  return std::polar(1.0, dot(xi.c, v.c));
}

VElem DualOrbitModel::sample_v(Rng& rng, double half_width) const {
  VElem v(Coords::zeros(v_dim()));
  for (int i = 0; i < v_dim(); ++i) v[i] = rng.uniform(-half_width, half_width);
  return v;
}

DualElem DualOrbitModel::sample_xi(Rng& rng, double half_width) const {
  DualElem x(Coords::zeros(v_dim()));
  for (int i = 0; i < v_dim(); ++i) x[i] = rng.uniform(-half_width, half_width);
  return x;
}

ModelPtr make_model(std::string_view name) {
  if (name == "axb") return std::make_shared<RealAxB>();
  if (name == "gl1") return std::make_shared<GLn>(1);
  if (name == "gl2") return std::make_shared<GLn>(2);
  if (name == "complex-axb") return std::make_shared<ComplexAxB>();
  if (name == "exoo-negative") return std::make_shared<ExooNegative>();
  throw std::invalid_argument("unknown model: " + std::string(name));
}

std::vector<std::string> model_names() {
  return {"axb", "gl1", "gl2", "complex-axb", "exoo-negative"};
}

}  // namespace qaff
