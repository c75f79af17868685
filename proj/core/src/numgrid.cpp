#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>
#include <Eigen/Dense>

#include "qaff/numgrid.hpp"

namespace qaff {

namespace {

using MatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapC = Eigen::Map<MatC>;
using CMapC = Eigen::Map<const MatC>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW planning is not thread-safe.
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}

// Row-wise DFT of an n×n array, FFTW_ESTIMATE so results do not depend on timing.
void dft_rows(std::vector<cplx>& a, int n, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_many_dft(1, &n, n, p, nullptr, 1, n, p, nullptr, 1, n, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(fftw_mutex());
  fftw_destroy_plan(plan);
}

// Catmull–Rom weights for fractional offset t ∈ [0, 1) at nodes −1, 0, 1, 2.
std::array<double, 4> cubic_weights(double t) {
  double t2 = t * t, t3 = t2 * t;
  return {-0.5 * t3 + t2 - 0.5 * t, 1.5 * t3 - 2.5 * t2 + 1.0, -1.5 * t3 + 2.0 * t2 + 0.5 * t, 0.5 * t3 - 0.5 * t2};
}

double log_gauss(double q, int sign, double mu, double s) {
  if (q == 0.0 || (q > 0) != (sign > 0)) return 0.0;
  double t = std::log(std::abs(q)) - std::log(mu);
  return std::exp(-t * t / (2.0 * s * s));
}

}  // namespace

void GridConfig::validate() const {
  if (n <= 0 || n % 4 != 0) throw std::invalid_argument("grid size must be a positive multiple of 4");
  if (!(L > 0.0)) throw std::invalid_argument("grid half-width must be positive");
}

double GFunction::norm() const {
  double s = 0.0;
  for (const cplx& x : a) s += std::norm(x);
  double w = fourier ? (grid.h_xi() / kTwoPi) * (grid.h_xi() / kTwoPi) : grid.h() * grid.h_xi() / kTwoPi;
  return std::sqrt(s * w);
}

GFunction operator-(const GFunction& x, const GFunction& y) {
  if (x.fourier != y.fourier || x.grid.n != y.grid.n) throw std::invalid_argument("GFunction: mismatched grids");
  GFunction r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

double HSMatrix::hs_norm() const {
  double s = 0.0;
  for (const cplx& x : k) s += std::norm(x);
  return std::sqrt(s) * h;
}

HSMatrix operator-(const HSMatrix& x, const HSMatrix& y) {
  HSMatrix r = x;
  for (size_t i = 0; i < r.k.size(); ++i) r.k[i] -= y.k[i];
  return r;
}

HSMatrix operator*(const HSMatrix& x, const HSMatrix& y) {
  HSMatrix r(x.n, x.h);
  MapC(r.k.data(), x.n, x.n) = CMapC(x.k.data(), x.n, x.n) * CMapC(y.k.data(), y.n, y.n) * cplx(x.h);
  return r;
}

// F_m = h (−1)^m Σ_b (−1)^b f_b e^{−2πi bm/N}; valid for N ≡ 0 mod 4.
GFunction fourier_v(const GFunction& f) {
  if (f.fourier) throw std::invalid_argument("fourier_v: already in the Fourier picture");
  const int n = f.grid.n;
  GFunction r(f.grid, true);
  r.a = f.a;
  for (int j = 0; j < n; ++j)
    for (int b = 1; b < n; b += 2) r.at(j, b) = -r.at(j, b);
  dft_rows(r.a, n, FFTW_FORWARD);
  const double h = f.grid.h();
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) r.at(j, m) *= (m % 2 ? -h : h);
  return r;
}

GFunction inverse_fourier_v(const GFunction& f) {
  if (!f.fourier) throw std::invalid_argument("inverse_fourier_v: not in the Fourier picture");
  const int n = f.grid.n;
  GFunction r(f.grid, false);
  r.a = f.a;
  for (int j = 0; j < n; ++j)
    for (int m = 1; m < n; m += 2) r.at(j, m) = -r.at(j, m);
  dft_rows(r.a, n, FFTW_BACKWARD);
  const double s = 1.0 / (f.grid.h() * n);
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < n; ++b) r.at(j, b) *= (b % 2 ? -s : s);
  return r;
}

// K(v_a, v_b) = G(v_a − v_b, v_b) with G(d, b) = Σ_j e^{iη_j d} f(q_j, v_b) h_ξ/2π,
// differences taken periodically in the window.
HSMatrix op_kn(const GFunction& f) {
  if (f.fourier) throw std::invalid_argument("op_kn: expects the (q, v) picture");
  const GridConfig& g = f.grid;
  const int n = g.n;
  MatC e(n, n);
  for (int d = 0; d < n; ++d)
    for (int j = 0; j < n; ++j) e(d, j) = std::polar(g.h_xi() / kTwoPi, g.eta(j) * (d - n / 2) * g.h());
  MatC gm = e * CMapC(f.a.data(), n, n);
  HSMatrix k(n, g.h());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) k.at(a, b) = gm(((a - b + n / 2) % n + n) % n, b);
  return k;
}

StarResult star(const GFunction& f1, const GFunction& f2) {
  if (!f1.fourier || !f2.fourier) throw std::invalid_argument("star: expects the Fourier picture");
  const int n = f1.grid.n;
  StarResult res{GFunction(f1.grid, true), 0};
  const double c = f1.grid.h_xi() / kTwoPi;
  for (int j = 0; j < n; ++j) {
    cplx* out = &res.value.a[static_cast<size_t>(j) * n];
    for (int mp = 0; mp < n; ++mp) {
      const cplx a = f1.at(j, mp);
      if (a == 0.0) continue;
      // φ(q_j) − ξ_m' = η_{j − (m' − N/2)}
      const int jj = j - (mp - n / 2);
      if (jj < 0 || jj >= n) {
        res.dropped += n;
        continue;
      }
      const int shift = mp - n / 2;
      res.dropped += std::abs(shift);
      const int lo = std::max(0, shift), hi = std::min(n, n + shift);
      const cplx ac = a * c;
      const cplx* row = &f2.a[static_cast<size_t>(jj) * n];
      for (int m = lo; m < hi; ++m) out[m] += ac * row[m - shift];
    }
  }
  return res;
}

double FamilyMember::g(double q) const { return log_gauss(q, sign, mu, s); }

cplx FamilyMember::p(double v) const {
  double amp;
  if (profile == Profile::Gauss) {
    double x = (v - center) / width;
    amp = std::exp(-0.5 * x * x);
  } else {
    double x = (v - center) / width;
    amp = std::abs(x) < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0;
  }
  return freq == 0.0 ? cplx(amp) : std::polar(amp, freq * v);
}

double FamilyMember::continuum_norm2() const {
  // ∫ g² dq/(2πq²) = s√π e^{−log μ + s²/4}/(2π), with t = log|q|
  double a = s * std::sqrt(std::numbers::pi) * std::exp(-std::log(mu) + s * s / 4.0) / kTwoPi;
  double b = profile == Profile::Gauss ? width * std::sqrt(std::numbers::pi) : width * 256.0 / 315.0;
  return a * b;
}

std::vector<FamilyMember> test_family() {
  using P = FamilyMember::Profile;
  return {
      {"loggauss(+0.30)*gauss", 1, 0.30, 0.35, P::Gauss, 0.0, 1.0, 0.0},
      {"loggauss(-0.40)*gauss*e^{2iv}", -1, 0.40, 0.30, P::Gauss, 1.0, 0.8, 2.0},
      {"loggauss(+0.25)*bump(w=2)", 1, 0.25, 0.30, P::Bump, 0.5, 2.0, 0.0},
      {"loggauss(+0.30)*bump(w=1)*e^{3iv}", 1, 0.30, 0.30, P::Bump, 0.0, 1.0, 3.0},
  };
}

GFunction sample(const FamilyMember& f, const GridConfig& grid) {
  GFunction r(grid, false);
  for (int j = 0; j < grid.n; ++j) {
    double gq = f.g(grid.q(j));
    if (gq == 0.0) continue;
    for (int b = 0; b < grid.n; ++b) r.at(j, b) = gq * f.p(grid.v(b));
  }
  return r;
}

GFunction sample_translated(const FamilyMember& f, const GroupElem& g, const GridConfig& grid) {
  const double q = g.q[0], v = g.v[0];
  GFunction r(grid, false);
  for (int j = 0; j < grid.n; ++j) {
    double gq = f.g(grid.q(j) / q);
    if (gq == 0.0) continue;
    for (int b = 0; b < grid.n; ++b) r.at(j, b) = gq * f.p((grid.v(b) - v) / q);
  }
  return r;
}

double window_fraction(const FamilyMember& f, const GridConfig& grid) {
  double nn = sample(f, grid).norm();
  return nn * nn / f.continuum_norm2();
}

std::vector<cplx> pi_v_matrix(const GroupElem& g, const GridConfig& grid) {
  const int n = grid.n;
  const double q = g.q[0], v = g.v[0], h = grid.h();
  // D_q by periodic cubic interpolation.
  MatC d = MatC::Zero(n, n);
  const double amp = 1.0 / std::sqrt(std::abs(q));
  for (int a = 0; a < n; ++a) {
    double u = grid.v(a) / q / h + n / 2;
    double fl = std::floor(u);
    auto w = cubic_weights(u - fl);
    for (int k = 0; k < 4; ++k) {
      int idx = ((static_cast<int>(fl) - 1 + k) % n + n) % n;
      d(a, idx) += amp * w[k];
    }
  }
  // T_v: T(a, b) = τ(a − b) = (1/N) Σ_m e^{iξ_m ((a − b)h − v)}
  std::vector<cplx> tau(2 * n - 1);
  for (int k = -(n - 1); k < n; ++k) {
    cplx s = 0.0;
    for (int m = 0; m < n; ++m) s += std::polar(1.0, grid.xi(m) * (k * h - v));
    tau[k + n - 1] = s / static_cast<double>(n);
  }
  MatC t(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t(a, b) = tau[a - b + n - 1];
  MatC p = t * d;
  return std::vector<cplx>(p.data(), p.data() + p.size());
}

std::vector<cplx> pi_v_apply(const GroupElem& g, const std::vector<cplx>& phi, const GridConfig& grid) {
  const int n = grid.n;
  std::vector<cplx> p = pi_v_matrix(g, grid);
  Eigen::VectorX<cplx> out = CMapC(p.data(), n, n) * Eigen::Map<const Eigen::VectorX<cplx>>(phi.data(), n);
  return std::vector<cplx>(out.data(), out.data() + n);
}

HSMatrix conjugate_kernel(const std::vector<cplx>& p, const HSMatrix& k) {
  const int n = k.n;
  HSMatrix r(n, k.h);
  CMapC pm(p.data(), n, n);
  MapC(r.k.data(), n, n) = pm * CMapC(k.k.data(), n, n) * pm.adjoint();
  return r;
}

GFunction t_z_apply(const GFunction& f, cplx z, double margin, long* guarded) {
  if (!f.fourier) throw std::invalid_argument("t_z_apply: expects the Fourier picture");
  GFunction r = f;
  long cnt = 0;
  for (int j = 0; j < f.grid.n; ++j)
    for (int m = 0; m < f.grid.n; ++m) {
      double a = std::abs(1.0 + f.grid.q(j) * f.grid.xi(m));
      if (a < margin) {
        r.at(j, m) = 0.0;
        ++cnt;
      } else {
        r.at(j, m) *= std::exp(-z * std::log(a));
      }
    }
  if (guarded) *guarded = cnt;
  return r;
}

GFunction delta_power_apply(const GFunction& f, cplx z) {
  GFunction r = f;
  for (int j = 0; j < f.grid.n; ++j) {
    cplx s = std::exp(-z * std::log(std::abs(f.grid.q(j))));
    for (int c = 0; c < f.grid.n; ++c) r.at(j, c) *= s;
  }
  return r;
}

cplx interp_eta_xi(const GridConfig& grid, const std::vector<cplx>& f, double eta, double xi, bool* inside) {
  const int n = grid.n;
  double u = eta / grid.h_xi() - 0.5 + n / 2;
  double w = xi / grid.h_xi() + n / 2;
  bool in = u >= 0.0 && u <= n - 1 && w >= 0.0 && w <= n - 1;
  if (inside) *inside = in;
  if (!in) return 0.0;
  double fu = std::floor(u), fw = std::floor(w);
  auto cu = cubic_weights(u - fu), cw = cubic_weights(w - fw);
  int iu = static_cast<int>(fu), iw = static_cast<int>(fw);
  cplx s = 0.0;
  for (int a = 0; a < 4; ++a) {
    int j = iu - 1 + a;
    if (j < 0 || j >= n || cu[a] == 0.0) continue;
    for (int b = 0; b < 4; ++b) {
      int m = iw - 1 + b;
      if (m < 0 || m >= n) continue;
      s += cu[a] * cw[b] * f[static_cast<size_t>(j) * n + m];
    }
  }
  return s;
}

namespace {

// (q, ξ) ↦ (η, ξ) with η = φ(q) = −1/q.
inline double eta_of(const XPoint& p) { return -1.0 / p.q[0]; }

}  // namespace

GridApplyResult apply_symop_grid(const SymOp& t, const ProductFunction& f, double margin) {
  if (t.legs() != 2) throw std::invalid_argument("apply_symop_grid: expects a two-leg operator");
  const GridConfig& g = f.grid;
  const int n = g.n;
  const double wleg = (g.h_xi() / kTwoPi) * (g.h_xi() / kTwoPi);
  double nf = 0.0, ntf = 0.0, nd = 0.0, off = 0.0;
  long interp = 0;
  for (int j1 = 0; j1 < n; ++j1)
    for (int m1 = 0; m1 < n; ++m1) {
      const cplx a = f.leg1[static_cast<size_t>(j1) * n + m1];
      const XPoint x1{{g.q(j1)}, {g.xi(m1)}};
      for (int j2 = 0; j2 < n; ++j2)
        for (int m2 = 0; m2 < n; ++m2) {
          const cplx b = f.leg2[static_cast<size_t>(j2) * n + m2];
          const cplx fx = a * b;
          const XPoint x2{{g.q(j2)}, {g.xi(m2)}};
          cplx tf = 0.0;
          auto e = t.eval(Legs{x1, x2}, margin);
          bool in1 = false, in2 = false;
          if (e) {
            cplx v1 = interp_eta_xi(g, f.leg1, eta_of(e->image[0]), e->image[0].xi[0], &in1);
            cplx v2 = interp_eta_xi(g, f.leg2, eta_of(e->image[1]), e->image[1].xi[0], &in2);
            cplx val = v1 * v2;
            tf = e->weight * (t.antilinear() ? std::conj(val) : val);
            ++interp;
          }
          if (!e || !in1 || !in2) off += std::norm(fx);
          nf += std::norm(fx);
          ntf += std::norm(tf);
          nd += std::norm(tf - fx);
        }
    }
  GridApplyResult r;
  r.norm_f = std::sqrt(nf * wleg * wleg);
  r.norm_tf = std::sqrt(ntf * wleg * wleg);
  r.norm_diff = std::sqrt(nd * wleg * wleg);
  r.offgrid_mass = nf > 0 ? off / nf : 0.0;
  r.interpolated = interp;
  return r;
}

GFunction apply_symop_grid1(const SymOp& t, const GFunction& f, double margin, long* offgrid) {
  if (t.legs() != 1) throw std::invalid_argument("apply_symop_grid1: expects a one-leg operator");
  if (!f.fourier) throw std::invalid_argument("apply_symop_grid1: expects the Fourier picture");
  const GridConfig& g = f.grid;
  GFunction r(g, true);
  long off = 0;
  for (int j = 0; j < g.n; ++j)
    for (int m = 0; m < g.n; ++m) {
      auto e = t.eval(Legs{XPoint{{g.q(j)}, {g.xi(m)}}}, margin);
      if (!e) {
        ++off;
        continue;
      }
      bool in = false;
      cplx v = interp_eta_xi(g, f.a, eta_of(e->image[0]), e->image[0].xi[0], &in);
      if (!in) ++off;
      r.at(j, m) = e->weight * (t.antilinear() ? std::conj(v) : v);
    }
  if (offgrid) *offgrid = off;
  return r;
}

}  // namespace qaff
