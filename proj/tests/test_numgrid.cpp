#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qaff/numchecks.hpp"

using namespace qaff;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

GFunction random_fn(const GridConfig& g, bool fourier, std::uint64_t seed) {
  GFunction f(g, fourier);
  Rng rng(seed);
  for (auto& x : f.a) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return f;
}

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
cplx simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  cplx s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("grid layout") {
  GridConfig g{64, 12.0};
  CHECK(g.h() * g.h_xi() * g.n == doctest::Approx(kTwoPi));
  CHECK(g.q(0) == doctest::Approx(-1.0 / g.eta(0)));
  // η − ξ lands on an η node
  CHECK(g.eta(20) - g.xi(g.n / 2 + 5) == doctest::Approx(g.eta(15)));
  CHECK_THROWS(GridConfig{30, 12.0}.validate());
  CHECK_THROWS(GridConfig{64, -1.0}.validate());
}

TEST_CASE("fourier_v against the defining sum") {
  GridConfig g{32, 6.0};
  GFunction f = random_fn(g, false, 1);
  GFunction F = fourier_v(f);
  double err = 0.0;
  for (int j = 0; j < g.n; j += 5)
    for (int m = 0; m < g.n; ++m) {
      cplx s = 0.0;
      for (int b = 0; b < g.n; ++b) s += std::polar(g.h(), -g.xi(m) * g.v(b)) * f.at(j, b);
      err = std::max(err, std::abs(s - F.at(j, m)));
    }
  CHECK(err < 1e-12);
  GFunction back = inverse_fourier_v(F);
  double rt = 0.0;
  for (size_t i = 0; i < f.a.size(); ++i) rt = std::max(rt, std::abs(back.a[i] - f.a[i]));
  CHECK(rt < 1e-13);
  CHECK(F.norm() == doctest::Approx(f.norm()).epsilon(1e-13));
}

TEST_CASE("grid basics report") {
  auto r = check_grid_basics(GridConfig{256, 12.0}, 42);
  CHECK(r.passed());
  CHECK(r.count == 3);
}

TEST_CASE("op_kn kernel against quadrature of the symbol") {
  // K(v, v') = p(v') ĝ(v − v'), ĝ(u) = ∫ e^{iηu} g(φ⁻¹(η)) dη/2π.
  // The η sum on the grid carries discretization error, so the comparison is
  // made on two grids at the same physical points and must converge.
  FamilyMember f = test_family()[0];
  auto ghat = [&](double u) {
    // η = −1/q, q = e^t on the positive component: dη = e^{−t} dt
    auto integrand = [&](double t) {
      double q = std::exp(t);
      return std::polar(f.g(q) * std::exp(-t), -u / q) / kTwoPi;
    };
    double c = std::log(f.mu);
    return simpson(integrand, c - 10 * f.s, c + 10 * f.s, 60000);
  };
  double errs[2];
  int slot = 0;
  for (int n : {128, 256}) {
    GridConfig grid{n, 12.0};
    HSMatrix k = op_kn(sample(f, grid));
    const int r = n / 128;
    double err = 0.0, scale = 0.0;
    for (int ka = -24; ka < 24; ka += 3)
      for (int kb = -24; kb < 24; kb += 5) {
        int a = n / 2 + ka * r, b = n / 2 + kb * r;
        cplx want = f.p(grid.v(b)) * ghat(grid.v(a) - grid.v(b));
        err = std::max(err, std::abs(k.at(a, b) - want));
        scale = std::max(scale, std::abs(want));
      }
    REQUIRE(scale > 0.0);
    errs[slot++] = err / scale;
  }
  CHECK(errs[0] < 1e-4);
  CHECK(errs[1] < 0.1 * errs[0]);
}

TEST_CASE("HS norm matches the closed-form L2 norm") {
  GridConfig grid{256, 12.0};
  for (const auto& f : test_family()) {
    CAPTURE(f.name);
    double ratio = op_kn(sample(f, grid)).hs_norm() / std::sqrt(f.continuum_norm2());
    CHECK(std::abs(ratio - 1.0) < 1e-3);
  }
}

TEST_CASE("test family keeps 99% of its mass in the window") {
  for (int n : {128, 256, 512})
    for (const auto& f : test_family()) {
      CAPTURE(n);
      CAPTURE(f.name);
      CHECK(window_fraction(f, GridConfig{n, 12.0}) >= 0.99);
    }
}

TEST_CASE("continuum norm closed form against quadrature") {
  for (const auto& f : test_family()) {
    CAPTURE(f.name);
    // ∫ g(q)² dq/(2π q²) in t = log|q|
    double c = std::log(f.mu);
    cplx gq = simpson([&](double t) { return cplx(std::pow(f.g(f.sign * std::exp(t)), 2) * std::exp(-t) / kTwoPi); },
                      c - 12 * f.s, c + 12 * f.s, 4000);
    cplx pv = simpson([&](double v) { return cplx(std::norm(f.p(v))); }, f.center - 12 * f.width,
                      f.center + 12 * f.width, 20000);
    CHECK(f.continuum_norm2() == doctest::Approx(gq.real() * pv.real()).epsilon(1e-8));
  }
}

TEST_CASE("star against the defining sum with phi computed by the model") {
  GridConfig g{16, 3.0};
  auto axb = make_model("axb");
  GFunction f1 = random_fn(g, true, 2), f2 = random_fn(g, true, 3);
  StarResult s = star(f1, f2);
  double err = 0.0;
  long dropped = 0;
  for (int j = 0; j < g.n; ++j)
    for (int m = 0; m < g.n; ++m) {
      cplx acc = 0.0;
      for (int mp = 0; mp < g.n; ++mp) {
        // F₂ at (φ⁻¹(φ(q) − ξ'), ξ − ξ')
        double qq = axb->phi_inv(DualElem{axb->phi(QElem{g.q(j)})[0] - g.xi(mp)})[0];
        double eta = -1.0 / qq;
        int jj = static_cast<int>(std::lround(eta / g.h_xi() - 0.5 + g.n / 2));
        int mm = static_cast<int>(std::lround((g.xi(m) - g.xi(mp)) / g.h_xi() + g.n / 2));
        if (jj < 0 || jj >= g.n || mm < 0 || mm >= g.n) {
          ++dropped;
          continue;
        }
        CHECK(std::abs(g.q(jj) - qq) <= 1e-9 * (1.0 + std::abs(qq)));
        acc += f1.at(j, mp) * f2.at(jj, mm) * g.h_xi() / kTwoPi;
      }
      err = std::max(err, std::abs(acc - s.value.at(j, m)));
    }
  CHECK(err < 1e-13);
  CHECK(s.dropped == dropped);
}

TEST_CASE("translation by a grid step is an index shift") {
  GridConfig g{64, 8.0};
  std::vector<cplx> phi(g.n);
  Rng rng(5);
  for (auto& x : phi) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  auto out = pi_v_apply(GroupElem{{1.0}, {3 * g.h()}}, phi, g);
  double err = 0.0;
  for (int a = 0; a < g.n; ++a) err = std::max(err, std::abs(out[a] - phi[((a - 3) % g.n + g.n) % g.n]));
  CHECK(err < 1e-12);
}

TEST_CASE("pi_V(q, v) on a resolved Gaussian") {
  GridConfig g{256, 12.0};
  auto gauss = [](double w) { return std::exp(-0.5 * (w - 0.4) * (w - 0.4)); };
  std::vector<cplx> phi(g.n);
  for (int b = 0; b < g.n; ++b) phi[b] = gauss(g.v(b));
  for (auto [q, v] : {std::pair{1.2, 0.37}, std::pair{-0.8, -1.1}}) {
    auto out = pi_v_apply(GroupElem{{q}, {v}}, phi, g);
    double err = 0.0;
    for (int a = 0; a < g.n; ++a) {
      double want = gauss((g.v(a) - v) / q) / std::sqrt(std::abs(q));
      err = std::max(err, std::abs(out[a] - want));
    }
    CHECK(err < 1e-3);
  }
}

TEST_CASE("T_z symbol and Delta powers") {
  GridConfig g{32, 4.0};
  GFunction f(g, true);
  for (auto& x : f.a) x = 1.0;
  GFunction t = t_z_apply(f, cplx(1.0, 0.0));
  int j = 5, m = 20;
  CHECK(std::abs(t.at(j, m) - 1.0 / std::abs(1.0 + g.q(j) * g.xi(m))) < 1e-14);
  GFunction d = delta_power_apply(f, cplx(0.0, 1.0));
  CHECK(std::abs(d.at(j, m) - std::exp(cplx(0.0, -1.0) * std::log(std::abs(g.q(j))))) < 1e-14);
}

TEST_CASE("interpolation reproduces nodes and identity ops reproduce functions") {
  GridConfig g{32, 4.0};
  GFunction f = random_fn(g, true, 9);
  bool in = false;
  CHECK(std::abs(interp_eta_xi(g, f.a, g.eta(7), g.xi(11), &in) - f.at(7, 11)) < 1e-12);
  CHECK(in);
  interp_eta_xi(g, f.a, g.eta(0) - 1.0, 0.0, &in);
  CHECK_FALSE(in);
  long off = -1;
  GFunction same = apply_symop_grid1(identity_op(1), f, 1e-3, &off);
  CHECK(off == 0);
  CHECK((same - f).norm() < 1e-12 * f.norm());
}

TEST_CASE("Duflo-Moore oracle pieces") {
  GridConfig g{256, 12.0};
  auto d = duflo_moore(g, LogGaussian{1, 0.5, 0.3, 1.0}, LogGaussian{1, 0.3, 0.3, 1.0});
  // RHS by hand: ∫ e^{−t²/s²} e^{t} dt/2π with the center shifted, times ‖φ₂‖²
  const double s = 0.3, rt = std::sqrt(std::numbers::pi);
  double k1 = s * rt * 0.5 * std::exp(s * s / 4.0) / kTwoPi;
  double n2 = s * rt / kTwoPi;
  CHECK(d.rhs == doctest::Approx(k1 * n2).epsilon(1e-8));
  CHECK(d.rel() < 2e-2);
}

TEST_CASE("grid suites pass") {
  CHECK(check_equivariance(GridConfig{256, 12.0}, 42, 4).passed());
  CHECK(check_duflo_moore(GridConfig{256, 12.0}, 42).passed());
  CHECK(check_chi_star(GridConfig{128, 12.0}, 42, default_chi_z()).passed());
  CHECK(check_cross_layer_u(GridConfig{128, 12.0}, 42).passed());
}

TEST_CASE("cross-layer check is sensitive to a wrong shift") {
  // 𝒰 built with the opposite shift direction must disagree with the SymOp route
  GridConfig g{128, 12.0};
  auto axb = make_model("axb");
  SymOp jj = compose(conj_J(axb), conj_Jhat(axb));
  SymOp u = compose({jj, ju_u_j(axb), jj});
  GFunction F = fourier_v(sample(test_family()[0], g));
  GFunction wrong(g, true);
  for (int j = 0; j < g.n; ++j)
    for (int m = 0; m < g.n; ++m) {
      int src = j + (m - g.n / 2);
      if (src >= 0 && src < g.n) wrong.at(j, m) = F.at(src, m);
    }
  GFunction via = apply_symop_grid1(u, F, 1e-3);
  CHECK((via - wrong).norm() / F.norm() > 0.1);
}
