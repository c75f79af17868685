#pragma once

#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qaff/symop.hpp"

namespace qaff {

// Discretization of L²(G) for G = ℝ*⋉ℝ (model "axb").
//
// v nodes   v_b = (b − N/2)h,          h = 2L/N
// ξ nodes   ξ_m = (m − N/2)h_ξ,        h_ξ = π/L  (Fourier dual of the v grid)
// η nodes   η_j = (j + ½ − N/2)h_ξ,    q_j = φ⁻¹(η_j) = −1/η_j
//
// The q grid is the φ⁻¹ image of the half-offset η grid, so η_j − ξ_m' is again an
// η node and |q|⁻¹d_Q(q) becomes dη/2π. η = 0 (q = ∞) is never a node.
struct GridConfig {
  int n = 256;
  double L = 12.0;

  double h() const { return 2.0 * L / n; }
  double h_xi() const { return std::numbers::pi / L; }
  double v(int b) const { return (b - n / 2) * h(); }
  double xi(int m) const { return (m - n / 2) * h_xi(); }
  double eta(int j) const { return (j + 0.5 - n / 2) * h_xi(); }
  double q(int j) const { return -1.0 / eta(j); }
  // Throws std::invalid_argument unless n is a positive multiple of 4 and L > 0.
  void validate() const;
};

// Row j is the q node q_j; column c is v_c, or ξ_c in the Fourier picture.
struct GFunction {
  GridConfig grid;
  bool fourier = false;
  std::vector<cplx> a;

  GFunction() = default;
  GFunction(const GridConfig& g, bool fourier_picture)
      : grid(g), fourier(fourier_picture), a(static_cast<size_t>(g.n) * g.n) {}
  cplx& at(int j, int c) { return a[static_cast<size_t>(j) * grid.n + c]; }
  cplx at(int j, int c) const { return a[static_cast<size_t>(j) * grid.n + c]; }
  // L²(G) norm: Σ|f|² h h_ξ/2π, or Σ|F|² (h_ξ/2π)² in the Fourier picture.
  double norm() const;
};

GFunction operator-(const GFunction& x, const GFunction& y);

// Kernel matrix K(v_a, v_b) of an operator on L²(V).
struct HSMatrix {
  int n = 0;
  double h = 0.0;
  std::vector<cplx> k;

  HSMatrix() = default;
  HSMatrix(int size, double spacing) : n(size), h(spacing), k(static_cast<size_t>(size) * size) {}
  cplx& at(int a, int b) { return k[static_cast<size_t>(a) * n + b]; }
  cplx at(int a, int b) const { return k[static_cast<size_t>(a) * n + b]; }
  double hs_norm() const;  // sqrt(Σ|K|²)·h
};

HSMatrix operator-(const HSMatrix& x, const HSMatrix& y);
// Kernel of the operator product: Σ_w A(a,w)B(w,b)h.
HSMatrix operator*(const HSMatrix& x, const HSMatrix& y);

// 𝓕_V along each row: F(ξ) = ∫ e^{−iξv} f(v) dv.
GFunction fourier_v(const GFunction& f);
GFunction inverse_fourier_v(const GFunction& f);

// Kohn–Nirenberg (anti-ordered) quantization of f given in the (q, v) picture.
HSMatrix op_kn(const GFunction& f);

struct StarResult {
  GFunction value;  // Fourier picture
  long dropped = 0;  // terms whose shifted index left the grid
};

// Twisted convolution in the Fourier picture:
// F(f₁⋆f₂)(q, ξ) = ∫ F₁(q, ξ') F₂(φ⁻¹(φ(q) − ξ'), ξ − ξ') dξ'.
StarResult star(const GFunction& f1, const GFunction& f2);

// Separable test function g(q)p(v): log-Gaussian in |q| on one sign component
// times a v profile.
struct FamilyMember {
  enum class Profile { Gauss, Bump };

  std::string name;
  int sign = 1;
  double mu = 0.3;  // center of log|q| is log(mu)
  double s = 0.3;
  Profile profile = Profile::Gauss;
  double center = 0.0;
  double width = 1.0;  // Gaussian σ, or bump half-width: (1 − x²)² on |x| < 1
  double freq = 0.0;   // modulation e^{i freq v}

  double g(double q) const;
  cplx p(double v) const;
  cplx eval(double q, double v) const { return g(q) * p(v); }
  // Closed-form L²(G) norm², using d_Q(q) = dq/(2π|q|) and d(q,v) = |q|⁻¹d_Q dv.
  double continuum_norm2() const;
};

std::vector<FamilyMember> test_family();

GFunction sample(const FamilyMember& f, const GridConfig& grid);
// (λ_g f)(q', v') = f(g⁻¹(q', v')), sampled analytically.
GFunction sample_translated(const FamilyMember& f, const GroupElem& g, const GridConfig& grid);
// Fraction of ‖f‖² (continuum) carried by the grid window, estimated as the
// ratio of the grid norm to the closed form.
double window_fraction(const FamilyMember& f, const GridConfig& grid);

// π_V(q, v) as an N×N matrix on the v grid: T_v by DFT phase (exact band-limited
// shift), D_q φ(w) = |q|^{−1/2} φ(q⁻¹w) by periodic cubic interpolation.
std::vector<cplx> pi_v_matrix(const GroupElem& g, const GridConfig& grid);
std::vector<cplx> pi_v_apply(const GroupElem& g, const std::vector<cplx>& phi, const GridConfig& grid);
// P K P^H
HSMatrix conjugate_kernel(const std::vector<cplx>& p, const HSMatrix& k);

// T_z in the Fourier picture: multiplication by Δ(φ⁻¹(ξ₀ − (q⁻¹)♭ξ))^{−z} = |1 + qξ|^{−z}.
// Nodes with |1 + qξ| below margin are zeroed and counted in *guarded.
GFunction t_z_apply(const GFunction& f_fourier, cplx z, double margin = 1e-3, long* guarded = nullptr);
// Multiplication by Δ(q)^z = |q|^{−z} (commutes with 𝓕_V).
GFunction delta_power_apply(const GFunction& f, cplx z);

// Two-leg functions on the (η, ξ) grid of each leg, stored as product f₁ ⊗ f₂
// (leg-1 and leg-2 factors sampled on the same GridConfig, Fourier picture).
struct ProductFunction {
  GridConfig grid;
  std::vector<cplx> leg1;  // [j * n + m]
  std::vector<cplx> leg2;
};

struct GridApplyResult {
  double norm_f = 0.0;
  double norm_tf = 0.0;
  double norm_diff = 0.0;     // ‖Tf − f‖
  double offgrid_mass = 0.0;  // fraction of ‖f‖² at nodes whose image leaves the window
  long interpolated = 0;
};

// Applies a two-leg SymOp (σ acting on axb points) to f₁ ⊗ f₂ node by node;
// f is read off-grid by bicubic interpolation in (η, ξ). Norms stream over leg 1.
GridApplyResult apply_symop_grid(const SymOp& t, const ProductFunction& f, double margin = 1e-3);

// One-leg variant returning the transformed grid function (Fourier picture).
GFunction apply_symop_grid1(const SymOp& t, const GFunction& f, double margin, long* offgrid = nullptr);

// Bicubic (Catmull–Rom) value of a (η, ξ) grid function at (η, ξ); zero outside.
cplx interp_eta_xi(const GridConfig& grid, const std::vector<cplx>& f, double eta, double xi, bool* inside = nullptr);

}  // namespace qaff
