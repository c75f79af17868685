#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "qaff/numgrid.hpp"
#include "qaff/qgops.hpp"

namespace qaff {

// Thresholds of the grid suites.
namespace gridtol {
inline constexpr double kRoundTrip = 1e-12;
inline constexpr double kGaussFT = 1e-8;
inline constexpr double kKN = 1e-3;          // at N = 256
inline constexpr double kStar = 1e-2;        // at N = 128
inline constexpr double kEquivOnGrid = 1e-3;
inline constexpr double kEquivRandom = 1e-2;
inline constexpr double kDufloMoore = 2e-2;
inline constexpr double kChiStar = 1e-2;
inline constexpr double kCrossLayer = 1e-2;
inline constexpr double kDeformUnitarity = 1e-2;
inline constexpr double kOffGridMass = 5e-2;
}  // namespace gridtol

std::vector<int> default_grid_sizes();  // {128, 256, 512}

// DFT round trip, Plancherel, and the Gaussian 𝓕_V against its closed form.
VerificationReport check_grid_basics(const GridConfig& grid, std::uint64_t seed);

struct ConvergenceRow {
  int n = 0;
  double kn_err = 0.0;      // max over the family of |‖Op(f)‖_HS / ‖f‖ − 1|
  double star_hom = 0.0;    // max ‖Op(f⋆g) − Op(f)Op(g)‖_HS / (‖f‖‖g‖)
  double star_assoc = 0.0;  // max ‖(f⋆g)⋆k − f⋆(g⋆k)‖ / (‖f‖‖g‖‖k‖)
  long star_dropped = 0;
};

std::vector<ConvergenceRow> convergence_rows(const std::vector<int>& sizes, double L);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

VerificationReport check_kn_unitarity(const std::vector<ConvergenceRow>& rows, std::uint64_t seed, int ref_n = 256);
VerificationReport check_star(const std::vector<ConvergenceRow>& rows, std::uint64_t seed, int ref_n = 128);

// Op(λ_g f) = π_V(g) Op(f) π_V(g)* on on-grid and random interpolated g.
VerificationReport check_equivariance(const GridConfig& grid, std::uint64_t seed, int random_count = 20);

struct LogGaussian {
  int sign = 1;
  double mu = 0.5;
  double s = 0.3;
  double amp = 1.0;
  double operator()(double q) const;
};

struct DufloMooreResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel() const { return std::abs(lhs - rhs) / rhs; }
};

// ∫|⟨π(g)ψ₂ ... ⟩|² side on the grid against (∫|φ₁|²|q| d_Q)(∫|φ₂|² d_Q).
DufloMooreResult duflo_moore(const GridConfig& grid, const LogGaussian& phi1, const LogGaussian& phi2);
VerificationReport check_duflo_moore(const GridConfig& grid, std::uint64_t seed);

// Δ^z(f⋆(Δ^{−z}g)) = (T_z f)⋆g, Δ^z(f⋆g) = (Δ^z f)⋆g and T_zT_w = T_{z+w}.
VerificationReport check_chi_star(const GridConfig& grid, std::uint64_t seed, const std::vector<cplx>& zs);
std::vector<cplx> default_chi_z();

// 𝒰F(q, ξ) = F(φ⁻¹(φ(q) − ξ), ξ) by index shift against the JĴ·JU*UJ·JĴ SymOp on the grid.
VerificationReport check_cross_layer_u(const GridConfig& grid, std::uint64_t seed);

struct DeformationGridRow {
  double theta = 0.0;
  double rel_diff = 0.0;    // ‖(Ω_θ − 1)f‖ / ‖f‖
  double norm_ratio = 0.0;  // ‖Ω_θ f‖ / ‖f‖
  double offgrid = 0.0;
};

GridConfig deformation_grid();
ProductFunction deformation_test_function(const GridConfig& grid);
std::vector<DeformationGridRow> deformation_grid_rows(const std::vector<double>& thetas, const GridConfig& grid);

// Exact map-distance table and grid norm table, both strictly decreasing.
VerificationReport check_deformation(const SamplePlan& plan, const DeformationTable& exact,
                                     const std::vector<DeformationGridRow>& grid_rows);
void write_deformation_csv(std::ostream& out, const DeformationTable& exact,
                           const std::vector<DeformationGridRow>& grid_rows);

}  // namespace qaff
