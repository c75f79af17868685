#include "qaff/numchecks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qaff {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Sub-check bookkeeping for grid suites: count/valid are numbers of sub-checks.
struct Tally {
  VerificationReport& r;
  long next = 0;

  bool operator()(double err, double tol, const std::string& what) {
    long i = next++;
    ++r.count;
    ++r.valid;
    if (!(err <= r.worst_map_err)) r.worst_map_err = err;
    if (!(err <= tol)) {
      r.record_failure(i, what + fmt(": err %.3e > %.1e", err, tol));
      return false;
    }
    return true;
  }
  // Structural condition (monotonicity etc.); no numeric error attached.
  bool require(bool ok, const std::string& what) {
    long i = next++;
    ++r.count;
    ++r.valid;
    if (!ok) r.record_failure(i, what);
    return ok;
  }
};

VerificationReport grid_report(const std::string& identity, std::uint64_t seed, double tol) {
  VerificationReport r;
  r.identity = identity;
  r.model = "axb";
  r.seed = seed;
  r.tolerance = tol;
  r.margin = 0.0;
  r.min_valid_fraction = 1.0;
  return r;
}

double rel_norm_err(const GFunction& a, const GFunction& b) { return (a - b).norm() / b.norm(); }

bool strictly_decreasing(const std::vector<double>& xs) {
  for (size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] < xs[i - 1])) return false;
  return true;
}

double bump(double x) { return std::abs(x) < 1.0 ? (1.0 - x * x) * (1.0 - x * x) : 0.0; }

}  // namespace

std::vector<int> default_grid_sizes() { return {128, 256, 512}; }

VerificationReport check_grid_basics(const GridConfig& grid, std::uint64_t seed) {
  grid.validate();
  VerificationReport r = grid_report("grid-basics", seed, gridtol::kRoundTrip);
  Tally t{r};
  const int n = grid.n;

  Rng rng(derive_seed(seed, 0x67726964));
  GFunction f(grid, false);
  for (auto& x : f.a) x = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
  GFunction F = fourier_v(f);
  GFunction back = inverse_fourier_v(F);
  double rt = 0.0, mx = 0.0;
  for (size_t i = 0; i < f.a.size(); ++i) {
    rt = std::max(rt, std::abs(back.a[i] - f.a[i]));
    mx = std::max(mx, std::abs(f.a[i]));
  }
  t(rt / mx, gridtol::kRoundTrip, "DFT round trip");
  t(std::abs(F.norm() / f.norm() - 1.0), gridtol::kRoundTrip, "Plancherel");

  // e^{−v²/2} ↦ √(2π) e^{−ξ²/2}, times a row factor to exercise the q index
  GFunction gs(grid, false);
  for (int j = 0; j < n; ++j)
    for (int b = 0; b < n; ++b) gs.at(j, b) = std::exp(-0.5 * grid.v(b) * grid.v(b)) * (1.0 + 0.01 * j);
  GFunction G = fourier_v(gs);
  double ge = 0.0;
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      cplx want = std::sqrt(kTwoPi) * std::exp(-0.5 * grid.xi(m) * grid.xi(m)) * (1.0 + 0.01 * j);
      ge = std::max(ge, std::abs(G.at(j, m) - want) / std::sqrt(kTwoPi));
    }
  t(ge, gridtol::kGaussFT, "Gaussian transform");
  return r;
}

// ---- convergence: KN unitarity and the star product ----

namespace {

struct Triple {
  int a, b, c;
};
// Family indices; chosen so that the products mix both sign components.
const Triple kStarTriples[] = {{0, 2, 3}, {2, 1, 0}, {3, 3, 2}};

}  // namespace

std::vector<ConvergenceRow> convergence_rows(const std::vector<int>& sizes, double L) {
  const auto fam = test_family();
  std::vector<ConvergenceRow> rows;
  for (int n : sizes) {
    GridConfig grid{n, L};
    grid.validate();
    ConvergenceRow row;
    row.n = n;
    std::vector<GFunction> fs, Fs;
    std::vector<HSMatrix> ops;
    for (const auto& m : fam) {
      fs.push_back(sample(m, grid));
      Fs.push_back(fourier_v(fs.back()));
      ops.push_back(op_kn(fs.back()));
      double ratio = ops.back().hs_norm() / std::sqrt(m.continuum_norm2());
      row.kn_err = std::max(row.kn_err, std::abs(ratio - 1.0));
    }
    for (const auto& tr : kStarTriples) {
      StarResult ab = star(Fs[tr.a], Fs[tr.b]);
      row.star_dropped += ab.dropped;
      HSMatrix lhs = op_kn(inverse_fourier_v(ab.value));
      HSMatrix rhs = ops[tr.a] * ops[tr.b];
      double nab = fs[tr.a].norm() * fs[tr.b].norm();
      row.star_hom = std::max(row.star_hom, (lhs - rhs).hs_norm() / nab);

      StarResult left = star(ab.value, Fs[tr.c]);
      StarResult bc = star(Fs[tr.b], Fs[tr.c]);
      StarResult right = star(Fs[tr.a], bc.value);
      row.star_dropped += left.dropped + bc.dropped + right.dropped;
      double nabc = nab * fs[tr.c].norm();
      row.star_assoc = std::max(row.star_assoc, (left.value - right.value).norm() / nabc);
    }
    rows.push_back(row);
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "N,kn_err,star_hom,star_assoc,star_dropped\n";
  char buf[200];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.6e,%.6e,%.6e,%ld\n", r.n, r.kn_err, r.star_hom, r.star_assoc,
                  r.star_dropped);
    out << buf;
  }
}

VerificationReport check_kn_unitarity(const std::vector<ConvergenceRow>& rows, std::uint64_t seed, int ref_n) {
  VerificationReport r = grid_report("kn-unitarity", seed, gridtol::kKN);
  Tally t{r};
  std::vector<double> errs;
  bool have_ref = false;
  for (const auto& row : rows) {
    errs.push_back(row.kn_err);
    r.notes.push_back(fmt("N=%.0f kn_err=%.3e", row.n, row.kn_err));
    if (row.n == ref_n) {
      have_ref = true;
      t(row.kn_err, gridtol::kKN, "HS norm ratio at N=" + std::to_string(ref_n));
    }
  }
  t.require(have_ref, "reference grid size missing");
  t.require(strictly_decreasing(errs), "HS norm ratio error not strictly decreasing in N");
  return r;
}

VerificationReport check_star(const std::vector<ConvergenceRow>& rows, std::uint64_t seed, int ref_n) {
  VerificationReport r = grid_report("star-product", seed, gridtol::kStar);
  Tally t{r};
  std::vector<double> hom, assoc;
  bool have_ref = false;
  for (const auto& row : rows) {
    hom.push_back(row.star_hom);
    assoc.push_back(row.star_assoc);
    r.notes.push_back(fmt("N=%.0f hom=%.3e assoc=%.3e", row.n, row.star_hom, row.star_assoc));
    if (row.n == ref_n) {
      have_ref = true;
      t(row.star_hom, gridtol::kStar, "homomorphism defect at N=" + std::to_string(ref_n));
      t(row.star_assoc, gridtol::kStar, "associativity defect at N=" + std::to_string(ref_n));
    }
  }
  t.require(have_ref, "reference grid size missing");
  t.require(strictly_decreasing(hom), "homomorphism defect not strictly decreasing in N");
  t.require(strictly_decreasing(assoc), "associativity defect not strictly decreasing in N");
  return r;
}

// ---- equivariance ----

VerificationReport check_equivariance(const GridConfig& grid, std::uint64_t seed, int random_count) {
  grid.validate();
  VerificationReport r = grid_report("equivariance", seed, gridtol::kEquivRandom);
  Tally t{r};
  const auto fam = test_family();
  std::vector<GFunction> fs;
  std::vector<HSMatrix> ops;
  for (const auto& m : fam) {
    fs.push_back(sample(m, grid));
    ops.push_back(op_kn(fs.back()));
  }
  auto defect = [&](const GroupElem& g) {
    auto p = pi_v_matrix(g, grid);
    double worst = 0.0;
    for (size_t i = 0; i < fam.size(); ++i) {
      HSMatrix lhs = op_kn(sample_translated(fam[i], g, grid));
      HSMatrix rhs = conjugate_kernel(p, ops[i]);
      worst = std::max(worst, (lhs - rhs).hs_norm() / fs[i].norm());
    }
    return worst;
  };

  const double h = grid.h();
  const GroupElem on_grid[] = {
      {{1.0}, {5 * h}}, {{-1.0}, {0.0}}, {{-1.0}, {-8 * h}}, {{1.0}, {-12 * h}}};
  double worst_on = 0.0;
  for (const auto& g : on_grid) {
    double e = defect(g);
    worst_on = std::max(worst_on, e);
    t(e, gridtol::kEquivOnGrid, "on-grid g=(" + g.q.str() + "," + g.v.str() + ")");
  }
  Rng rng(derive_seed(seed, 0x6571));
  double worst_rand = 0.0;
  for (int k = 0; k < random_count; ++k) {
    double q = rng.sign() * std::exp(rng.uniform(-0.3, 0.3));
    double v = rng.uniform(-1.5, 1.5);
    GroupElem g{{q}, {v}};
    double e = defect(g);
    worst_rand = std::max(worst_rand, e);
    t(e, gridtol::kEquivRandom, "random g=(" + g.q.str() + "," + g.v.str() + ")");
  }
  r.notes.push_back(fmt("on-grid worst %.3e, random worst %.3e", worst_on, worst_rand));
  return r;
}

// ---- Duflo–Moore ----

double LogGaussian::operator()(double q) const {
  if (q == 0.0 || (q > 0) != (sign > 0)) return 0.0;
  double t = std::log(std::abs(q)) - std::log(mu);
  return amp * std::exp(-t * t / (2.0 * s * s));
}

namespace {

// ∫ f(e^t) dt/2π over one sign component by composite Simpson in t = log|q|.
template <class F>
double log_quadrature(int sign, double center, double s, F f) {
  const int n = 4000;
  const double a = center - 14 * s, b = center + 14 * s, dt = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * f(sign * std::exp(a + i * dt));
  }
  return acc * dt / 3.0 / kTwoPi;
}

}  // namespace

DufloMooreResult duflo_moore(const GridConfig& grid, const LogGaussian& phi1, const LogGaussian& phi2) {
  grid.validate();
  const int n = grid.n;
  const double h = grid.h(), hx = grid.h_xi();
  // E(b, k) = e^{−iη_k v_b} h_ξ/2π
  std::vector<cplx> e(static_cast<size_t>(n) * n);
  for (int b = 0; b < n; ++b)
    for (int k = 0; k < n; ++k) e[static_cast<size_t>(b) * n + k] = std::polar(hx / kTwoPi, -grid.eta(k) * grid.v(b));
  double lhs = 0.0;
  std::vector<double> fq(n);
  for (int j = 0; j < n; ++j) {
    // q_j⁻¹ = −η_j
    double qinv = -grid.eta(j);
    bool any = false;
    for (int k = 0; k < n; ++k) {
      double p = grid.q(k);
      fq[k] = phi1(qinv * p) * phi2(p) * std::abs(p);
      any = any || fq[k] != 0.0;
    }
    if (!any) continue;
    double inner = 0.0;
    for (int b = 0; b < n; ++b) {
      cplx c = 0.0;
      const cplx* row = &e[static_cast<size_t>(b) * n];
      for (int k = 0; k < n; ++k) c += row[k] * fq[k];
      inner += std::norm(c) * h;
    }
    lhs += inner * hx / kTwoPi;
  }
  DufloMooreResult res;
  res.lhs = lhs;
  double k1 = log_quadrature(phi1.sign, std::log(phi1.mu), phi1.s,
                             [&](double q) { return phi1(q) * phi1(q) * std::abs(q); });
  double n2 = log_quadrature(phi2.sign, std::log(phi2.mu), phi2.s, [&](double q) { return phi2(q) * phi2(q); });
  res.rhs = k1 * n2;
  return res;
}

VerificationReport check_duflo_moore(const GridConfig& grid, std::uint64_t seed) {
  VerificationReport r = grid_report("duflo-moore", seed, gridtol::kDufloMoore);
  Tally t{r};
  struct Case {
    const char* name;
    LogGaussian p1, p2;
  };
  const Case cases[] = {
      {"base", {1, 0.5, 0.3, 1.0}, {1, 0.3, 0.3, 1.0}},
      {"equal", {1, 0.4, 0.3, 1.0}, {1, 0.4, 0.3, 1.0}},
      {"scaled", {1, 0.5, 0.3, 2.5}, {1, 0.3, 0.3, 0.7}},
      {"shifted", {1, 0.7, 0.3, 1.0}, {1, 0.3, 0.3, 1.0}},
      {"negative", {-1, 0.5, 0.3, 1.0}, {-1, 0.3, 0.3, 1.0}},
  };
  for (const auto& c : cases) {
    DufloMooreResult d = duflo_moore(grid, c.p1, c.p2);
    r.notes.push_back(std::string(c.name) + fmt(": lhs=%.6e rhs=%.6e", d.lhs, d.rhs));
    t(d.rel(), gridtol::kDufloMoore, c.name);
  }
  return r;
}

// ---- T_z commutation ----

std::vector<cplx> default_chi_z() { return {cplx(-0.5, 0.0), cplx(1.0, 0.0), cplx(0.0, 1.0)}; }

namespace {

// Fourier-picture bump on q ∈ [q_lo, q_hi] (positive component), ξ ∈ [x_lo, x_hi].
GFunction fourier_bump(const GridConfig& grid, double q_lo, double q_hi, double x_lo, double x_hi, double phase) {
  GFunction F(grid, true);
  const double lc = 0.5 * (std::log(q_lo) + std::log(q_hi)), lw = 0.5 * (std::log(q_hi) - std::log(q_lo));
  const double xc = 0.5 * (x_lo + x_hi), xw = 0.5 * (x_hi - x_lo);
  for (int j = 0; j < grid.n; ++j) {
    double q = grid.q(j);
    if (q <= 0) continue;
    double bq = bump((std::log(q) - lc) / lw);
    if (bq == 0.0) continue;
    for (int m = 0; m < grid.n; ++m)
      F.at(j, m) = bq * bump((grid.xi(m) - xc) / xw) * std::polar(1.0, phase * grid.xi(m));
  }
  return F;
}

}  // namespace

VerificationReport check_chi_star(const GridConfig& grid, std::uint64_t seed, const std::vector<cplx>& zs) {
  grid.validate();
  VerificationReport r = grid_report("tz-commutation", seed, gridtol::kChiStar);
  Tally t{r};
  const GFunction f = fourier_bump(grid, 0.2, 0.5, 0.0, 2.0, 0.3);
  const GFunction g = fourier_bump(grid, 0.25, 0.6, -1.0, 1.0, -0.7);
  const double margin = 1e-3;
  for (cplx z : zs) {
    std::string tag = fmt("z=(%g,%g)", z.real(), z.imag());
    long guarded = 0;
    GFunction lhs = delta_power_apply(star(f, delta_power_apply(g, -z)).value, z);
    GFunction rhs = star(t_z_apply(f, z, margin, &guarded), g).value;
    t(rel_norm_err(lhs, rhs), gridtol::kChiStar, tag + " T_z intertwines");
    if (guarded) r.notes.push_back(tag + ": " + std::to_string(guarded) + " guarded nodes");

    GFunction a = delta_power_apply(star(f, g).value, z);
    GFunction b = star(delta_power_apply(f, z), g).value;
    t(rel_norm_err(a, b), gridtol::kChiStar, tag + " left multiplication by Delta^z");
  }
  for (size_t i = 0; i + 1 < zs.size(); ++i) {
    cplx z = zs[i], w = zs[i + 1];
    GFunction a = t_z_apply(t_z_apply(f, w, margin), z, margin);
    GFunction b = t_z_apply(f, z + w, margin);
    t(rel_norm_err(a, b), gridtol::kChiStar, fmt("T_z T_w = T_{z+w} at z=(%g,%g)", z.real(), z.imag()));
  }
  return r;
}

// ---- cross-layer 𝒰 ----

VerificationReport check_cross_layer_u(const GridConfig& grid, std::uint64_t seed) {
  grid.validate();
  VerificationReport r = grid_report("cross-layer-u", seed, gridtol::kCrossLayer);
  Tally t{r};
  const int n = grid.n;
  ModelPtr axb = make_model("axb");
  SymOp jjhat = compose(conj_J(axb), conj_Jhat(axb));
  SymOp u = compose({jjhat, ju_u_j(axb), jjhat});

  const auto fam = test_family();
  for (const auto& mem : fam) {
    GFunction F = fourier_v(sample(mem, grid));
    GFunction direct(grid, true);
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        int src = j - (m - n / 2);
        if (src >= 0 && src < n) direct.at(j, m) = F.at(src, m);
      }
    long off = 0;
    GFunction via = apply_symop_grid1(u, F, 1e-3, &off);
    t(rel_norm_err(via, direct) * direct.norm() / F.norm(), gridtol::kCrossLayer, mem.name);
    r.notes.push_back(mem.name + fmt(": |UF|/|F|=%.6f offgrid=%.0f", direct.norm() / F.norm(), off));
  }
  return r;
}

// ---- deformation ----

GridConfig deformation_grid() { return GridConfig{48, 12.0}; }

ProductFunction deformation_test_function(const GridConfig& grid) {
  grid.validate();
  const int n = grid.n;
  ProductFunction f{grid, std::vector<cplx>(static_cast<size_t>(n) * n), std::vector<cplx>(static_cast<size_t>(n) * n)};
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m) {
      double eta = grid.eta(j), xi = grid.xi(m);
      double d1 = (eta + 2.0) / 0.8;
      f.leg1[static_cast<size_t>(j) * n + m] = std::exp(-0.5 * d1 * d1) * bump(xi / 0.6);
      double d2 = (eta + 2.0) / 0.7, x2 = xi / 0.8;
      f.leg2[static_cast<size_t>(j) * n + m] = std::exp(-0.5 * (d2 * d2 + x2 * x2));
    }
  return f;
}

std::vector<DeformationGridRow> deformation_grid_rows(const std::vector<double>& thetas, const GridConfig& grid) {
  ModelPtr axb = make_model("axb");
  ProductFunction f = deformation_test_function(grid);
  std::vector<DeformationGridRow> rows;
  for (double th : thetas) {
    auto q = axb->scalar(th);
    if (!q) throw std::logic_error("axb has no scalar element");
    GridApplyResult g = apply_symop_grid(omega_q_direct(axb, *q), f);
    rows.push_back({th, g.norm_diff / g.norm_f, g.norm_tf / g.norm_f, g.offgrid_mass});
  }
  return rows;
}

VerificationReport check_deformation(const SamplePlan& plan, const DeformationTable& exact,
                                     const std::vector<DeformationGridRow>& grid_rows) {
  VerificationReport r = grid_report("deformation", plan.seed, gridtol::kDeformUnitarity);
  r.margin = plan.margin;
  Tally t{r};
  t.require(exact.strictly_decreasing, "exact map distance not strictly decreasing in theta");
  std::vector<double> norms;
  for (const auto& g : grid_rows) {
    norms.push_back(g.rel_diff);
    std::string tag = fmt("theta=%g", g.theta);
    t(std::abs(g.norm_ratio - 1.0), gridtol::kDeformUnitarity, tag + " grid unitarity");
    t.require(g.offgrid <= gridtol::kOffGridMass, tag + fmt(" off-grid mass %.3e", g.offgrid));
  }
  t.require(strictly_decreasing(norms), "grid norm |(Omega_theta - 1)f| not strictly decreasing in theta");
  for (size_t i = 0; i < exact.rows.size(); ++i) {
    const auto& e = exact.rows[i];
    double gn = i < grid_rows.size() ? grid_rows[i].rel_diff : NAN;
    r.notes.push_back(fmt("theta=%g map_sup=%.3e weight_sup=%.3e", e.theta, e.map_sup, e.weight_sup) +
                      fmt(" grid_norm=%.3e", gn));
  }
  return r;
}

void write_deformation_csv(std::ostream& out, const DeformationTable& exact,
                           const std::vector<DeformationGridRow>& grid_rows) {
  out << "theta,map_sup,weight_sup,grid_norm\n";
  char buf[200];
  for (size_t i = 0; i < exact.rows.size(); ++i) {
    const auto& e = exact.rows[i];
    double gn = i < grid_rows.size() ? grid_rows[i].rel_diff : NAN;
    std::snprintf(buf, sizeof buf, "%.6g,%.6e,%.6e,%.6e\n", e.theta, e.map_sup, e.weight_sup, gn);
    out << buf;
  }
}

}  // namespace qaff
