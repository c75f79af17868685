#include "qaff/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "qaff/matchedpair.hpp"

namespace qaff {

const std::vector<SuiteInfo>& list_suites() {
  static const std::vector<SuiteInfo> s = {
      {1, "orbit", "dual orbit round trips and model invariants"},
      {2, "cocycle", "dual 2-cocycle identity for Omega, coproduct and lambda checks"},
      {3, "pentagon", "pentagon equation for W-hat and W-hat_Omega"},
      {4, "multunitary", "closed W-hat_Omega against its seven-factor composition"},
      {5, "bar", "Omega-bar = (J x J) Omega_21 (J x J)"},
      {6, "cohomologous", "Omega_q direct vs composed construction"},
      {7, "stachura", "Stachura cocycle against the transported Omega-bar, generator flow oracle", true},
      {8, "matchedpair", "pentagonal map v and matched pair reconstruction"},
      {9, "selfdual", "self-duality of the matched pair under c = (-id, xi0)"},
      {10, "decompose", "g = h1(q1) h2(q2) factorization in Q x| V-hat"},
      {11, "kn-unitarity", "Kohn-Nirenberg quantization is unitary onto Hilbert-Schmidt", true, true},
      {12, "star", "twisted convolution: homomorphism and associativity", true, true},
      {13, "equivariance", "Op(lambda_g f) = pi(g) Op(f) pi(g)*", true, true},
      {14, "duflomoore", "Duflo-Moore orthogonality relation", true, true},
      {15, "chistar", "T_z commutes with the star product up to Delta^z", true, true},
      {16, "deformation", "Omega_theta -> 1 as theta -> 0, exact and on the grid", true, true},
      {17, "crosslayer", "U by index shift vs the JJ-hat JU*UJ JJ-hat point map", true, true},
  };
  return s;
}

const SuiteInfo* find_suite(const std::string& name) {
  for (const auto& s : list_suites())
    if (s.name == name) return &s;
  return nullptr;
}

bool SuiteRun::passed() const { return report.failed == 0 && !starved(); }

bool SuiteRun::starved() const {
  return std::any_of(parts.begin(), parts.end(), [](const VerificationReport& r) { return r.starved(); });
}

std::vector<std::string> expand_suites(const std::string& list) {
  std::vector<bool> pick(list_suites().size(), false);
  std::string tok;
  auto take = [&](const std::string& t) {
    if (t.empty()) return;
    bool hit = false;
    for (size_t i = 0; i < list_suites().size(); ++i) {
      const auto& s = list_suites()[i];
      if (t == "all" || t == s.name || (t == "exact" && !s.grid) || (t == "grid" && s.grid)) {
        pick[i] = true;
        hit = true;
      }
    }
    if (!hit) throw ConfigError("unknown suite: " + t);
  };
  for (char c : list) {
    if (c == ',') {
      take(tok);
      tok.clear();
    } else if (c != ' ') {
      tok += c;
    }
  }
  take(tok);
  std::vector<std::string> out;
  for (size_t i = 0; i < pick.size(); ++i)
    if (pick[i]) out.push_back(list_suites()[i].name);
  if (out.empty()) throw ConfigError("no suites selected");
  return out;
}

namespace {

VerificationReport flow_oracle_report(const SamplePlan& plan) {
  FlowOracleResult fo = stachura_flow_oracle(64);
  VerificationReport r;
  r.identity = "stachura-flow-oracle";
  r.model = "axb";
  r.seed = plan.seed;
  r.count = 1;
  r.valid = 1;
  r.tolerance = 1e-3;
  r.worst_map_err = fo.rel_err;
  r.min_valid_fraction = 1.0;
  char buf[96];
  std::snprintf(buf, sizeof buf, "relative L2 error %.3e at n=%d", fo.rel_err, fo.n);
  r.notes.push_back(buf);
  if (!(fo.rel_err <= 1e-3)) r.record_failure(0, buf);
  return r;
}

}  // namespace

std::optional<std::string> suite_rejects(const SuiteInfo& s, const DualOrbitModel& m) {
  if (s.axb_only && m.name() != "axb") return "suite " + s.name + " runs on axb only";
  if (m.negative_instance() && s.name != "orbit")
    return "model " + m.name() + " violates the dual orbit condition; only the orbit suite applies";
  if (s.name == "selfdual" && !m.minus_identity()) return "model " + m.name() + " has no -id in Q";
  return std::nullopt;
}

std::vector<std::string> expand_suites(const std::string& list, const std::string& model) {
  ModelPtr m;
  try {
    m = make_model(model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  std::vector<std::string> out;
  std::string tok;
  std::vector<std::string> explicit_names;
  for (char c : list + ",") {
    if (c == ',') {
      if (find_suite(tok)) explicit_names.push_back(tok);
      tok.clear();
    } else if (c != ' ') {
      tok += c;
    }
  }
  for (const auto& name : expand_suites(list)) {
    const SuiteInfo& s = *find_suite(name);
    auto why = suite_rejects(s, *m);
    bool named = std::find(explicit_names.begin(), explicit_names.end(), name) != explicit_names.end();
    if (why && named) throw ConfigError(*why);
    if (!why) out.push_back(name);
  }
  if (out.empty()) throw ConfigError("no applicable suites for model " + model);
  return out;
}

SuiteRun run_suite(const std::string& suite, const std::string& model_name, const SuiteOptions& opt) {
  const SuiteInfo* info = find_suite(suite);
  if (!info) throw ConfigError("unknown suite: " + suite);
  ModelPtr m;
  try {
    m = make_model(model_name);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (auto why = suite_rejects(*info, *m)) throw ConfigError(*why);
  if (opt.grid_n) GridConfig{*opt.grid_n, opt.L}.validate();

  const SamplePlan& plan = opt.plan;
  const std::uint64_t st = static_cast<std::uint64_t>(info->index) << 8;
  auto grid = [&](int dflt) {
    GridConfig g{opt.grid_n.value_or(dflt), opt.L};
    g.validate();
    return g;
  };

  SuiteRun run;
  auto add = [&](VerificationReport r) { run.parts.push_back(std::move(r)); };
  auto t0 = std::chrono::steady_clock::now();

  switch (info->index) {
    case 1:
      add(check_orbit_condition(*m, plan));
      if (!m->negative_instance()) add(check_model_invariants(*m, plan));
      break;
    case 2:
      add(check_cocycle(m, plan, st));
      add(check_lambda_rep(m, plan, st + 1));
      break;
    case 3:
      add(check_pentagon(m, what(m), "pentagon-what", plan, st));
      add(check_pentagon(m, what_omega_closed(m), "pentagon-what-omega", plan, st + 1));
      break;
    case 4:
      add(check_multunitary(m, plan, st));
      break;
    case 5:
      add(check_bar_relation(m, plan, st));
      break;
    case 6:
      add(check_cohomologous(m, cohomologous_q_samples(m, derive_seed(plan.seed, st), 10), plan, st));
      break;
    case 7:
      add(check_stachura(plan, st));
      add(flow_oracle_report(plan));
      break;
    case 8:
      add(check_v_inverse(m, plan, st));
      add(check_reconstruction(m, plan, st + 1));
      add(check_35b(m, plan, st + 2));
      add(check_h_homomorphisms(m, plan, st + 3));
      add(check_pentagon_maps(m, plan, st + 4));
      break;
    case 9:
      add(selfdual_check(m, plan, st));
      break;
    case 10:
      add(check_decompose(m, plan, st));
      break;
    case 11:
    case 12: {
      run.convergence = convergence_rows(default_grid_sizes(), opt.L);
      if (info->index == 11) {
        add(check_grid_basics(grid(256), plan.seed));
        add(check_kn_unitarity(run.convergence, plan.seed));
      } else {
        add(check_star(run.convergence, plan.seed));
      }
      break;
    }
    case 13:
      add(check_equivariance(grid(256), plan.seed));
      break;
    case 14:
      add(check_duflo_moore(grid(256), plan.seed));
      break;
    case 15:
      add(check_chi_star(grid(128), plan.seed, default_chi_z()));
      break;
    case 16: {
      run.deformation = omega_theta_limit(m, default_thetas(), plan, 0.5, st);
      run.deformation_grid = deformation_grid_rows(default_thetas(), deformation_grid());
      add(check_deformation(plan, *run.deformation, run.deformation_grid));
      break;
    }
    case 17:
      add(check_cross_layer_u(grid(128), plan.seed));
      break;
  }
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  VerificationReport& r = run.report;
  r.identity = info->name;
  r.model = m->name();
  r.seed = plan.seed;
  r.margin = info->grid ? 0.0 : plan.margin;
  r.tolerance = info->grid ? 0.0 : plan.tolerance;
  r.min_valid_fraction = 0.0;  // starvation is judged per part
  long offset = 0;
  for (const auto& p : run.parts) {
    VerificationReport q = p;
    if (q.first_fail) {
      q.first_fail->index += offset;
      q.first_fail->detail = p.identity + ": " + q.first_fail->detail;
    }
    r.merge(q);
    r.count += p.count;
    if (info->grid) r.tolerance = std::max(r.tolerance, p.tolerance);
    for (const auto& n : p.notes) r.notes.push_back(p.identity + ": " + n);
    if (p.starved()) r.notes.push_back(p.identity + ": starved");
    offset += p.count;
  }
  r.millis = ms;
  return run;
}

}  // namespace qaff
