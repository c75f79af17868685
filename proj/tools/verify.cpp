// verify: batch runner for the identity suites.
//
//   verify --config run.json [--model M] [--suite S[,S...]] [--seed N] [--samples N]
//          [--grid-n N] [--out reports.jsonl] [--timing]
//   verify --list-suites | --list-models
//
// Exit status: 0 all suites pass, 1 a suite failed, 2 config error,
// 3 a suite ran out of valid (non-singular) samples.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "qaff/suites.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kConfig = 2, kStarved = 3;

struct RunConfig {
  std::string model = "axb";
  std::string suites = "exact";
  qaff::SamplePlan plan;
  std::optional<int> grid_n;
  double L = 12.0;
  std::string out;  // empty: stdout, no CSV tables
  bool timing = false;
};

const char* kTablesHelp = R"(CSV side tables, written next to --out as <stem>.<table>.csv:
  deformation.csv   theta,map_sup,weight_sup,grid_norm
                    map_sup/weight_sup: sup over samples of dist(sigma(x), x) and |w(x) - 1| for Omega_theta;
                    grid_norm: |(Omega_theta - 1)f| / |f| on the deformation grid
  convergence.csv   N,kn_err,star_hom,star_assoc,star_dropped
                    kn_err: max over the test family of | |Op(f)|_HS / |f| - 1 |;
                    star_hom: max |Op(f*g) - Op(f)Op(g)|_HS / (|f||g|);
                    star_assoc: max |(f*g)*k - f*(g*k)| / (|f||g||k|);
                    star_dropped: star-product terms whose shifted node left the grid)";

void apply_json(RunConfig& c, const json& j) {
  static const std::set<std::string> known = {"model", "suite", "suites", "seed", "samples", "margin",
                                              "tolerance", "grid", "out", "timing"};
  if (!j.is_object()) throw qaff::ConfigError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw qaff::ConfigError("unknown config key: " + it.key());
  if (j.contains("model")) c.model = j.at("model").get<std::string>();
  if (j.contains("suite")) c.suites = j.at("suite").get<std::string>();
  if (j.contains("suites")) {
    std::string s;
    for (const auto& x : j.at("suites")) s += (s.empty() ? "" : ",") + x.get<std::string>();
    c.suites = s;
  }
  if (j.contains("seed")) c.plan.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("samples")) c.plan.count = j.at("samples").get<long>();
  if (j.contains("margin")) c.plan.margin = j.at("margin").get<double>();
  if (j.contains("tolerance")) c.plan.tolerance = j.at("tolerance").get<double>();
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    for (auto it = g.begin(); it != g.end(); ++it)
      if (it.key() != "N_v" && it.key() != "L_v" && it.key() != "family")
        throw qaff::ConfigError("unknown grid key: " + it.key());
    if (g.contains("N_v")) c.grid_n = g.at("N_v").get<int>();
    if (g.contains("L_v")) c.L = g.at("L_v").get<double>();
    if (g.contains("family") && g.at("family").get<std::string>() != "default")
      throw qaff::ConfigError("only the default test family is available");
  }
  if (j.contains("out")) c.out = j.at("out").get<std::string>();
  if (j.contains("timing")) c.timing = j.at("timing").get<bool>();
}

void validate(const RunConfig& c) {
  if (c.plan.count <= 0) throw qaff::ConfigError("samples must be positive");
  if (!(c.plan.margin >= 0.0)) throw qaff::ConfigError("margin must be non-negative");
  if (!(c.plan.tolerance > 0.0)) throw qaff::ConfigError("tolerance must be positive");
  if (!(c.L > 0.0)) throw qaff::ConfigError("L_v must be positive");
  if (c.grid_n) qaff::GridConfig{*c.grid_n, c.L}.validate();
}

fs::path table_path(const std::string& out, const std::string& table) {
  fs::path p(out);
  return p.parent_path() / (p.stem().string() + "." + table + ".csv");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify identities of the dual-orbit quantization on sampled points and grids"};
  app.footer(kTablesHelp);
  std::string config_path, model, suite, out;
  std::optional<std::uint64_t> seed;
  std::optional<long> samples;
  std::optional<int> grid_n;
  bool list_suites = false, list_models = false, timing = false;
  app.add_option("--config", config_path, "JSON run config");
  app.add_option("--model", model, "model name (see --list-models)");
  app.add_option("--suite", suite, "comma-separated suite names, or exact / grid / all");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--samples", samples, "samples per sampled identity");
  app.add_option("--grid-n", grid_n, "grid size N_v for single-grid suites");
  app.add_option("--out", out, "JSON-lines report path (default stdout)");
  app.add_flag("--timing", timing, "write wall time into millis (otherwise null)");
  app.add_flag("--list-suites", list_suites, "print suites and exit");
  app.add_flag("--list-models", list_models, "print models and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  if (list_suites || list_models) {
    if (list_suites)
      for (const auto& s : qaff::list_suites())
        std::cout << s.name << "\t" << s.description << (s.axb_only ? " [axb]" : "") << "\n";
    if (list_models)
      for (const auto& n : qaff::model_names()) std::cout << n << "\t" << qaff::make_model(n)->description() << "\n";
    return kPass;
  }

  RunConfig cfg;
  std::vector<std::string> names;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw qaff::ConfigError("cannot read config: " + config_path);
      json j;
      try {
        j = json::parse(in);
      } catch (const json::exception& e) {
        throw qaff::ConfigError(std::string("config parse error: ") + e.what());
      }
      apply_json(cfg, j);
    }
    if (!model.empty()) cfg.model = model;
    if (!suite.empty()) cfg.suites = suite;
    if (seed) cfg.plan.seed = *seed;
    if (samples) cfg.plan.count = *samples;
    if (grid_n) cfg.grid_n = *grid_n;
    if (!out.empty()) cfg.out = out;
    if (timing) cfg.timing = true;
    validate(cfg);
    names = qaff::expand_suites(cfg.suites, cfg.model);
  } catch (const qaff::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  std::ofstream file;
  if (!cfg.out.empty()) {
    std::error_code ec;
    auto parent = std::filesystem::path(cfg.out).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    file.open(cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "config error: cannot write " << cfg.out << "\n";
      return kConfig;
    }
  }
  std::ostream& sink = cfg.out.empty() ? std::cout : file;

  qaff::SuiteOptions opt;
  opt.plan = cfg.plan;
  opt.grid_n = cfg.grid_n;
  opt.L = cfg.L;

  bool failed = false, starved = false;
  std::vector<qaff::ConvergenceRow> convergence;
  std::optional<qaff::DeformationTable> deformation;
  std::vector<qaff::DeformationGridRow> deformation_grid;
  for (const auto& name : names) {
    qaff::SuiteRun run;
    try {
      run = qaff::run_suite(name, cfg.model, opt);
    } catch (const qaff::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kConfig;
    }
    sink << run.report.to_json_line(cfg.timing) << "\n";
    sink.flush();
    std::cerr << (run.passed() ? "PASS " : (run.starved() ? "STARVED " : "FAIL ")) << name << "\n";
    failed = failed || run.report.failed > 0;
    starved = starved || run.starved();
    if (!run.convergence.empty() && convergence.empty()) convergence = run.convergence;
    if (run.deformation) {
      deformation = run.deformation;
      deformation_grid = run.deformation_grid;
    }
  }

  if (!cfg.out.empty()) {
    if (!convergence.empty()) {
      std::ofstream c(table_path(cfg.out, "convergence"), std::ios::binary | std::ios::trunc);
      qaff::write_convergence_csv(c, convergence);
    }
    if (deformation) {
      std::ofstream d(table_path(cfg.out, "deformation"), std::ios::binary | std::ios::trunc);
      qaff::write_deformation_csv(d, *deformation, deformation_grid);
    }
  }
  if (starved) return kStarved;
  return failed ? kFail : kPass;
}
