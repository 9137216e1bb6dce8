#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mlrr/bench.hpp"

namespace {

// Raw string holders for the shared flags; only flags the user actually
// passed override the config file, which overrides the defaults.
struct Flags {
  std::string model, kind, eps_grid, rounding, regime, out, config, params;
  int reps = 0, m_max = 0, threads = 0;
  std::int64_t seed = 0, calib_samples = 0;
  double budget_seconds = 0.0;
};

void add_common_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--model", f.model, "Model id: call|lookback|barrier|nested|synthetic");
  cmd->add_option("--kind", f.kind, "Estimator kind(s), comma separated: crude|multistep|mlmc|ml2r");
  cmd->add_option("--eps-grid", f.eps_grid, "Comma list of exponents k (eps = 2^-k) or eps values");
  cmd->add_option("--reps", f.reps, "Replications L per cell");
  cmd->add_option("--seed", f.seed, "Base seed");
  cmd->add_option("--m-max", f.m_max, "Upper bound of the refiner-root search");
  cmd->add_option("--rounding", f.rounding, "Depth rounding: floor|nearest|ceil");
  cmd->add_option("--regime", f.regime, "Cost regime: sum|max");
  cmd->add_option("--out", f.out, "Output file (default stdout)");
  cmd->add_option("--budget-seconds", f.budget_seconds, "Wall-clock cap for bench runs");
  cmd->add_option("--threads", f.threads, "Worker threads per run");
  cmd->add_option("--calib-samples", f.calib_samples, "Calibration sample size");
  cmd->add_option("--config", f.config, "key=value config file mirroring BenchConfig");
}

mlrr::KvDoc read_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return mlrr::KvDoc::parse(buf.str());
}

mlrr::BenchConfig build_config(const CLI::App* cmd, const Flags& f) {
  mlrr::BenchConfig cfg;
  if (!f.config.empty()) cfg.apply(read_kv_file(f.config));
  mlrr::KvDoc overlay;
  auto passed = [&](const std::string& name) { return cmd->count(name) > 0; };
  if (passed("--model")) overlay.set("model", f.model);
  if (passed("--kind")) overlay.set("kind", f.kind);
  if (passed("--eps-grid")) overlay.set("eps_grid", f.eps_grid);
  if (passed("--reps")) overlay.set_int("reps", f.reps);
  if (passed("--seed")) overlay.set_int("seed", f.seed);
  if (passed("--m-max")) overlay.set_int("m_max", f.m_max);
  if (passed("--rounding")) overlay.set("rounding", f.rounding);
  if (passed("--regime")) overlay.set("regime", f.regime);
  if (passed("--out")) overlay.set("out", f.out);
  if (passed("--budget-seconds")) overlay.set_real("budget_seconds", f.budget_seconds);
  if (passed("--threads")) overlay.set_int("threads", f.threads);
  if (passed("--calib-samples")) overlay.set_int("calib_samples", f.calib_samples);
  cfg.apply(overlay);
  return cfg;
}

// Structural parameters for planning: the model's published calibration,
// optionally overridden field by field from a key=value file.
mlrr::StructuralParams planning_params(const mlrr::BenchConfig& cfg,
                                       const std::string& params_file) {
  mlrr::StructuralParams p = mlrr::resolve_model(cfg.model).frozen;
  if (!params_file.empty()) {
    const mlrr::KvDoc doc = read_kv_file(params_file);
    for (const auto& [key, value] : doc.entries) {
      const double v = mlrr::string_to_real(value);
      if (key == "alpha") p.alpha = v;
      else if (key == "beta") p.beta = v;
      else if (key == "V1" || key == "V1_hat") p.V1 = v;
      else if (key == "var" || key == "var_hat") p.var_Y0 = v;
      else if (key == "h_max") p.h_max = v;
      else if (key == "c1") p.c1 = v;
      else if (key == "c_tilde") p.c_tilde = v;
      else if (key != "model" && key != "theta" && key != "probe_h" &&
               key != "samples")
        throw std::runtime_error("unknown params key: " + key);
    }
  }
  return p;
}

int with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
  } else {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    fn(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multilevel Richardson-Romberg Monte Carlo harness"};
  app.require_subcommand(1);

  Flags f;
  std::string compare_a, compare_b;

  CLI::App* calibrate = app.add_subcommand("calibrate", "Estimate V1 and var(Y0) for a model");
  add_common_options(calibrate, f);

  CLI::App* plan = app.add_subcommand("plan", "Emit the planned (R, M, h, q, N) table");
  add_common_options(plan, f);
  plan->add_option("--params", f.params, "key=value structural-parameter overrides");

  CLI::App* run = app.add_subcommand("run", "Execute one plan and report the estimate");
  add_common_options(run, f);
  run->add_option("--params", f.params, "key=value structural-parameter overrides");

  CLI::App* bench = app.add_subcommand("bench", "Replicated RMSE benchmark over an epsilon grid");
  add_common_options(bench, f);

  CLI::App* compare = app.add_subcommand("compare", "Ratio table of two bench CSVs");
  compare->add_option("a", compare_a, "First results CSV")->required();
  compare->add_option("b", compare_b, "Second results CSV")->required();
  compare->add_option("--out", f.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (calibrate->parsed()) {
      const mlrr::BenchConfig cfg = build_config(calibrate, f);
      return with_output(cfg.out, [&](std::ostream& os) { mlrr::cmd_calibrate(cfg, os); });
    }
    if (plan->parsed()) {
      const mlrr::BenchConfig cfg = build_config(plan, f);
      const mlrr::StructuralParams p = planning_params(cfg, f.params);
      return with_output(cfg.out, [&](std::ostream& os) { mlrr::cmd_plan(cfg, p, os); });
    }
    if (run->parsed()) {
      const mlrr::BenchConfig cfg = build_config(run, f);
      const mlrr::StructuralParams p = planning_params(cfg, f.params);
      const mlrr::ModelSetup setup = mlrr::resolve_model(cfg.model);
      const mlrr::CostRegime regime = cfg.regime.value_or(setup.regime);
      const double eps = std::pow(2.0, -cfg.k_grid.front());
      const mlrr::Plan pl = mlrr::make_plan(cfg.kinds.front(), eps, p, regime,
                                            cfg.rounding, {}, cfg.M_max);
      const mlrr::RunResult res =
          mlrr::run(pl, *setup.sampler, cfg.seed, cfg.threads);
      mlrr::KvDoc doc = mlrr::plan_to_kv(pl);
      doc.set_real("estimate", res.estimate);
      doc.set_real("nu_bar", res.nu_bar);
      doc.set_real("cost_units", res.cost_units);
      doc.set_real("wall_time", res.wall_time);
      doc.set_real("reference", setup.reference);
      return with_output(cfg.out, [&](std::ostream& os) { os << doc.dump(); });
    }
    if (bench->parsed()) {
      const mlrr::BenchConfig cfg = build_config(bench, f);
      if (cfg.out.empty()) {
        std::ostringstream derived;
        mlrr::cmd_bench(cfg, std::cout, &derived);
        std::cout << "# derived series\n" << derived.str();
      } else {
        std::ofstream out(cfg.out), der(cfg.out + ".derived.csv");
        if (!out || !der) throw std::runtime_error("cannot open " + cfg.out);
        mlrr::cmd_bench(cfg, out, &der);
      }
      return 0;
    }
    if (compare->parsed()) {
      std::ifstream ia(compare_a), ib(compare_b);
      if (!ia) throw std::runtime_error("cannot open " + compare_a);
      if (!ib) throw std::runtime_error("cannot open " + compare_b);
      std::ostringstream sa, sb;
      sa << ia.rdbuf();
      sb << ib.rdbuf();
      const std::string table = mlrr::cmd_compare(sa.str(), sb.str());
      return with_output(f.out, [&](std::ostream& os) { os << table; });
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
