// hcnqos: topology generation, eta sweeps, validation, benchmarking and
// limit checks for FD/HD effective capacity on Matérn HCN deployments.

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcnqos/effective_capacity.hpp"
#include "hcnqos/errors.hpp"
#include "hcnqos/experiment.hpp"
#include "hcnqos/interference.hpp"
#include "hcnqos/results_io.hpp"
#include "hcnqos/scenario.hpp"
#include "hcnqos/units.hpp"

namespace {

using namespace hcnqos;

struct CommonArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> topology_seed;
  std::optional<std::uint64_t> trials;
  unsigned workers = 1;
  std::string out;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--scenario", args.scenario, "Scenario file (key = value)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Trial seed");
  cmd->add_option("--topology-seed", args.topology_seed, "Topology seed");
  cmd->add_option("--trials", args.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", args.workers, "Worker threads")->check(CLI::PositiveNumber);
}

ScenarioConfig load_config(const CommonArgs& args) {
  ScenarioConfig cfg = args.scenario.empty() ? ScenarioConfig{} : load_scenario(args.scenario);
  if (args.seed) cfg.trial_seed = *args.seed;
  if (args.topology_seed) cfg.topology_seed = *args.topology_seed;
  if (args.trials) cfg.trials = *args.trials;
  cfg.validate();
  return cfg;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

ModeSelection parse_modes(const std::string& s) {
  if (s == "hd") return ModeSelection::hd;
  if (s == "fd") return ModeSelection::fd;
  return ModeSelection::both;
}

int run_generate(const CommonArgs& args, const std::string& breakdown_path) {
  const ScenarioConfig cfg = load_config(args);
  const LinkScenario s = build_scenario(cfg);
  print_warnings(s.topology.warnings);
  std::cout << "cells: " << s.topology.cells.size() << "\n";
  if (s.topology.tagged_index) std::cout << "tagged: " << *s.topology.tagged_index << "\n";
  std::cout << "fingerprint: " << std::hex << fingerprint(s.topology) << std::dec << "\n";
  if (!args.out.empty()) {
    save_topology(s.topology, args.out);
    std::cout << "wrote " << args.out << "\n";
  }
  if (!breakdown_path.empty()) {
    const MeanInterferenceBreakdown b = total_mean_interference(s.topology, s.duplex);
    print_warnings(b.warnings);
    emit_results(b, breakdown_path);
    std::cout << "mean interference: " << b.total_w << " W\n";
  }
  return 0;
}

struct SweepArgs {
  double eta_from = -150.0;
  double eta_to = 0.0;
  double eta_step = 5.0;
  std::string mode = "both";
  std::optional<std::uint64_t> lb_samples;
};

int run_sweep(const CommonArgs& args, const SweepArgs& sw) {
  const ScenarioConfig cfg = load_config(args);
  const LinkScenario s = build_scenario(cfg);
  print_warnings(s.topology.warnings);

  SweepOptions opt;
  opt.eta_grid_db = make_eta_grid_db(sw.eta_from, sw.eta_to, sw.eta_step);
  opt.trials = cfg.trials;
  opt.lb_samples = sw.lb_samples.value_or(cfg.lb_samples);
  opt.seed = cfg.trial_seed;
  opt.workers = args.workers;
  opt.modes = parse_modes(sw.mode);
  const SweepResult r = sweep_eta(s, opt);
  print_warnings(r.warnings);

  const std::string out = args.out.empty() ? "sweep.csv" : args.out;
  emit_results(r, out);
  std::cout << "cells: " << r.fingerprint.cells << "  points: " << r.rows.size() << "\n";
  if (opt.modes == ModeSelection::both) {
    std::cout << "fd gain: " << fd_gain(r) << "\n";
    if (const auto x = find_crossover(r)) {
      std::cout << "crossover: " << *x << " dB\n";
    } else {
      std::cout << "crossover: none on grid\n";
    }
  }
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_validate(const CommonArgs& args) {
  const ScenarioConfig cfg = load_config(args);
  int failures = 0;
  auto report = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok    " : "FAIL  ") << what << "\n";
    if (!ok) ++failures;
  };

  std::cout << "taylor mean path loss vs quadrature (R = " << cfg.pico_radius_m << " m)\n";
  for (double ratio : {4.0, 5.0, 10.0}) {
    for (double alpha : {2.0, 3.0, 4.0}) {
      const double d = ratio * cfg.pico_radius_m;
      const double t = mean_pathloss_taylor(d, cfg.pico_radius_m, alpha);
      const double n = mean_pathloss_numeric(d, cfg.pico_radius_m, alpha);
      const double rel = (t - n) / n;
      std::ostringstream line;
      line << "d/R=" << ratio << " alpha=" << alpha << " rel_err=" << std::setprecision(3) << rel;
      report(std::abs(rel) < 0.01, line.str());
    }
  }

  std::cout << "lower bound ordering on the configured scenario\n";
  const LinkScenario s = build_scenario(cfg);
  print_warnings(s.topology.warnings);
  const std::vector<double> grid = {-150.0, -100.0, -80.0, -60.0, -40.0};
  std::vector<double> etas;
  for (double db : grid) etas.push_back(db_to_linear(db));
  MonteCarloOptions mc;
  mc.trials = cfg.trials;
  mc.seed = cfg.trial_seed;
  mc.workers = args.workers;
  const EcGrid exact = ec_exact_mc_grid(s, etas, mc);
  LowerBoundOptions lb;
  lb.signal_samples = cfg.lb_samples;
  lb.seed = cfg.trial_seed;
  lb.workers = args.workers;
  const LowerBoundGrid bound = ec_lower_bound_grid(s, etas, lb);
  print_warnings(bound.warnings);

  auto check = [&](const ECEstimate& e, const ECEstimate& b, const std::string& label) {
    const double sigma = std::hypot(e.std_error_bits, b.std_error_bits);
    std::ostringstream line;
    line << label << " exact=" << e.ec_bits << " lb=" << b.ec_bits;
    if (!b.bound_guaranteed) line << " (beta > 1, not guaranteed)";
    report(!b.bound_guaranteed || b.ec_bits <= e.ec_bits + 3.0 * sigma, line.str());
  };
  check(exact.hd, bound.estimates.hd, "hd");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::ostringstream label;
    label << "fd eta=" << grid[i] << "dB";
    check(exact.fd[i], bound.estimates.fd[i], label.str());
  }
  std::cout << failures << " failure(s)\n";
  return failures == 0 ? 0 : 1;
}

int run_bench(const CommonArgs& args, std::size_t cells, double target_se, unsigned repeats) {
  ScenarioConfig cfg = load_config(args);
  if (!(cfg.pico_density_per_km2 > 0.0)) throw ValidationError("bench needs pico_density_per_km2 > 0");
  LinkScenario s = build_scenario(cfg);
  s.topology = sample_topology_with_cell_count(cfg.pico_tier(), cfg.macro_bs(), cells, cfg.topology_seed);
  print_warnings(s.topology.warnings);

  BenchmarkOptions opt;
  opt.target_se_bits = target_se;
  opt.seed = cfg.trial_seed;
  opt.repeats = repeats;
  const BenchmarkReport r = benchmark_runtime(s, opt);
  const std::string out = args.out.empty() ? "bench.csv" : args.out;
  emit_results(r, out);
  std::cout << "M=" << r.cells << "  exact " << r.exact_seconds << " s (" << r.exact_trials
            << " trials)  lb " << r.lb_seconds << " s (" << r.lb_samples << " samples)  speedup "
            << r.speedup() << "x\n";
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_limits(const CommonArgs& args, double small_theta) {
  const ScenarioConfig cfg = load_config(args);
  const ThetaCheck tc = check_theta_constraint(cfg.qos());
  std::cout << "theta=" << cfg.theta << "  beta=" << cfg.qos().beta() << "  theta bound=" << tc.bound
            << (tc.ok ? "  ok" : "  VIOLATED") << "\n";

  LinkScenario s = build_scenario(cfg);
  print_warnings(s.topology.warnings);
  s.qos.theta = small_theta;
  MonteCarloOptions mc;
  mc.trials = cfg.trials;
  mc.seed = cfg.trial_seed;
  mc.workers = args.workers;
  const ECEstimate e = ec_exact_mc(s, mc);
  const double rel = std::abs(e.ec_bits - e.mean_rate_bits) / e.mean_rate_bits;
  std::cout << "theta=" << small_theta << "  ec=" << e.ec_bits << "  mean rate=" << e.mean_rate_bits
            << "  rel diff=" << rel << "\n";
  return tc.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Effective capacity of FD/HD heterogeneous cellular networks"};
  app.require_subcommand(1);

  CommonArgs common;
  std::string breakdown;
  SweepArgs sweep;
  std::size_t cells = 16;
  double target_se = 0.5;
  unsigned repeats = 3;
  double small_theta = 1e-6;

  CLI::App* gen = app.add_subcommand("generate", "Sample a topology and save it as JSON");
  add_common(gen, common);
  gen->add_option("--out", common.out, "Topology JSON path");
  gen->add_option("--breakdown", breakdown, "Write the per-interferer mean interference CSV here");

  CLI::App* sw = app.add_subcommand("sweep", "EC versus eta for HD and FD");
  add_common(sw, common);
  sw->add_option("--out", common.out, "CSV path")->capture_default_str();
  sw->add_option("--eta-from", sweep.eta_from, "First eta in dB")->capture_default_str();
  sw->add_option("--eta-to", sweep.eta_to, "Last eta in dB")->capture_default_str();
  sw->add_option("--eta-step", sweep.eta_step, "Step in dB")->capture_default_str();
  sw->add_option("--mode", sweep.mode, "Modes to evaluate")
      ->check(CLI::IsMember({"hd", "fd", "both"}))
      ->capture_default_str();
  sw->add_option("--lb-samples", sweep.lb_samples, "Lower-bound signal samples");

  CLI::App* val = app.add_subcommand("validate", "Taylor accuracy and lower-bound ordering checks");
  add_common(val, common);

  CLI::App* bench = app.add_subcommand("bench", "Exact versus lower-bound runtime at matched error");
  add_common(bench, common);
  bench->add_option("--out", common.out, "CSV path");
  bench->add_option("--cells", cells, "Number of small cells M")->capture_default_str();
  bench->add_option("--target-se", target_se, "EC standard error target (bits)")->capture_default_str();
  bench->add_option("--repeats", repeats, "Timed repetitions")->capture_default_str();

  CLI::App* lim = app.add_subcommand("limits", "theta constraint and small-theta limit");
  add_common(lim, common);
  lim->add_option("--theta", small_theta, "Small theta for the mean-rate limit")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) return run_generate(common, breakdown);
    if (*sw) return run_sweep(common, sweep);
    if (*val) return run_validate(common);
    if (*bench) return run_bench(common, cells, target_se, repeats);
    if (*lim) return run_limits(common, small_theta);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
