#include "hcnqos/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "hcnqos/errors.hpp"
#include "hcnqos/units.hpp"

namespace hcnqos {

namespace {

ECEstimate missing(DuplexMode mode, EcMethod method, double theta) {
  ECEstimate e;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  e.ec_bits = nan;
  e.std_error_bits = nan;
  e.mean_rate_bits = nan;
  e.mode = mode;
  e.method = method;
  e.theta = theta;
  return e;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::uint64_t trials_for(double se_bits, std::uint64_t pilot, double target) {
  // Per-trial standard deviation scales out as 1/sqrt(n).
  const double sd = se_bits * std::sqrt(static_cast<double>(pilot));
  const double n = std::ceil(sd * sd / (target * target));
  return std::max<std::uint64_t>(static_cast<std::uint64_t>(n), 1000);
}

}  // namespace

std::vector<double> make_eta_grid_db(double from_db, double to_db, double step_db) {
  if (!(step_db > 0.0)) throw ValidationError("eta step must be > 0 dB");
  if (!(from_db <= to_db)) throw ValidationError("eta grid must satisfy from <= to");
  if (to_db > 0.0) throw ValidationError("eta must be <= 0 dB (linear eta <= 1)");
  const auto n = static_cast<std::size_t>(std::floor((to_db - from_db) / step_db + 1e-9)) + 1;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = from_db + static_cast<double>(i) * step_db;
  return grid;
}

SweepResult sweep_eta(const LinkScenario& scenario, const SweepOptions& options) {
  if (options.eta_grid_db.empty()) throw ValidationError("eta grid must not be empty");
  for (std::size_t i = 1; i < options.eta_grid_db.size(); ++i) {
    if (!(options.eta_grid_db[i] > options.eta_grid_db[i - 1])) {
      throw ValidationError("eta grid must be strictly increasing");
    }
  }
  scenario.validate();

  SweepResult out;
  out.eta_grid.reserve(options.eta_grid_db.size());
  for (double db : options.eta_grid_db) out.eta_grid.push_back(db_to_linear(db));

  const bool want_hd = options.modes != ModeSelection::fd;
  const bool want_fd = options.modes != ModeSelection::hd;
  const std::span<const double> etas =
      want_fd ? std::span<const double>(out.eta_grid) : std::span<const double>();

  MonteCarloOptions mc;
  mc.trials = options.trials;
  mc.seed = options.seed;
  mc.workers = options.workers;
  const EcGrid exact = ec_exact_mc_grid(scenario, etas, mc);

  LowerBoundOptions lb;
  lb.signal_samples = options.lb_samples;
  lb.seed = options.seed;
  lb.workers = options.workers;
  lb.source = InterferenceSource::analytic;
  const LowerBoundGrid bound = ec_lower_bound_grid(scenario, etas, lb);
  out.warnings = bound.warnings;

  const double theta = scenario.qos.theta;
  for (std::size_t i = 0; i < out.eta_grid.size(); ++i) {
    SweepRow row;
    row.eta_db = options.eta_grid_db[i];
    row.eta = out.eta_grid[i];
    row.hd_exact = want_hd ? exact.hd : missing(DuplexMode::hd, EcMethod::exact_mc, theta);
    row.hd_lb = want_hd ? bound.estimates.hd
                        : missing(DuplexMode::hd, EcMethod::lower_bound_analytic, theta);
    row.fd_exact = want_fd ? exact.fd[i] : missing(DuplexMode::fd, EcMethod::exact_mc, theta);
    row.fd_lb = want_fd ? bound.estimates.fd[i]
                        : missing(DuplexMode::fd, EcMethod::lower_bound_analytic, theta);
    out.rows.push_back(std::move(row));
  }

  out.fingerprint.topology_hash = fingerprint(scenario.topology);
  out.fingerprint.seed = options.seed;
  out.fingerprint.theta = theta;
  out.fingerprint.kappa = scenario.duplex.kappa;
  out.fingerprint.trials = options.trials;
  out.fingerprint.lb_samples = options.lb_samples;
  out.fingerprint.cells = scenario.topology.cells.size();
  return out;
}

double fd_gain(const SweepResult& sweep) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const SweepRow& r : sweep.rows) {
    const double ratio = r.fd_exact.ec_bits / r.hd_exact.ec_bits;
    if (std::isnan(ratio)) continue;
    if (std::isnan(best) || ratio > best) best = ratio;
  }
  return best;
}

std::optional<double> find_crossover(const SweepResult& sweep) {
  const auto& rows = sweep.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double a = rows[i].fd_exact.ec_bits - rows[i].hd_exact.ec_bits;
    if (a == 0.0) return rows[i].eta_db;
    if (i + 1 == rows.size()) break;
    const double b = rows[i + 1].fd_exact.ec_bits - rows[i + 1].hd_exact.ec_bits;
    if (std::isnan(a) || std::isnan(b)) continue;
    if ((a > 0.0) != (b > 0.0) && b != 0.0) {
      const double x0 = rows[i].eta_db;
      const double x1 = rows[i + 1].eta_db;
      return x0 + (x1 - x0) * a / (a - b);
    }
  }
  return std::nullopt;
}

NetworkTopology sample_topology_with_cell_count(const SmallCellTier& tier, const MacroBs& macro,
                                                std::size_t cells, std::uint64_t seed) {
  if (cells == 0) throw ValidationError("cell count must be >= 1");
  if (!(tier.density_per_m2 > 0.0)) throw ValidationError("density must be > 0");
  Region region;
  region.macro_radius_m = std::sqrt(static_cast<double>(cells) / (tier.density_per_m2 * std::numbers::pi));
  region.macro_center = macro.position;
  // Keep the expected count at `cells` once edge effects are included.
  const MaternIntensity intensity = matern_parent_intensity(region, tier);
  if (intensity.saturated) throw ValidationError("tier density exceeds the hard-core packing limit");

  constexpr std::uint64_t kMaxAttempts = 100000;
  for (std::uint64_t k = 0; k < kMaxAttempts; ++k) {
    NetworkTopology t = sample_matern_hcpp(region, tier, macro, seed + k);
    if (t.cells.size() != cells) continue;
    const SmallCell& tagged = t.tagged();
    if (distance(tagged.center, macro.position) > tagged.radius_m) return t;
  }
  throw Error("no realization with " + std::to_string(cells) + " cells found");
}

BenchmarkReport benchmark_runtime(const LinkScenario& scenario, const BenchmarkOptions& options) {
  if (!(options.target_se_bits > 0.0)) throw ValidationError("target standard error must be > 0");
  if (options.repeats == 0) throw ValidationError("repeats must be >= 1");
  scenario.validate();

  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  MonteCarloOptions mc;
  mc.trials = options.pilot_trials;
  mc.seed = options.seed;
  const ECEstimate exact_pilot = ec_exact_mc(scenario, mc);

  LowerBoundOptions lb;
  lb.signal_samples = options.pilot_trials;
  lb.seed = options.seed;
  lb.source = InterferenceSource::analytic;
  const ECEstimate lb_pilot = ec_lower_bound(scenario, lb);

  BenchmarkReport rep;
  rep.cells = scenario.topology.cells.size();
  rep.target_se_bits = options.target_se_bits;
  rep.exact_trials = trials_for(exact_pilot.std_error_bits, options.pilot_trials, options.target_se_bits);
  rep.lb_samples = trials_for(lb_pilot.std_error_bits, options.pilot_trials, options.target_se_bits);

  mc.trials = rep.exact_trials;
  lb.signal_samples = rep.lb_samples;
  std::vector<double> exact_times, lb_times;
  for (unsigned r = 0; r < options.repeats; ++r) {
    auto t0 = Clock::now();
    const ECEstimate e = ec_exact_mc(scenario, mc);
    exact_times.push_back(seconds_since(t0));
    rep.exact_se_bits = e.std_error_bits;
    rep.exact_ec_bits = e.ec_bits;

    t0 = Clock::now();
    const ECEstimate b = ec_lower_bound(scenario, lb);
    lb_times.push_back(seconds_since(t0));
    rep.lb_se_bits = b.std_error_bits;
    rep.lb_ec_bits = b.ec_bits;
  }
  rep.exact_seconds = median(exact_times);
  rep.lb_seconds = median(lb_times);
  return rep;
}

}  // namespace hcnqos
