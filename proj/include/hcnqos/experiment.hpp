#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcnqos/effective_capacity.hpp"
#include "hcnqos/geometry.hpp"

namespace hcnqos {

enum class ModeSelection { hd, fd, both };

/// Grid from `from_db` to `to_db` inclusive (within rounding) in steps of `step_db`.
std::vector<double> make_eta_grid_db(double from_db, double to_db, double step_db);

struct SweepOptions {
  std::vector<double> eta_grid_db;
  std::uint64_t trials = 100000;
  std::uint64_t lb_samples = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  ModeSelection modes = ModeSelection::both;
};

struct SweepRow {
  double eta_db = 0.0;
  double eta = 0.0;
  ECEstimate hd_exact;
  ECEstimate fd_exact;
  ECEstimate hd_lb;
  ECEstimate fd_lb;
};

struct SweepFingerprint {
  std::uint64_t topology_hash = 0;
  std::uint64_t seed = 0;
  double theta = 0.0;
  double kappa = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t lb_samples = 0;
  std::size_t cells = 0;
};

struct SweepResult {
  std::vector<double> eta_grid;  // linear
  std::vector<SweepRow> rows;
  SweepFingerprint fingerprint;
  std::vector<std::string> warnings;
};

/// Exact and lower-bound EC for HD and FD at every grid point. All points
/// share the same draws; HD does not depend on eta and is evaluated once.
/// Columns excluded by `modes` are filled with NaN.
SweepResult sweep_eta(const LinkScenario& scenario, const SweepOptions& options);

/// max over the grid of ec_fd_exact / ec_hd_exact.
double fd_gain(const SweepResult& sweep);

/// eta (dB) where ec_fd_exact - ec_hd_exact first changes sign, linearly
/// interpolated in dB; empty when the sign never changes.
std::optional<double> find_crossover(const SweepResult& sweep);

/// Matérn deployment with exactly `cells` small cells at the tier density:
/// the macro radius is set so the expected count is `cells`, and the seed is
/// advanced from `seed` until a realization with the requested count and
/// a tagged cell that does not contain the macro BS appears.
NetworkTopology sample_topology_with_cell_count(const SmallCellTier& tier, const MacroBs& macro,
                                                std::size_t cells, std::uint64_t seed);

struct BenchmarkOptions {
  /// EC standard error both methods must reach, in bits per block.
  double target_se_bits = 0.5;
  std::uint64_t pilot_trials = 20000;
  std::uint64_t seed = 1;
  unsigned repeats = 3;
};

struct BenchmarkReport {
  double exact_seconds = 0.0;
  double lb_seconds = 0.0;
  std::uint64_t exact_trials = 0;
  std::uint64_t lb_samples = 0;
  std::size_t cells = 0;
  double target_se_bits = 0.0;
  double exact_se_bits = 0.0;
  double lb_se_bits = 0.0;
  double exact_ec_bits = 0.0;
  double lb_ec_bits = 0.0;
  unsigned workers = 1;

  double speedup() const { return exact_seconds / lb_seconds; }
};

/// Times exact Monte Carlo against the analytic lower bound, each sized from
/// a pilot run to reach the same EC standard error. Runs on one thread and
/// reports the median of `repeats` timings.
BenchmarkReport benchmark_runtime(const LinkScenario& scenario, const BenchmarkOptions& options);

}  // namespace hcnqos
