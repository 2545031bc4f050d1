#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hcnqos/channel.hpp"
#include "hcnqos/geometry.hpp"
#include "hcnqos/random.hpp"

namespace hcnqos {

/// Everything needed to evaluate the tagged UE's effective capacity on one
/// fixed BS realization.
struct LinkScenario {
  NetworkTopology topology;
  DuplexConfig duplex;
  QoSConfig qos;
  double noise_w = 1e-15;

  void validate() const;
};

enum class EcMethod { exact_mc, lower_bound_analytic, lower_bound_simulated };

const char* to_string(EcMethod method);

/// Effective capacity in bits per block with a delta-method standard error.
struct ECEstimate {
  double ec_bits = 0.0;
  double std_error_bits = 0.0;
  std::uint64_t trials = 0;
  double theta = 0.0;
  DuplexMode mode = DuplexMode::fd;
  EcMethod method = EcMethod::exact_mc;
  /// Sample mean of the per-block rate over the same draws (theta -> 0 limit).
  double mean_rate_bits = 0.0;
  /// False when the effective exponent exceeds 1 and Jensen ordering is not
  /// guaranteed for lower-bound estimates.
  bool bound_guaranteed = true;
  std::vector<std::string> notes;
};

/// a: RSI plus noise power. beta: exponent on (1 + SINR).
struct GParams {
  double a = 1.0;
  double beta = 0.0;
};

/// (1 + s / (I + a))^-beta
double g(double s, double interference, const GParams& params);

/// Closed-form d^2 g / dI^2 at fixed s.
double g_second_derivative(double s, double interference, const GParams& params);

/// True iff g is concave in I at every grid point: the closed-form second
/// derivative is <= 0 and, for s > 0, beta < 1 + 2 / SINR holds.
bool g_concavity_check(const GParams& params, double s, std::span<const double> interference_grid);

/// Test hooks that make the Monte Carlo degenerate.
struct TrialHooks {
  /// Every fading coefficient is 1.
  bool unit_fading = false;
  /// Every UE (tagged and interfering) sits at this offset from its centre.
  std::optional<PolarPoint> pinned_ue;
};

struct LinkSample {
  double signal_w = 0.0;
  double bs_interference_w = 0.0;
  double ue_interference_w = 0.0;
};

/// Draws one joint realization of UE positions and fading for a fixed
/// topology and returns the received powers at the tagged UE. Interfering
/// BSs are the macro and every non-tagged small cell; interfering UEs are one
/// per non-tagged small cell.
class TrialSampler {
 public:
  TrialSampler(const NetworkTopology& topology, double ue_tx_power_w, TrialHooks hooks = {});

  LinkSample draw(Rng& rng, TrialDraw* record = nullptr) const;

  std::size_t interfering_bs_count() const { return bss_.size(); }
  std::size_t interfering_ue_count() const { return ues_.size(); }

 private:
  struct Emitter {
    Point position;
    double power_w;
    double alpha;
  };
  struct UeCell {
    Point center;
    double radius_m;
    double alpha;
    std::size_t index;
  };

  double fading(Rng& rng) const;
  PolarPoint place(double radius_m, Rng& rng) const;

  Point tagged_center_{};
  double tagged_radius_m_ = 0.0;
  double tagged_power_w_ = 0.0;
  double tagged_alpha_ = 3.0;
  std::size_t tagged_index_ = 0;
  std::size_t cell_count_ = 0;
  double ue_power_w_ = 0.0;
  std::vector<Emitter> bss_;
  std::vector<UeCell> ues_;
  TrialHooks hooks_;
};

struct MonteCarloOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  TrialHooks hooks{};
};

/// HD estimate plus one FD estimate per eta, all from the same draws.
struct EcGrid {
  ECEstimate hd;
  std::vector<ECEstimate> fd;
};

/// Exact effective capacity by Monte Carlo over tagged-UE position,
/// interfering-UE positions and all fading, for scenario.duplex.mode.
ECEstimate ec_exact_mc(const LinkScenario& scenario, const MonteCarloOptions& options);

/// Exact estimates for HD and for FD at each linear eta in `etas`, sharing
/// every random draw across points (common random numbers).
EcGrid ec_exact_mc_grid(const LinkScenario& scenario, std::span<const double> etas,
                        const MonteCarloOptions& options);

enum class InterferenceSource { analytic, simulated };
enum class SignalExpectation { monte_carlo, quadrature };

struct LowerBoundOptions {
  std::uint64_t signal_samples = 100000;
  std::uint64_t seed = 1;
  InterferenceSource source = InterferenceSource::analytic;
  SignalExpectation expectation = SignalExpectation::monte_carlo;
  /// Trials used to estimate the mean interference when source is
  /// simulated; 0 means "same as signal_samples".
  std::uint64_t interference_trials = 0;
  unsigned workers = 1;
  TrialHooks hooks{};
};

struct LowerBoundGrid {
  EcGrid estimates;
  double mean_interference_hd_w = 0.0;
  double mean_interference_fd_w = 0.0;
  std::vector<std::string> warnings;
};

/// Lower bound obtained by replacing the random interference with its mean
/// and averaging only over the tagged UE's signal power.
ECEstimate ec_lower_bound(const LinkScenario& scenario, const LowerBoundOptions& options);

LowerBoundGrid ec_lower_bound_grid(const LinkScenario& scenario, std::span<const double> etas,
                                   const LowerBoundOptions& options);

struct ThetaCheck {
  bool ok = true;
  /// 1 / (T_f * BW * log2 e)
  double bound = 0.0;
};

ThetaCheck check_theta_constraint(const QoSConfig& qos);

}  // namespace hcnqos
