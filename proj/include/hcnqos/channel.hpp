#pragma once

#include <cmath>

#include "hcnqos/random.hpp"

namespace hcnqos {

enum class DuplexMode { hd, fd };

const char* to_string(DuplexMode mode);

/// Self-interference cancellation model: residual power eta * P^kappa.
struct DuplexConfig {
  DuplexMode mode = DuplexMode::fd;
  double eta = 0.0;
  double kappa = 1.0;
  double ue_tx_power_w = 0.0;

  void validate() const;
};

/// Received powers at the tagged UE, all in watts.
struct LinkBudget {
  double signal_w = 0.0;
  double bs_interference_w = 0.0;
  double ue_interference_w = 0.0;
  double rsi_w = 0.0;
  double noise_w = 0.0;

  void validate() const;
};

/// QoS exponent theta (1/bit) and the resource block dimensions.
struct QoSConfig {
  double theta = 1e-3;
  double frame_time_s = 0.5e-3;
  double bandwidth_hz = 180e3;

  /// Bits carried per block per nat of ln(1 + SINR).
  double bits_per_nat() const;
  /// theta * T_f * BW * log2(e); exponent applied to (1 + SINR).
  double beta() const;
  void validate() const;
};

/// Near-field clamp distance for path loss.
inline constexpr double kNearFieldDistance_m = 1.0;

/// max(distance, 1 m)^-alpha
double path_loss_gain(double distance_m, double alpha);

/// Same as path_loss_gain but takes the squared distance, avoiding a sqrt.
inline double path_loss_gain_sq(double distance_sq, double alpha) {
  constexpr double kMinSq = kNearFieldDistance_m * kNearFieldDistance_m;
  return std::pow(distance_sq < kMinSq ? kMinSq : distance_sq, -0.5 * alpha);
}

/// Rayleigh power fading, h ~ Exp(1).
double sample_fading(Rng& rng);

/// eta * P^kappa in FD, 0 in HD.
double rsi_power(double tx_power_w, const DuplexConfig& duplex);

double sinr(const LinkBudget& link, DuplexMode mode);

/// HD links get half the resource (FDD), so they carry half the bits.
inline double duplex_rate_factor(DuplexMode mode) { return mode == DuplexMode::hd ? 0.5 : 1.0; }

/// Bits delivered in one block: factor * T_f * BW * log2(1 + sinr).
double rate_bits(double sinr, const QoSConfig& qos, DuplexMode mode);

}  // namespace hcnqos
