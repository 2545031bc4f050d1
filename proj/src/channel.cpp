#include "hcnqos/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hcnqos/errors.hpp"

namespace hcnqos {

const char* to_string(DuplexMode mode) { return mode == DuplexMode::hd ? "hd" : "fd"; }

void DuplexConfig::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("eta must lie in [0, 1]");
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw ValidationError("kappa must lie in [0, 1]");
  if (!(ue_tx_power_w >= 0.0)) throw ValidationError("UE transmit power must be >= 0");
}

void LinkBudget::validate() const {
  if (!(signal_w >= 0.0 && bs_interference_w >= 0.0 && ue_interference_w >= 0.0 && rsi_w >= 0.0)) {
    throw ValidationError("link budget powers must be >= 0");
  }
  if (!(noise_w > 0.0)) throw ValidationError("noise power must be > 0");
}

double QoSConfig::bits_per_nat() const { return frame_time_s * bandwidth_hz * std::numbers::log2e; }

double QoSConfig::beta() const { return theta * bits_per_nat(); }

void QoSConfig::validate() const {
  if (!(theta > 0.0)) throw ValidationError("theta must be > 0");
  if (!(frame_time_s > 0.0)) throw ValidationError("frame time must be > 0");
  if (!(bandwidth_hz > 0.0)) throw ValidationError("bandwidth must be > 0");
}

double path_loss_gain(double distance_m, double alpha) {
  return std::pow(std::max(distance_m, kNearFieldDistance_m), -alpha);
}

double sample_fading(Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  return exp1(rng);
}

double rsi_power(double tx_power_w, const DuplexConfig& duplex) {
  if (duplex.mode == DuplexMode::hd) return 0.0;
  return duplex.eta * std::pow(tx_power_w, duplex.kappa);
}

double sinr(const LinkBudget& link, DuplexMode mode) {
  double denom = link.bs_interference_w + link.noise_w;
  if (mode == DuplexMode::fd) denom += link.ue_interference_w + link.rsi_w;
  return link.signal_w / denom;
}

double rate_bits(double sinr, const QoSConfig& qos, DuplexMode mode) {
  return duplex_rate_factor(mode) * qos.frame_time_s * qos.bandwidth_hz * std::log2(1.0 + sinr);
}

}  // namespace hcnqos
