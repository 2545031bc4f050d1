#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "hcnqos/channel.hpp"
#include "hcnqos/effective_capacity.hpp"
#include "hcnqos/geometry.hpp"

namespace hcnqos {

/// Full experiment description. Defaults reproduce the reference deployment:
/// 46 dBm macro, 35 dBm / 90 m pico cells at least 180 m apart, 23 dBm UEs,
/// alpha = 3 and -120 dBm noise.
struct ScenarioConfig {
  double macro_radius_m = 1000.0;
  double macro_power_dbm = 46.0;
  double macro_alpha = 3.0;

  double pico_power_dbm = 35.0;
  double pico_radius_m = 90.0;
  double pico_alpha = 3.0;
  double pico_density_per_km2 = 5.0;
  double hard_core_m = 180.0;

  DuplexMode mode = DuplexMode::fd;
  double eta = 1e-8;  // linear; -80 dB
  double kappa = 1.0;

  double theta = 1e-3;
  double frame_time_s = 0.5e-3;
  double bandwidth_hz = 180e3;

  double noise_dbm = -120.0;
  double ue_power_dbm = 23.0;

  std::uint64_t topology_seed = 1;
  std::uint64_t trial_seed = 1;
  std::uint64_t trials = 100000;
  std::uint64_t lb_samples = 100000;

  std::optional<std::size_t> tagged_index;
  /// When set, the topology is loaded from this file instead of sampled.
  std::string topology_file;

  void validate() const;

  Region region() const;
  MacroBs macro_bs() const;
  SmallCellTier pico_tier() const;
  DuplexConfig duplex() const;
  QoSConfig qos() const;
  double noise_w() const;
};

/// Parses `key = value` lines; `#` starts a comment. Omitted keys keep their
/// defaults. `eta_db` may be given instead of the linear `eta`.
ScenarioConfig parse_scenario(std::string_view text, std::string_view source_name = "<scenario>");

ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Serializes every field with round-trip precision.
std::string format_scenario(const ScenarioConfig& config);

/// Samples (or loads) the topology and converts units to watts.
LinkScenario build_scenario(const ScenarioConfig& config);

}  // namespace hcnqos
