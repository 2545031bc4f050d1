#include "hcnqos/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "hcnqos/errors.hpp"
#include "hcnqos/results_io.hpp"
#include "hcnqos/units.hpp"

namespace hcnqos {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_double(std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t parse_uint(std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw std::invalid_argument("expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;

Setter real(double ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v) { c.*field = parse_double(v); };
}

Setter count(std::uint64_t ScenarioConfig::*field) {
  return [field](ScenarioConfig& c, std::string_view v) { c.*field = parse_uint(v); };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"macro_radius_m", real(&ScenarioConfig::macro_radius_m)},
      {"macro_power_dbm", real(&ScenarioConfig::macro_power_dbm)},
      {"macro_alpha", real(&ScenarioConfig::macro_alpha)},
      {"pico_power_dbm", real(&ScenarioConfig::pico_power_dbm)},
      {"pico_radius_m", real(&ScenarioConfig::pico_radius_m)},
      {"pico_alpha", real(&ScenarioConfig::pico_alpha)},
      {"pico_density_per_km2", real(&ScenarioConfig::pico_density_per_km2)},
      {"hard_core_m", real(&ScenarioConfig::hard_core_m)},
      {"eta", real(&ScenarioConfig::eta)},
      {"eta_db", [](ScenarioConfig& c, std::string_view v) { c.eta = db_to_linear(parse_double(v)); }},
      {"kappa", real(&ScenarioConfig::kappa)},
      {"theta", real(&ScenarioConfig::theta)},
      {"frame_time_s", real(&ScenarioConfig::frame_time_s)},
      {"bandwidth_hz", real(&ScenarioConfig::bandwidth_hz)},
      {"noise_dbm", real(&ScenarioConfig::noise_dbm)},
      {"ue_power_dbm", real(&ScenarioConfig::ue_power_dbm)},
      {"topology_seed", count(&ScenarioConfig::topology_seed)},
      {"trial_seed", count(&ScenarioConfig::trial_seed)},
      {"trials", count(&ScenarioConfig::trials)},
      {"lb_samples", count(&ScenarioConfig::lb_samples)},
      {"mode",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "fd") {
           c.mode = DuplexMode::fd;
         } else if (v == "hd") {
           c.mode = DuplexMode::hd;
         } else {
           throw std::invalid_argument("mode must be 'hd' or 'fd'");
         }
       }},
      {"tagged_index",
       [](ScenarioConfig& c, std::string_view v) {
         if (v == "auto") {
           c.tagged_index.reset();
         } else {
           c.tagged_index = static_cast<std::size_t>(parse_uint(v));
         }
       }},
      {"topology_file", [](ScenarioConfig& c, std::string_view v) { c.topology_file = std::string(v); }},
  };
  return table;
}

void require(bool ok, const char* invariant) {
  if (!ok) throw ValidationError(std::string("scenario: ") + invariant);
}

}  // namespace

void ScenarioConfig::validate() const {
  require(macro_radius_m > 0.0, "macro_radius_m must be > 0");
  require(pico_radius_m > 0.0, "pico_radius_m must be > 0");
  require(macro_radius_m > pico_radius_m, "macro_radius_m must exceed pico_radius_m");
  require(hard_core_m >= 2.0 * pico_radius_m, "hard_core_m must be >= 2 x pico_radius_m");
  require(pico_density_per_km2 >= 0.0, "pico_density_per_km2 must be >= 0");
  require(macro_alpha >= 0.0 && pico_alpha >= 0.0, "path-loss exponents must be >= 0");
  require(eta >= 0.0 && eta <= 1.0, "eta must lie in [0, 1]");
  require(kappa >= 0.0 && kappa <= 1.0, "kappa must lie in [0, 1]");
  require(theta > 0.0, "theta must be > 0");
  require(frame_time_s > 0.0, "frame_time_s must be > 0");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be > 0");
  require(std::isfinite(noise_dbm), "noise_dbm must be finite");
  require(std::isfinite(macro_power_dbm) && std::isfinite(pico_power_dbm) &&
              std::isfinite(ue_power_dbm),
          "transmit powers must be finite");
  require(trials >= 1, "trials must be >= 1");
  require(lb_samples >= 1, "lb_samples must be >= 1");
}

Region ScenarioConfig::region() const { return Region{macro_radius_m, {}}; }

MacroBs ScenarioConfig::macro_bs() const { return MacroBs{{}, dbm_to_watts(macro_power_dbm), macro_alpha}; }

SmallCellTier ScenarioConfig::pico_tier() const {
  return SmallCellTier{pico_density_per_km2 / kSquareMetersPerKm2, hard_core_m, pico_radius_m,
                       dbm_to_watts(pico_power_dbm), pico_alpha};
}

DuplexConfig ScenarioConfig::duplex() const {
  return DuplexConfig{mode, eta, kappa, dbm_to_watts(ue_power_dbm)};
}

QoSConfig ScenarioConfig::qos() const { return QoSConfig{theta, frame_time_s, bandwidth_hz}; }

double ScenarioConfig::noise_w() const { return dbm_to_watts(noise_dbm); }

ScenarioConfig parse_scenario(std::string_view text, std::string_view source_name) {
  ScenarioConfig cfg;
  bool saw_eta = false;
  bool saw_eta_db = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    auto fail = [&](const std::string& why) {
      std::ostringstream msg;
      msg << source_name << ":" << line_no << ": " << why;
      throw ParseError(msg.str());
    };

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail("expected 'key = value'");

    const auto it = setters().find(key);
    if (it == setters().end()) fail("unknown key '" + std::string(key) + "'");
    saw_eta = saw_eta || key == "eta";
    saw_eta_db = saw_eta_db || key == "eta_db";
    if (saw_eta && saw_eta_db) fail("give either eta or eta_db, not both");
    try {
      it->second(cfg, value);
    } catch (const std::invalid_argument& e) {
      fail(std::string(key) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": cannot open scenario file");
  std::ostringstream buf;
  buf << in.rdbuf();
  ScenarioConfig cfg = parse_scenario(buf.str(), path.string());
  if (!cfg.topology_file.empty() && std::filesystem::path(cfg.topology_file).is_relative()) {
    cfg.topology_file = (path.parent_path() / cfg.topology_file).string();
  }
  return cfg;
}

std::string format_scenario(const ScenarioConfig& c) {
  std::ostringstream os;
  os << "macro_radius_m = " << fmt(c.macro_radius_m) << "\n"
     << "macro_power_dbm = " << fmt(c.macro_power_dbm) << "\n"
     << "macro_alpha = " << fmt(c.macro_alpha) << "\n"
     << "pico_power_dbm = " << fmt(c.pico_power_dbm) << "\n"
     << "pico_radius_m = " << fmt(c.pico_radius_m) << "\n"
     << "pico_alpha = " << fmt(c.pico_alpha) << "\n"
     << "pico_density_per_km2 = " << fmt(c.pico_density_per_km2) << "\n"
     << "hard_core_m = " << fmt(c.hard_core_m) << "\n"
     << "mode = " << to_string(c.mode) << "\n"
     << "eta = " << fmt(c.eta) << "\n"
     << "kappa = " << fmt(c.kappa) << "\n"
     << "theta = " << fmt(c.theta) << "\n"
     << "frame_time_s = " << fmt(c.frame_time_s) << "\n"
     << "bandwidth_hz = " << fmt(c.bandwidth_hz) << "\n"
     << "noise_dbm = " << fmt(c.noise_dbm) << "\n"
     << "ue_power_dbm = " << fmt(c.ue_power_dbm) << "\n"
     << "topology_seed = " << c.topology_seed << "\n"
     << "trial_seed = " << c.trial_seed << "\n"
     << "trials = " << c.trials << "\n"
     << "lb_samples = " << c.lb_samples << "\n"
     << "tagged_index = " << (c.tagged_index ? std::to_string(*c.tagged_index) : "auto") << "\n";
  if (!c.topology_file.empty()) os << "topology_file = " << c.topology_file << "\n";
  return os.str();
}

LinkScenario build_scenario(const ScenarioConfig& config) {
  config.validate();
  LinkScenario s;
  if (!config.topology_file.empty()) {
    s.topology = load_topology(config.topology_file);
    if (config.tagged_index) s.topology.tagged_index = config.tagged_index;
    validate(s.topology);
  } else {
    s.topology = sample_matern_hcpp(config.region(), config.pico_tier(), config.macro_bs(),
                                    config.topology_seed, config.tagged_index);
  }
  s.duplex = config.duplex();
  s.qos = config.qos();
  s.noise_w = config.noise_w();
  return s;
}

}  // namespace hcnqos
