#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "hcnqos/experiment.hpp"
#include "hcnqos/geometry.hpp"
#include "hcnqos/interference.hpp"

namespace hcnqos {

// CSV writers. Floating-point values carry 10 significant digits; the
// sweep header is
//   eta_dB,ec_hd_exact,ec_hd_se,ec_fd_exact,ec_fd_se,ec_hd_lb,ec_fd_lb,ec_fd_lb_se
void write_sweep_csv(const SweepResult& sweep, std::ostream& os);
void write_breakdown_csv(const MeanInterferenceBreakdown& breakdown, std::ostream& os);
void write_benchmark_csv(const BenchmarkReport& report, std::ostream& os);

nlohmann::json sweep_metadata(const SweepResult& sweep);
nlohmann::json benchmark_metadata(const BenchmarkReport& report);

/// Writes the CSV to `path` and a `<path>.meta.json` sidecar. I/O failures
/// throw IoError carrying the system message.
void emit_results(const SweepResult& sweep, const std::filesystem::path& path);
void emit_results(const MeanInterferenceBreakdown& breakdown, const std::filesystem::path& path);
void emit_results(const BenchmarkReport& report, const std::filesystem::path& path);

/// Topology replay format: JSON with centres and radii in metres and powers
/// in dBm.
nlohmann::json topology_to_json(const NetworkTopology& topology);
NetworkTopology topology_from_json(const nlohmann::json& j);
void save_topology(const NetworkTopology& topology, const std::filesystem::path& path);
NetworkTopology load_topology(const std::filesystem::path& path);

}  // namespace hcnqos
