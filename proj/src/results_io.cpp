#include "hcnqos/results_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "hcnqos/errors.hpp"
#include "hcnqos/units.hpp"

namespace hcnqos {

namespace {

constexpr int kCsvDigits = 10;

struct Num {
  double v;
};

std::ostream& operator<<(std::ostream& os, Num n) {
  if (std::isnan(n.v)) return os << "nan";
  if (std::isinf(n.v)) return os << (n.v > 0 ? "inf" : "-inf");
  return os << std::setprecision(kCsvDigits) << n.v;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string() + ": " + std::strerror(errno));
  return out;
}

void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError(path.string() + ": write failed: " + std::strerror(errno));
}

template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out = open_for_write(path);
  writer(out);
  finish_write(out, path);
}

std::filesystem::path sidecar(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".meta.json");
}

void write_json(const nlohmann::json& j, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

nlohmann::json nullable(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

nlohmann::json point_to_json(Point p) { return nlohmann::json::array({p.x, p.y}); }

Point point_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw ParseError("topology: point must be [x, y]");
  return Point{j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

void write_sweep_csv(const SweepResult& sweep, std::ostream& os) {
  os << "eta_dB,ec_hd_exact,ec_hd_se,ec_fd_exact,ec_fd_se,ec_hd_lb,ec_fd_lb,ec_fd_lb_se\n";
  for (const SweepRow& r : sweep.rows) {
    os << Num{r.eta_db} << ',' << Num{r.hd_exact.ec_bits} << ',' << Num{r.hd_exact.std_error_bits}
       << ',' << Num{r.fd_exact.ec_bits} << ',' << Num{r.fd_exact.std_error_bits} << ','
       << Num{r.hd_lb.ec_bits} << ',' << Num{r.fd_lb.ec_bits} << ',' << Num{r.fd_lb.std_error_bits}
       << '\n';
  }
}

void write_breakdown_csv(const MeanInterferenceBreakdown& breakdown, std::ostream& os) {
  os << "interferer_id,type,mean_interference_w\n";
  std::size_t id = 0;
  auto row = [&](const InterfererMean& m) {
    os << id++ << ',' << to_string(m.kind) << ',' << Num{m.mean_w} << '\n';
  };
  for (const InterfererMean& m : breakdown.per_bs) row(m);
  for (const InterfererMean& m : breakdown.per_ue) row(m);
}

void write_benchmark_csv(const BenchmarkReport& report, std::ostream& os) {
  os << "exact_seconds,lb_seconds,speedup,M\n";
  os << Num{report.exact_seconds} << ',' << Num{report.lb_seconds} << ',' << Num{report.speedup()}
     << ',' << report.cells << '\n';
}

nlohmann::json sweep_metadata(const SweepResult& sweep) {
  const SweepFingerprint& f = sweep.fingerprint;
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << f.topology_hash;
  nlohmann::json j;
  j["kind"] = "sweep";
  j["topology_fingerprint"] = hash.str();
  j["seed"] = f.seed;
  j["theta"] = f.theta;
  j["kappa"] = f.kappa;
  j["trials"] = f.trials;
  j["lb_samples"] = f.lb_samples;
  j["cells"] = f.cells;
  j["eta_points"] = sweep.rows.size();
  j["fd_gain"] = nullable(fd_gain(sweep));
  const auto cross = find_crossover(sweep);
  j["crossover_eta_db"] = cross ? nlohmann::json(*cross) : nlohmann::json(nullptr);
  j["warnings"] = sweep.warnings;
  return j;
}

nlohmann::json benchmark_metadata(const BenchmarkReport& r) {
  nlohmann::json j;
  j["kind"] = "benchmark";
  j["cells"] = r.cells;
  j["target_se_bits"] = r.target_se_bits;
  j["exact_trials"] = r.exact_trials;
  j["lb_samples"] = r.lb_samples;
  j["exact_se_bits"] = nullable(r.exact_se_bits);
  j["lb_se_bits"] = nullable(r.lb_se_bits);
  j["exact_ec_bits"] = nullable(r.exact_ec_bits);
  j["lb_ec_bits"] = nullable(r.lb_ec_bits);
  j["workers"] = r.workers;
  return j;
}

void emit_results(const SweepResult& sweep, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_sweep_csv(sweep, os); });
  write_json(sweep_metadata(sweep), sidecar(path));
}

void emit_results(const MeanInterferenceBreakdown& breakdown, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_breakdown_csv(breakdown, os); });
  nlohmann::json j;
  j["kind"] = "mean_interference";
  j["total_w"] = breakdown.total_w;
  j["bs_total_w"] = breakdown.bs_total_w();
  j["ue_total_w"] = breakdown.ue_total_w();
  j["warnings"] = breakdown.warnings;
  write_json(j, sidecar(path));
}

void emit_results(const BenchmarkReport& report, const std::filesystem::path& path) {
  write_file(path, [&](std::ostream& os) { write_benchmark_csv(report, os); });
  write_json(benchmark_metadata(report), sidecar(path));
}

nlohmann::json topology_to_json(const NetworkTopology& t) {
  nlohmann::json j;
  j["macro_radius_m"] = t.region.macro_radius_m;
  j["macro_center_m"] = point_to_json(t.region.macro_center);
  j["macro"] = {{"position_m", point_to_json(t.macro.position)},
                {"power_dbm", watts_to_dbm(t.macro.power_w)},
                {"alpha", t.macro.alpha}};
  j["hard_core_m"] = t.hard_core_m;
  j["tagged_index"] = t.tagged_index ? nlohmann::json(*t.tagged_index) : nlohmann::json(nullptr);
  nlohmann::json cells = nlohmann::json::array();
  for (const SmallCell& c : t.cells) {
    cells.push_back({{"center_m", point_to_json(c.center)},
                     {"radius_m", c.radius_m},
                     {"power_dbm", watts_to_dbm(c.power_w)},
                     {"alpha", c.alpha}});
  }
  j["cells"] = std::move(cells);
  return j;
}

NetworkTopology topology_from_json(const nlohmann::json& j) {
  NetworkTopology t;
  try {
    t.region.macro_radius_m = j.at("macro_radius_m").get<double>();
    if (j.contains("macro_center_m")) t.region.macro_center = point_from_json(j.at("macro_center_m"));
    const auto& m = j.at("macro");
    t.macro.position = point_from_json(m.at("position_m"));
    t.macro.power_w = dbm_to_watts(m.at("power_dbm").get<double>());
    t.macro.alpha = m.at("alpha").get<double>();
    t.hard_core_m = j.at("hard_core_m").get<double>();
    if (j.contains("tagged_index") && !j.at("tagged_index").is_null()) {
      t.tagged_index = j.at("tagged_index").get<std::size_t>();
    }
    for (const auto& c : j.at("cells")) {
      SmallCell cell;
      cell.center = point_from_json(c.at("center_m"));
      cell.radius_m = c.at("radius_m").get<double>();
      cell.power_w = dbm_to_watts(c.at("power_dbm").get<double>());
      cell.alpha = c.at("alpha").get<double>();
      t.cells.push_back(cell);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("topology: ") + e.what());
  }
  validate(t);
  return t;
}

void save_topology(const NetworkTopology& topology, const std::filesystem::path& path) {
  write_json(topology_to_json(topology), path);
}

NetworkTopology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string() + ": " + std::strerror(errno));
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return topology_from_json(j);
}

}  // namespace hcnqos
