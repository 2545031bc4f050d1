#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hcnqos/errors.hpp"
#include "hcnqos/results_io.hpp"
#include "hcnqos/scenario.hpp"

using namespace hcnqos;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hcnqos_scenario_io";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

SweepResult small_sweep(unsigned workers = 1) {
  ScenarioConfig cfg;
  const LinkScenario s = build_scenario(cfg);
  SweepOptions o;
  o.eta_grid_db = {-100.0, -50.0, -20.0};
  o.trials = 3000;
  o.lb_samples = 3000;
  o.workers = workers;
  return sweep_eta(s, o);
}

}  // namespace

TEST_CASE("empty scenario gives the reference defaults") {
  const ScenarioConfig c = parse_scenario("");
  CHECK(c.macro_power_dbm == 46.0);
  CHECK(c.pico_power_dbm == 35.0);
  CHECK(c.ue_power_dbm == 23.0);
  CHECK(c.noise_dbm == -120.0);
  CHECK(c.hard_core_m == 180.0);
  CHECK(c.pico_radius_m == 90.0);
  CHECK(c.pico_alpha == 3.0);
  CHECK(c.macro_alpha == 3.0);
  CHECK(c.theta == 1e-3);
  CHECK(c.kappa == 1.0);
  CHECK(c.pico_tier().power_w == doctest::Approx(3.1623).epsilon(1e-4));
  CHECK(c.macro_bs().power_w == doctest::Approx(39.8107).epsilon(1e-5));
  CHECK(c.noise_w() == doctest::Approx(1e-15));
  CHECK(c.duplex().ue_tx_power_w == doctest::Approx(0.19953).epsilon(1e-4));
}

TEST_CASE("keys, comments and eta in dB") {
  const ScenarioConfig c = parse_scenario(
      "# sparse deployment\n"
      "pico_density_per_km2 = 5   # per km^2\n"
      "\n"
      "  eta_db = -50\n"
      "mode = hd\n"
      "tagged_index = 3\n"
      "trials = 2500\n");
  CHECK(c.eta == doctest::Approx(1e-5));
  CHECK(c.mode == DuplexMode::hd);
  REQUIRE(c.tagged_index.has_value());
  CHECK(*c.tagged_index == 3);
  CHECK(c.trials == 2500);
}

TEST_CASE("parse errors carry the line") {
  try {
    parse_scenario("theta = 1e-3\npico_radius_m 90\n", "cfg.txt");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("cfg.txt:2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("bogus_key = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("theta = fast\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("trials = -5\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("mode = tdd\n"), ParseError);
  CHECK_THROWS_AS(parse_scenario("eta = 1e-5\neta_db = -50\n"), ParseError);
}

TEST_CASE("validation names the violated invariant") {
  try {
    parse_scenario("hard_core_m = 100\n");
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("hard_core_m") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("eta = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("kappa = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("theta = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("trials = 0\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("pico_density_per_km2 = -1\n"), ValidationError);
}

TEST_CASE("format and parse round trip") {
  ScenarioConfig c;
  c.eta = 3.1415926535897931e-7;
  c.theta = 2.5e-3;
  c.pico_density_per_km2 = 12.345678901234567;
  c.mode = DuplexMode::hd;
  c.tagged_index = 4;
  c.topology_seed = 99;
  const ScenarioConfig back = parse_scenario(format_scenario(c));
  CHECK(format_scenario(back) == format_scenario(c));
  CHECK(back.eta == c.eta);
  CHECK(back.pico_density_per_km2 == c.pico_density_per_km2);
}

TEST_CASE("missing scenario file is an I/O error") {
  CHECK_THROWS_AS(load_scenario(scratch("nope/missing.txt")), IoError);
}

TEST_CASE("sweep CSV layout") {
  const SweepResult r = small_sweep();
  std::ostringstream os;
  write_sweep_csv(r, os);
  const std::string csv = os.str();
  CHECK(line_count(csv) == 4);
  CHECK(csv.rfind("eta_dB,ec_hd_exact,ec_hd_se,ec_fd_exact,ec_fd_se,ec_hd_lb,ec_fd_lb,ec_fd_lb_se\n", 0) == 0);
  CHECK(csv.find("-100,") != std::string::npos);
}

TEST_CASE("sweep CSVs are byte identical across reruns and worker counts") {
  const fs::path a = scratch("a.csv");
  const fs::path b = scratch("b.csv");
  emit_results(small_sweep(1), a);
  emit_results(small_sweep(3), b);
  CHECK(slurp(a) == slurp(b));
  CHECK(fs::exists(fs::path(a.string() + ".meta.json")));
  const nlohmann::json meta = nlohmann::json::parse(slurp(a.string() + ".meta.json"));
  CHECK(meta.at("trials") == 3000);
  CHECK(meta.at("seed") == 1);
}

TEST_CASE("benchmark CSV is a single row") {
  BenchmarkReport r;
  r.exact_seconds = 2.0;
  r.lb_seconds = 0.1;
  r.cells = 16;
  std::ostringstream os;
  write_benchmark_csv(r, os);
  CHECK(os.str() == "exact_seconds,lb_seconds,speedup,M\n2,0.1,20,16\n");
}

TEST_CASE("breakdown CSV lists every interferer") {
  const LinkScenario s = build_scenario(ScenarioConfig{});
  const MeanInterferenceBreakdown b = total_mean_interference(s.topology, s.duplex);
  std::ostringstream os;
  write_breakdown_csv(b, os);
  CHECK(line_count(os.str()) == 1 + b.per_bs.size() + b.per_ue.size());
  CHECK(os.str().find("macro_bs") != std::string::npos);
}

TEST_CASE("unwritable output surfaces the system error") {
  const SweepResult r = small_sweep();
  CHECK_THROWS_AS(emit_results(r, scratch("missing_dir/out.csv")), IoError);
}

TEST_CASE("topology JSON round trip and replay") {
  const LinkScenario s = build_scenario(ScenarioConfig{});
  const fs::path p = scratch("topology.json");
  save_topology(s.topology, p);
  const NetworkTopology back = load_topology(p);
  REQUIRE(back.cells.size() == s.topology.cells.size());
  for (std::size_t i = 0; i < back.cells.size(); ++i) {
    CHECK(back.cells[i].center.x == doctest::Approx(s.topology.cells[i].center.x).epsilon(1e-15));
    CHECK(back.cells[i].power_w == doctest::Approx(s.topology.cells[i].power_w).epsilon(1e-12));
  }
  CHECK(back.tagged_index == s.topology.tagged_index);

  std::ofstream(scratch("replay.txt")) << "topology_file = topology.json\ntagged_index = 1\n";
  const LinkScenario replay = build_scenario(load_scenario(scratch("replay.txt")));
  CHECK(replay.topology.cells.size() == s.topology.cells.size());
  CHECK(*replay.topology.tagged_index == 1);

  std::ofstream(scratch("broken.json")) << "{\"cells\": 3}";
  CHECK_THROWS_AS(load_topology(scratch("broken.json")), ParseError);
}
