#include <doctest.h>

#include <cmath>
#include <vector>

#include "hcnqos/errors.hpp"
#include "hcnqos/experiment.hpp"
#include "support.hpp"

using namespace hcnqos;
using hcnqos::testing::toy_scenario;

namespace {

SmallCellTier pico(double density_per_km2) {
  return SmallCellTier{density_per_km2 / kSquareMetersPerKm2, 180.0, 90.0, dbm_to_watts(35.0), 3.0};
}

MacroBs macro() { return MacroBs{{}, dbm_to_watts(46.0), 3.0}; }

LinkScenario deployment(double density_per_km2, std::uint64_t seed) {
  return toy_scenario(sample_matern_hcpp(Region{}, pico(density_per_km2), macro(), seed));
}

SweepOptions options(std::vector<double> grid, std::uint64_t trials = 8000) {
  SweepOptions o;
  o.eta_grid_db = std::move(grid);
  o.trials = trials;
  o.lb_samples = trials;
  return o;
}

SweepRow synthetic_row(double eta_db, double hd, double fd) {
  SweepRow r;
  r.eta_db = eta_db;
  r.hd_exact.ec_bits = hd;
  r.fd_exact.ec_bits = fd;
  return r;
}

}  // namespace

TEST_CASE("eta grid construction") {
  const std::vector<double> g = make_eta_grid_db(-150.0, 0.0, 5.0);
  CHECK(g.size() == 31);
  CHECK(g.front() == -150.0);
  CHECK(g.back() == 0.0);
  CHECK(make_eta_grid_db(-10.0, -10.0, 1.0).size() == 1);
  CHECK_THROWS_AS(make_eta_grid_db(-10.0, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(make_eta_grid_db(0.0, -10.0, 1.0), ValidationError);
  CHECK_THROWS_AS(make_eta_grid_db(-10.0, 5.0, 1.0), ValidationError);
}

TEST_CASE("sweep shape and HD invariance") {
  const LinkScenario s = deployment(5.0, 1);
  const SweepResult r = sweep_eta(s, options(make_eta_grid_db(-150.0, 0.0, 10.0)));
  REQUIRE(r.rows.size() == 16);
  for (const SweepRow& row : r.rows) {
    CHECK(row.hd_exact.ec_bits == r.rows[0].hd_exact.ec_bits);
    CHECK(row.hd_lb.ec_bits == r.rows[0].hd_lb.ec_bits);
    CHECK(row.eta == doctest::Approx(db_to_linear(row.eta_db)));
  }
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    CHECK(r.rows[i].fd_exact.ec_bits <= r.rows[i - 1].fd_exact.ec_bits);
    CHECK(r.rows[i].eta > r.rows[i - 1].eta);
  }
  CHECK(r.fingerprint.cells == s.topology.cells.size());
  CHECK(r.fingerprint.topology_hash == fingerprint(s.topology));
}

TEST_CASE("excluded modes are NaN") {
  const LinkScenario s = deployment(5.0, 1);
  SweepOptions o = options({-100.0, -50.0}, 2000);
  o.modes = ModeSelection::hd;
  const SweepResult hd = sweep_eta(s, o);
  CHECK(std::isnan(hd.rows[0].fd_exact.ec_bits));
  CHECK(std::isnan(hd.rows[1].fd_lb.ec_bits));
  CHECK_FALSE(std::isnan(hd.rows[0].hd_exact.ec_bits));
  o.modes = ModeSelection::fd;
  const SweepResult fd = sweep_eta(s, o);
  CHECK(std::isnan(fd.rows[0].hd_exact.ec_bits));
  CHECK_FALSE(std::isnan(fd.rows[0].fd_exact.ec_bits));
}

TEST_CASE("sweep rejects bad grids") {
  const LinkScenario s = deployment(5.0, 1);
  CHECK_THROWS_AS(sweep_eta(s, options({})), ValidationError);
  CHECK_THROWS_AS(sweep_eta(s, options({-10.0, -20.0})), ValidationError);
  CHECK_THROWS_AS(sweep_eta(s, options({-10.0, -10.0})), ValidationError);
}

TEST_CASE("gain below one without cancellation") {
  const SweepResult r = sweep_eta(deployment(5.0, 1), options({0.0}));
  CHECK(fd_gain(r) < 1.0);
}

TEST_CASE("no crossover when FD always wins") {
  const SweepResult r = sweep_eta(deployment(5.0, 1), options({-150.0, -140.0, -130.0}));
  CHECK(fd_gain(r) > 1.0);
  CHECK_FALSE(find_crossover(r).has_value());
}

TEST_CASE("crossover interpolates in dB") {
  SweepResult r;
  r.rows = {synthetic_row(-60.0, 100.0, 180.0), synthetic_row(-50.0, 100.0, 120.0),
            synthetic_row(-40.0, 100.0, 60.0)};
  const auto x = find_crossover(r);
  REQUIRE(x.has_value());
  CHECK(*x == doctest::Approx(-50.0 + 10.0 * 20.0 / 60.0));
  CHECK(fd_gain(r) == doctest::Approx(1.8));

  r.rows[1].fd_exact.ec_bits = 100.0;
  CHECK(*find_crossover(r) == -50.0);
}

TEST_CASE("gain and crossover are stable under grid refinement") {
  const LinkScenario s = deployment(5.0, 2);
  const SweepResult coarse = sweep_eta(s, options(make_eta_grid_db(-70.0, -30.0, 1.0), 20000));
  const SweepResult fine = sweep_eta(s, options(make_eta_grid_db(-70.0, -30.0, 0.5), 20000));
  REQUIRE(find_crossover(coarse).has_value());
  REQUIRE(find_crossover(fine).has_value());
  CHECK(std::abs(*find_crossover(coarse) - *find_crossover(fine)) < 0.5);
  const SweepResult g1 = sweep_eta(s, options(make_eta_grid_db(-150.0, -100.0, 1.0), 20000));
  const SweepResult g2 = sweep_eta(s, options(make_eta_grid_db(-150.0, -100.0, 0.5), 20000));
  CHECK(fd_gain(g1) == doctest::Approx(fd_gain(g2)).epsilon(1e-3));
}

TEST_CASE("lower bound is tighter in the dense deployment") {
  double sparse_gap = 0.0, dense_gap = 0.0;
  constexpr int seeds = 10;
  for (int k = 0; k < seeds; ++k) {
    for (double density : {5.0, 50.0}) {
      const SweepResult r = sweep_eta(deployment(density, 100 + k), options({-150.0}, 10000));
      const SweepRow& row = r.rows[0];
      const double gap = (row.fd_exact.ec_bits - row.fd_lb.ec_bits) / row.fd_exact.ec_bits;
      (density == 5.0 ? sparse_gap : dense_gap) += gap / seeds;
    }
  }
  MESSAGE("mean relative gap sparse=" << sparse_gap << " dense=" << dense_gap);
  CHECK(dense_gap < sparse_gap);
}

TEST_CASE("deployment with a fixed cell count") {
  for (std::size_t m : {1u, 16u, 40u}) {
    const NetworkTopology t = sample_topology_with_cell_count(pico(5.0), macro(), m, 1);
    CHECK(t.cells.size() == m);
    CHECK_NOTHROW(validate(t));
  }
  CHECK_THROWS_AS(sample_topology_with_cell_count(pico(5.0), macro(), 0, 1), ValidationError);
}

TEST_CASE("single-cell benchmark is never slower with the bound") {
  LinkScenario s = toy_scenario(sample_topology_with_cell_count(pico(5.0), macro(), 1, 1));
  BenchmarkOptions o;
  o.target_se_bits = 1.0;
  o.pilot_trials = 5000;
  const BenchmarkReport r = benchmark_runtime(s, o);
  CHECK(r.cells == 1);
  CHECK(r.exact_seconds > 0.0);
  CHECK(r.lb_seconds > 0.0);
  CHECK(r.speedup() >= 1.0);
  CHECK(r.exact_se_bits <= 1.1 * o.target_se_bits);
  CHECK(r.lb_se_bits <= 1.1 * o.target_se_bits);
}
