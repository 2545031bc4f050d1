#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "hcnqos/errors.hpp"
#include "hcnqos/geometry.hpp"
#include "hcnqos/random.hpp"
#include "hcnqos/units.hpp"

using namespace hcnqos;

namespace {

SmallCellTier pico(double density_per_km2) {
  return SmallCellTier{density_per_km2 / kSquareMetersPerKm2, 180.0, 90.0, dbm_to_watts(35.0), 3.0};
}

MacroBs macro() { return MacroBs{{}, dbm_to_watts(46.0), 3.0}; }

double min_pair_distance(const NetworkTopology& t) {
  double best = INFINITY;
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    for (std::size_t j = i + 1; j < t.cells.size(); ++j) {
      best = std::min(best, distance(t.cells[i].center, t.cells[j].center));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("hard core and containment hold on every sample") {
  const Region region{};
  for (double density : {1.0, 5.0, 20.0, 50.0}) {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const NetworkTopology t = sample_matern_hcpp(region, pico(density), macro(), seed);
      CHECK_NOTHROW(validate(t));
      if (t.cells.size() > 1) CHECK(min_pair_distance(t) >= 180.0);
      for (const SmallCell& c : t.cells) {
        CHECK(distance(c.center, region.macro_center) + c.radius_m <= region.macro_radius_m + 1e-9);
      }
    }
  }
}

TEST_CASE("zero density gives an empty deployment") {
  const NetworkTopology t = sample_matern_hcpp(Region{}, pico(0.0), macro(), 7);
  CHECK(t.cells.empty());
  CHECK_FALSE(t.tagged_index.has_value());
  CHECK_THROWS_AS(t.tagged(), Error);
}

TEST_CASE("mean retained count tracks the target density") {
  const Region region{};
  double total = 0.0;
  constexpr int runs = 1000;
  for (int s = 0; s < runs; ++s) {
    total += static_cast<double>(sample_matern_hcpp(region, pico(5.0), macro(), 1000 + s).cells.size());
  }
  const double target = 5.0 * std::numbers::pi;
  CHECK(std::abs(total / runs - target) / target < 0.15);
}

TEST_CASE("parent intensity solve reproduces the expected count") {
  const Region region{};
  const MaternIntensity m = matern_parent_intensity(region, pico(5.0));
  CHECK_FALSE(m.saturated);
  CHECK(m.expected_retained == doctest::Approx(5.0 * std::numbers::pi).epsilon(1e-6));
  CHECK(m.parent_per_m2 > 5.0e-6);
}

TEST_CASE("densities beyond the packing limit saturate with a warning") {
  const MaternIntensity m = matern_parent_intensity(Region{}, pico(50.0));
  CHECK(m.saturated);
  CHECK(m.max_expected_retained < 50.0 * std::numbers::pi);
  const NetworkTopology t = sample_matern_hcpp(Region{}, pico(50.0), macro(), 3);
  CHECK_FALSE(t.warnings.empty());
}

TEST_CASE("invalid tiers are rejected") {
  SmallCellTier tier = pico(5.0);
  tier.hard_core_m = 100.0;
  CHECK_THROWS_AS(sample_matern_hcpp(Region{}, tier, macro(), 1), ValidationError);
  CHECK_THROWS_AS(sample_matern_hcpp(Region{}, pico(-1.0), macro(), 1), ValidationError);
  CHECK_THROWS_AS(sample_matern_hcpp(Region{80.0, {}}, pico(5.0), macro(), 1), InfeasibleRegionError);
}

TEST_CASE("topologies are deterministic in the seed") {
  const NetworkTopology a = sample_matern_hcpp(Region{}, pico(5.0), macro(), 11);
  const NetworkTopology b = sample_matern_hcpp(Region{}, pico(5.0), macro(), 11);
  const NetworkTopology c = sample_matern_hcpp(Region{}, pico(5.0), macro(), 12);
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a) != fingerprint(c));
}

TEST_CASE("default tagged cell is nearest to half the macro radius") {
  const NetworkTopology t = sample_matern_hcpp(Region{}, pico(5.0), macro(), 5);
  REQUIRE(t.tagged_index.has_value());
  const Point target{500.0, 0.0};
  const double chosen = distance(t.tagged().center, target);
  for (const SmallCell& c : t.cells) CHECK(chosen <= distance(c.center, target));

  const NetworkTopology pinned = sample_matern_hcpp(Region{}, pico(5.0), macro(), 5, 0);
  CHECK(*pinned.tagged_index == 0);
  CHECK_THROWS_AS(sample_matern_hcpp(Region{}, pico(5.0), macro(), 5, 10000), ValidationError);
}

TEST_CASE("disk intersection area") {
  CHECK(disk_intersection_area(0.0, 3.0, 2.0) == doctest::Approx(std::numbers::pi * 4.0));
  CHECK(disk_intersection_area(5.0, 3.0, 2.0) == 0.0);
  CHECK(disk_intersection_area(10.0, 3.0, 2.0) == 0.0);
  // Two unit disks one radius apart.
  const double lens = 2.0 * std::acos(0.5) - 0.5 * std::sqrt(3.0);
  CHECK(disk_intersection_area(1.0, 1.0, 1.0) == doctest::Approx(lens).epsilon(1e-12));
}

TEST_CASE("uniform disk support and moments") {
  Rng rng = make_rng(42, Stream::oracle);
  constexpr int n = 100000;
  double sum_r = 0.0, sum_r2 = 0.0;
  std::vector<double> rs;
  rs.reserve(n);
  for (int i = 0; i < n; ++i) {
    const PolarPoint p = sample_uniform_disk(90.0, rng);
    REQUIRE(p.r >= 0.0);
    REQUIRE(p.r <= 90.0);
    REQUIRE(p.theta >= 0.0);
    REQUIRE(p.theta < 2.0 * std::numbers::pi);
    sum_r += p.r;
    sum_r2 += p.r * p.r;
    rs.push_back(p.r);
  }
  CHECK(std::abs(sum_r / n - 60.0) / 60.0 < 0.01);
  CHECK(std::abs(sum_r2 / n - 4050.0) / 4050.0 < 0.01);

  // Kolmogorov-Smirnov against F(r) = (r/R)^2 at the 1% level.
  std::sort(rs.begin(), rs.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = (rs[i] / 90.0) * (rs[i] / 90.0);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  CHECK(d < 1.628 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("interferer distance examples") {
  CHECK(interferer_distance({0.0, 0.0}, {0.0, 0.0}, 500.0) == doctest::Approx(500.0));
  // Victim at angle pi sits on the segment towards the interferer's centre.
  CHECK(interferer_distance({0.0, 0.0}, {90.0, std::numbers::pi}, 500.0) == doctest::Approx(410.0));
  CHECK(interferer_distance({90.0, 0.0}, {0.0, 0.0}, 500.0) == doctest::Approx(410.0));
}

TEST_CASE("interferer distance agrees with Cartesian coordinates") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double d = 200.0 + 1800.0 * u(rng);
    const PolarPoint a{90.0 * u(rng), 2.0 * std::numbers::pi * u(rng)};
    const PolarPoint b{90.0 * u(rng), 2.0 * std::numbers::pi * u(rng)};
    const Point pa = a.to_cartesian({0.0, 0.0});
    const Point pb = b.to_cartesian({d, 0.0});
    const double direct = distance(pa, pb);
    worst = std::max(worst, std::abs(interferer_distance(a, b, d) - direct) / direct);
  }
  CHECK(worst < 1e-9);
}
