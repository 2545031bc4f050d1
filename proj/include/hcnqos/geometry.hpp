#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hcnqos/random.hpp"

namespace hcnqos {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

/// Position relative to a cell centre. theta is in [0, 2*pi).
struct PolarPoint {
  double r = 0.0;
  double theta = 0.0;

  Point to_cartesian(Point origin) const;
};

/// Macro coverage disk. Small-cell disks must lie entirely inside it.
struct Region {
  double macro_radius_m = 1000.0;
  Point macro_center{};
};

struct MacroBs {
  Point position{};
  double power_w = 0.0;
  double alpha = 3.0;
};

struct SmallCell {
  Point center{};
  double radius_m = 0.0;
  double power_w = 0.0;
  double alpha = 3.0;
};

/// One tier of identical small cells deployed as a hard-core process.
struct SmallCellTier {
  double density_per_m2 = 0.0;
  double hard_core_m = 0.0;
  double radius_m = 0.0;
  double power_w = 0.0;
  double alpha = 3.0;
};

struct NetworkTopology {
  Region region{};
  MacroBs macro{};
  std::vector<SmallCell> cells;
  double hard_core_m = 0.0;
  std::optional<std::size_t> tagged_index;
  std::vector<std::string> warnings;

  /// Throws ValidationError when no tagged cell is designated.
  const SmallCell& tagged() const;
};

/// Checks every topology invariant (hard core, containment, non-overlap,
/// tagged index). Throws ValidationError naming the first violation.
void validate(const NetworkTopology& topology);

/// Stable 64-bit hash of the geometry and powers, for result fingerprints.
std::uint64_t fingerprint(const NetworkTopology& topology);

/// Positions of one Monte Carlo draw, one entry per small cell.
struct TrialDraw {
  std::vector<PolarPoint> ue_positions;
  PolarPoint tagged_ue{};
};

struct MaternIntensity {
  double parent_per_m2 = 0.0;
  double expected_retained = 0.0;
  /// Supremum of the expected retained count over all parent intensities.
  double max_expected_retained = 0.0;
  bool saturated = false;
};

/// Area of the intersection of a disk of radius `a` centred at distance
/// `rho` from the origin with the origin-centred disk of radius `b`.
double disk_intersection_area(double rho, double a, double b);

/// Expected number of Matérn type-II survivors in the centre window for a
/// given parent intensity, with exact window edge effects.
double matern_expected_retained(double window_radius_m, double hard_core_m,
                                double parent_per_m2);

/// Parent intensity whose expected survivor count equals
/// density * (macro disk area). Saturates above the hard-core limit.
MaternIntensity matern_parent_intensity(const Region& region, const SmallCellTier& tier);

/// Matérn type-II hard-core deployment of one tier inside the macro disk.
/// Cell centres are drawn so every disk stays inside the macro cell. The
/// tagged cell is `tagged` when given, otherwise the cell nearest
/// (macro_radius/2, 0). Deterministic in `seed`.
NetworkTopology sample_matern_hcpp(const Region& region, const SmallCellTier& tier,
                                   const MacroBs& macro, std::uint64_t seed,
                                   std::optional<std::size_t> tagged = std::nullopt);

/// Default tagged-cell rule: nearest centre to `target`.
std::optional<std::size_t> nearest_cell(const std::vector<SmallCell>& cells, Point target);

/// Uniform point in a disk: density of r is 2r/R^2, theta uniform.
PolarPoint sample_uniform_disk(double radius_m, Rng& rng);

/// Distance between an interfering UE and a victim UE, each given relative
/// to its own cell centre, with the centres `center_separation_m` apart.
/// Both angles are measured from the direction pointing from the
/// interferer's centre to the victim's centre.
double interferer_distance(PolarPoint interferer_local, PolarPoint victim_local,
                           double center_separation_m);

}  // namespace hcnqos
