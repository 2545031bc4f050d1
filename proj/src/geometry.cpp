#include "hcnqos/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "hcnqos/errors.hpp"

namespace hcnqos {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Geometric comparisons tolerate rounding in serialized coordinates.
constexpr double kSlack = 1e-9;

// Parent intensity cap in units of 1/(pi r_h^2); retention saturates at 1 - e^-10.
constexpr double kSaturatedParentLoad = 10.0;

template <class F>
double integrate_radial(F f, double lo, double hi) {
  if (hi <= lo) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, 1e-11);
}

// Integral over the centre window of `per_area(A(rho))`, split at the kink
// where the hard-core disk starts touching the window boundary.
template <class F>
double integrate_window(double window_radius, double hard_core, F per_area) {
  auto integrand = [&](double rho) {
    return per_area(disk_intersection_area(rho, hard_core, window_radius)) * kTwoPi * rho;
  };
  const double kink = std::clamp(window_radius - hard_core, 0.0, window_radius);
  return integrate_radial(integrand, 0.0, kink) + integrate_radial(integrand, kink, window_radius);
}

void hash_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xffu;
    h *= 0x100000001b3ull;
  }
}

void hash_mix(std::uint64_t& h, double v) { hash_mix(h, std::bit_cast<std::uint64_t>(v)); }

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Point PolarPoint::to_cartesian(Point origin) const {
  return {origin.x + r * std::cos(theta), origin.y + r * std::sin(theta)};
}

const SmallCell& NetworkTopology::tagged() const {
  if (!tagged_index || *tagged_index >= cells.size()) {
    throw ValidationError("topology has no valid tagged cell");
  }
  return cells[*tagged_index];
}

void validate(const NetworkTopology& t) {
  if (!(t.region.macro_radius_m > 0.0)) throw ValidationError("macro_radius must be > 0");
  if (!(t.macro.power_w >= 0.0)) throw ValidationError("macro power must be >= 0");
  if (!(t.macro.alpha >= 0.0)) throw ValidationError("macro alpha must be >= 0");
  for (std::size_t i = 0; i < t.cells.size(); ++i) {
    const auto& c = t.cells[i];
    if (!(c.radius_m > 0.0)) throw ValidationError("small cell " + std::to_string(i) + ": radius must be > 0");
    if (!(c.power_w >= 0.0)) throw ValidationError("small cell " + std::to_string(i) + ": power must be >= 0");
    if (!(c.alpha >= 0.0)) throw ValidationError("small cell " + std::to_string(i) + ": alpha must be >= 0");
    if (distance(c.center, t.region.macro_center) + c.radius_m > t.region.macro_radius_m + kSlack) {
      throw ValidationError("small cell " + std::to_string(i) + " is not contained in the macro disk");
    }
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = t.cells[j];
      const double d = distance(c.center, o.center);
      if (d + kSlack < t.hard_core_m) {
        std::ostringstream msg;
        msg << "small cells " << j << " and " << i << " are " << d
            << " m apart, closer than the hard-core distance " << t.hard_core_m << " m";
        throw ValidationError(msg.str());
      }
      if (d + kSlack < c.radius_m + o.radius_m) {
        throw ValidationError("small cells " + std::to_string(j) + " and " + std::to_string(i) +
                              " overlap");
      }
    }
  }
  if (t.tagged_index && *t.tagged_index >= t.cells.size()) {
    throw ValidationError("tagged_index " + std::to_string(*t.tagged_index) +
                          " is out of range for " + std::to_string(t.cells.size()) + " cells");
  }
}

std::uint64_t fingerprint(const NetworkTopology& t) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  hash_mix(h, t.region.macro_radius_m);
  hash_mix(h, t.region.macro_center.x);
  hash_mix(h, t.region.macro_center.y);
  hash_mix(h, t.macro.position.x);
  hash_mix(h, t.macro.position.y);
  hash_mix(h, t.macro.power_w);
  hash_mix(h, t.macro.alpha);
  hash_mix(h, t.hard_core_m);
  hash_mix(h, static_cast<std::uint64_t>(t.tagged_index ? *t.tagged_index : ~std::size_t{0}));
  for (const auto& c : t.cells) {
    hash_mix(h, c.center.x);
    hash_mix(h, c.center.y);
    hash_mix(h, c.radius_m);
    hash_mix(h, c.power_w);
    hash_mix(h, c.alpha);
  }
  return h;
}

double disk_intersection_area(double rho, double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  rho = std::abs(rho);
  if (rho >= a + b) return 0.0;
  if (rho <= std::abs(b - a)) {
    const double m = std::min(a, b);
    return kPi * m * m;
  }
  const double ca = std::clamp((rho * rho + a * a - b * b) / (2.0 * rho * a), -1.0, 1.0);
  const double cb = std::clamp((rho * rho + b * b - a * a) / (2.0 * rho * b), -1.0, 1.0);
  const double k = (-rho + a + b) * (rho + a - b) * (rho - a + b) * (rho + a + b);
  return a * a * std::acos(ca) + b * b * std::acos(cb) - 0.5 * std::sqrt(std::max(k, 0.0));
}

double matern_expected_retained(double window_radius_m, double hard_core_m, double parent_per_m2) {
  if (parent_per_m2 <= 0.0 || window_radius_m <= 0.0) return 0.0;
  if (hard_core_m <= 0.0) return parent_per_m2 * kPi * window_radius_m * window_radius_m;
  // A point survives with probability (1 - exp(-lambda A)) / (lambda A), where
  // A is the window area within the hard-core distance of the point.
  return integrate_window(window_radius_m, hard_core_m, [&](double area) {
    return -std::expm1(-parent_per_m2 * area) / area;
  });
}

MaternIntensity matern_parent_intensity(const Region& region, const SmallCellTier& tier) {
  if (!(region.macro_radius_m > 0.0)) throw ValidationError("macro_radius must be > 0");
  if (!(tier.density_per_m2 >= 0.0)) throw ValidationError("small-cell density must be >= 0");
  if (!(tier.radius_m > 0.0)) throw ValidationError("small-cell radius must be > 0");
  if (tier.hard_core_m + kSlack < 2.0 * tier.radius_m) {
    throw ValidationError("hard-core distance must be >= 2 x cell radius (non-overlap condition)");
  }
  const double window = region.macro_radius_m - tier.radius_m;
  if (!(window > 0.0)) {
    throw InfeasibleRegionError("macro radius " + std::to_string(region.macro_radius_m) +
                                " m cannot contain a small cell of radius " +
                                std::to_string(tier.radius_m) + " m");
  }

  MaternIntensity out;
  const double target = tier.density_per_m2 * kPi * region.macro_radius_m * region.macro_radius_m;
  if (target == 0.0) return out;

  if (tier.hard_core_m <= 0.0) {
    out.parent_per_m2 = target / (kPi * window * window);
    out.expected_retained = target;
    out.max_expected_retained = std::numeric_limits<double>::infinity();
    return out;
  }

  const double cap = kSaturatedParentLoad / (kPi * tier.hard_core_m * tier.hard_core_m);
  out.max_expected_retained =
      integrate_window(window, tier.hard_core_m, [](double area) { return 1.0 / area; });
  const double at_cap = matern_expected_retained(window, tier.hard_core_m, cap);
  if (target >= at_cap) {
    out.parent_per_m2 = cap;
    out.expected_retained = at_cap;
    out.saturated = true;
    return out;
  }

  auto residual = [&](double lambda) {
    return matern_expected_retained(window, tier.hard_core_m, lambda) - target;
  };
  std::uintmax_t iterations = 100;
  const auto [lo, hi] = boost::math::tools::toms748_solve(
      residual, 0.0, cap, -target, at_cap - target,
      boost::math::tools::eps_tolerance<double>(40), iterations);
  out.parent_per_m2 = 0.5 * (lo + hi);
  out.expected_retained = matern_expected_retained(window, tier.hard_core_m, out.parent_per_m2);
  return out;
}

std::optional<std::size_t> nearest_cell(const std::vector<SmallCell>& cells, Point target) {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const double d = distance(cells[i].center, target);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

NetworkTopology sample_matern_hcpp(const Region& region, const SmallCellTier& tier,
                                   const MacroBs& macro, std::uint64_t seed,
                                   std::optional<std::size_t> tagged) {
  const MaternIntensity intensity = matern_parent_intensity(region, tier);

  NetworkTopology topo;
  topo.region = region;
  topo.macro = macro;
  topo.hard_core_m = tier.hard_core_m;
  if (intensity.saturated) {
    std::ostringstream msg;
    msg << "requested density " << tier.density_per_m2 * 1e6
        << "/km^2 exceeds the hard-core packing limit; expected cell count saturates at "
        << intensity.expected_retained;
    topo.warnings.push_back(msg.str());
  }

  const double window = region.macro_radius_m - tier.radius_m;
  Rng rng = make_rng(seed, Stream::topology);
  std::poisson_distribution<std::uint64_t> count_dist(intensity.parent_per_m2 * kPi * window * window);
  const std::uint64_t n = intensity.parent_per_m2 > 0.0 ? count_dist(rng) : 0;

  struct Parent {
    Point p;
    double mark;
  };
  std::vector<Parent> parents;
  parents.reserve(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const PolarPoint local = sample_uniform_disk(window, rng);
    parents.push_back({local.to_cartesian(region.macro_center), unit(rng)});
  }

  const double rh2 = tier.hard_core_m * tier.hard_core_m;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    bool keep = true;
    for (std::size_t j = 0; j < parents.size() && keep; ++j) {
      if (j == i) continue;
      const double dx = parents[i].p.x - parents[j].p.x;
      const double dy = parents[i].p.y - parents[j].p.y;
      if (dx * dx + dy * dy < rh2 && parents[j].mark < parents[i].mark) keep = false;
    }
    if (keep) topo.cells.push_back({parents[i].p, tier.radius_m, tier.power_w, tier.alpha});
  }

  if (tagged) {
    topo.tagged_index = tagged;
  } else {
    const Point target{region.macro_center.x + 0.5 * region.macro_radius_m, region.macro_center.y};
    topo.tagged_index = nearest_cell(topo.cells, target);
  }
  validate(topo);
  return topo;
}

PolarPoint sample_uniform_disk(double radius_m, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double r = radius_m * std::sqrt(unit(rng));
  double theta = kTwoPi * unit(rng);
  if (theta >= kTwoPi) theta = 0.0;
  return {r, theta};
}

double interferer_distance(PolarPoint interferer_local, PolarPoint victim_local,
                           double center_separation_m) {
  const double r1 = interferer_local.r;
  const double r2 = victim_local.r;
  const double d = center_separation_m;
  // c: interferer UE to victim centre.
  const double c2 = r1 * r1 + d * d - 2.0 * r1 * d * std::cos(interferer_local.theta);
  const double c = std::sqrt(std::max(c2, 0.0));
  if (c == 0.0) return r2;
  // psi: bearing of the interferer UE seen from the victim centre.
  const double psi = std::atan2(r1 * std::sin(interferer_local.theta),
                                r1 * std::cos(interferer_local.theta) - d);
  const double gamma = victim_local.theta - psi;
  const double x2 = c * c + r2 * r2 - 2.0 * c * r2 * std::cos(gamma);
  return std::sqrt(std::max(x2, 0.0));
}

}  // namespace hcnqos
