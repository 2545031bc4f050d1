#include "hcnqos/interference.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hcnqos/errors.hpp"

namespace hcnqos {

namespace {

void require_taylor_domain(double d, double radius, const char* what) {
  if (!(d > radius)) {
    std::ostringstream msg;
    msg << what << ": closed-form mean path loss requires d > R (d = " << d << " m, R = " << radius
        << " m)";
    throw TaylorValidityError(msg.str());
  }
}

}  // namespace

TaylorRegime taylor_regime(double d_m, double radius_m) {
  if (!(d_m > radius_m)) return TaylorRegime::invalid;
  if (d_m < 2.0 * radius_m) return TaylorRegime::coarse;
  return TaylorRegime::accurate;
}

double mean_pathloss_taylor(double d_m, double radius_m, double alpha) {
  if (!(radius_m >= 0.0)) throw ValidationError("radius must be >= 0");
  require_taylor_domain(d_m, radius_m, "mean_pathloss_taylor");
  const double x2 = (radius_m / d_m) * (radius_m / d_m);
  const double x4_3 = x2 * x2 / 3.0;
  const double bracket = 1.0 + alpha * alpha / 8.0 * (x4_3 + x2) + alpha / 4.0 * x4_3;
  return std::pow(d_m, -alpha) * bracket;
}

double mean_pathloss_numeric(double d_m, double radius_m, double alpha, double rel_tol,
                             double angular_offset) {
  if (!(d_m > 0.0)) throw ValidationError("mean_pathloss_numeric: d must be > 0");
  if (!(radius_m >= 0.0)) throw ValidationError("mean_pathloss_numeric: radius must be >= 0");
  if (radius_m == 0.0) return std::pow(d_m, -alpha);
  if (!(d_m > radius_m)) {
    throw ConvergenceError("mean_pathloss_numeric: the point lies inside the disk (d <= R); the "
                           "integrand is singular");
  }

  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  constexpr unsigned kMaxDepth = 15;
  const double two_pi = 2.0 * std::numbers::pi;
  double worst_inner = 0.0;

  auto radial = [&](double r) {
    auto angular = [&](double t) {
      return std::pow(d_m * d_m + r * r - 2.0 * d_m * r * std::cos(t - angular_offset), -0.5 * alpha);
    };
    double err = 0.0;
    const double v = Quad::integrate(angular, 0.0, two_pi, kMaxDepth, rel_tol * 0.1, &err);
    if (v > 0.0) worst_inner = std::max(worst_inner, err / v);
    return r * v;
  };
  double err = 0.0;
  const double integral = Quad::integrate(radial, 0.0, radius_m, kMaxDepth, rel_tol * 0.1, &err);
  const double value = integral / (std::numbers::pi * radius_m * radius_m);
  if (!std::isfinite(value) || err > rel_tol * std::abs(integral) || worst_inner > rel_tol) {
    std::ostringstream msg;
    msg << "mean_pathloss_numeric did not reach relative tolerance " << rel_tol << " (estimate "
        << err / std::abs(integral) << ")";
    throw ConvergenceError(msg.str());
  }
  return value;
}

double mean_interference_bs_ue(double p_bs_w, double d_m, double r_victim_m, double alpha) {
  require_taylor_domain(d_m, r_victim_m, "mean_interference_bs_ue");
  return p_bs_w * mean_pathloss_taylor(d_m, r_victim_m, alpha);
}

double mean_interference_ue_ue(double p_ue_w, double d_m, double r_interferer_m,
                               double r_victim_m, double alpha) {
  require_taylor_domain(d_m, r_interferer_m, "mean_interference_ue_ue (interferer disk)");
  require_taylor_domain(d_m, r_victim_m, "mean_interference_ue_ue (victim disk)");
  // E over the interferer position of c^-(alpha + 2k) is the BS-to-UE mean
  // with the interferer disk radius, so the victim-side Taylor terms compose
  // from three evaluations.
  const double r2 = r_victim_m * r_victim_m;
  const double t0 = mean_pathloss_taylor(d_m, r_interferer_m, alpha);
  const double t1 = mean_pathloss_taylor(d_m, r_interferer_m, alpha + 2.0);
  const double t2 = mean_pathloss_taylor(d_m, r_interferer_m, alpha + 4.0);
  return p_ue_w * (t0 + alpha * alpha * r2 / 8.0 * t1 + alpha * (alpha + 2.0) * r2 * r2 / 24.0 * t2);
}

const char* to_string(InterfererKind kind) {
  switch (kind) {
    case InterfererKind::macro_bs:
      return "macro_bs";
    case InterfererKind::small_cell_bs:
      return "small_cell_bs";
    case InterfererKind::small_cell_ue:
      return "small_cell_ue";
  }
  return "unknown";
}

double MeanInterferenceBreakdown::bs_total_w() const {
  double s = 0.0;
  for (const auto& e : per_bs) s += e.mean_w;
  return s;
}

double MeanInterferenceBreakdown::ue_total_w() const {
  double s = 0.0;
  for (const auto& e : per_ue) s += e.mean_w;
  return s;
}

MeanInterferenceBreakdown total_mean_interference(const NetworkTopology& topology,
                                                  const DuplexConfig& duplex) {
  const SmallCell& tagged = topology.tagged();
  const std::size_t tagged_index = *topology.tagged_index;
  const double rv = tagged.radius_m;

  MeanInterferenceBreakdown out;
  auto note_regime = [&](double d, double radius, const std::string& who) {
    if (taylor_regime(d, radius) == TaylorRegime::coarse) {
      std::ostringstream msg;
      msg << who << " at d = " << d << " m is within 2R of the tagged cell; closed form is coarse";
      out.warnings.push_back(msg.str());
    }
  };

  const double d_macro = distance(topology.macro.position, tagged.center);
  if (!(d_macro > rv)) {
    std::ostringstream msg;
    msg << "macro BS is " << d_macro << " m from the tagged cell centre, inside its " << rv
        << " m coverage disk; move or re-draw the tagged cell";
    throw TaylorValidityError(msg.str());
  }
  note_regime(d_macro, rv, "macro BS");
  out.per_bs.push_back({InterfererKind::macro_bs, std::nullopt,
                        mean_interference_bs_ue(topology.macro.power_w, d_macro, rv,
                                                topology.macro.alpha)});

  for (std::size_t j = 0; j < topology.cells.size(); ++j) {
    if (j == tagged_index) continue;
    const SmallCell& cell = topology.cells[j];
    const double d = distance(cell.center, tagged.center);
    note_regime(d, rv, "small cell " + std::to_string(j));
    out.per_bs.push_back({InterfererKind::small_cell_bs, j,
                          mean_interference_bs_ue(cell.power_w, d, rv, cell.alpha)});
    if (duplex.mode == DuplexMode::fd) {
      out.per_ue.push_back({InterfererKind::small_cell_ue, j,
                            mean_interference_ue_ue(duplex.ue_tx_power_w, d, cell.radius_m, rv,
                                                    cell.alpha)});
    }
  }
  out.total_w = out.bs_total_w() + out.ue_total_w();
  return out;
}

}  // namespace hcnqos
