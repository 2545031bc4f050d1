#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hcnqos/channel.hpp"
#include "hcnqos/geometry.hpp"

namespace hcnqos {

// Disk-averaged path loss E[|x|^-alpha] from a point at distance d to a UE
// uniformly placed in a disk of radius R, and the mean interference terms
// built from it. The closed forms use the three-term Taylor bracket
//   d^-a [1 + a^2/8 (R^4/(3d^4) + R^2/d^2) + a/4 R^4/(3d^4)]
// which requires d > R and loses accuracy quickly below d = 2R.

enum class TaylorRegime { invalid, coarse, accurate };

TaylorRegime taylor_regime(double d_m, double radius_m);

/// Throws TaylorValidityError unless d > R.
double mean_pathloss_taylor(double d_m, double radius_m, double alpha);

/// Adaptive 2-D quadrature of the same disk average, used as the oracle for
/// the closed form. `angular_offset` rotates the point around the disk
/// centre and must not change the result. Throws ConvergenceError when
/// d <= R or the error estimate exceeds `rel_tol`.
double mean_pathloss_numeric(double d_m, double radius_m, double alpha, double rel_tol = 1e-8,
                             double angular_offset = 0.0);

/// Mean interference from a BS at distance d on a UE uniform in a disk of
/// radius r_victim. Fading has unit mean, so it drops out.
double mean_interference_bs_ue(double p_bs_w, double d_m, double r_victim_m, double alpha);

/// Mean interference between two UEs uniform in disks of radius
/// r_interferer and r_victim whose centres are d apart.
double mean_interference_ue_ue(double p_ue_w, double d_m, double r_interferer_m,
                               double r_victim_m, double alpha);

enum class InterfererKind { macro_bs, small_cell_bs, small_cell_ue };

const char* to_string(InterfererKind kind);

struct InterfererMean {
  InterfererKind kind = InterfererKind::small_cell_bs;
  std::optional<std::size_t> cell;  // empty for the macro BS
  double mean_w = 0.0;
};

struct MeanInterferenceBreakdown {
  std::vector<InterfererMean> per_bs;
  std::vector<InterfererMean> per_ue;
  double total_w = 0.0;
  std::vector<std::string> warnings;

  double bs_total_w() const;
  double ue_total_w() const;
};

/// Mean interference on the tagged UE under the worst-case co-channel
/// assumption: every other BS (macro included) transmits in the tagged RB
/// and, in FD, every other small cell has one active UE. The macro-attached
/// UE is not an interferer. HD returns an empty per_ue list.
MeanInterferenceBreakdown total_mean_interference(const NetworkTopology& topology,
                                                  const DuplexConfig& duplex);

}  // namespace hcnqos
