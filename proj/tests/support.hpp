#pragma once

#include <initializer_list>

#include "hcnqos/effective_capacity.hpp"
#include "hcnqos/geometry.hpp"
#include "hcnqos/units.hpp"

namespace hcnqos::testing {

/// Macro at the origin of a 1000 m disk and 35 dBm / 90 m cells at the given
/// centres; cell 0 is tagged.
inline NetworkTopology toy_topology(std::initializer_list<Point> centers, double alpha = 3.0) {
  NetworkTopology t;
  t.macro = MacroBs{{}, dbm_to_watts(46.0), alpha};
  t.hard_core_m = 180.0;
  for (Point c : centers) t.cells.push_back(SmallCell{c, 90.0, dbm_to_watts(35.0), alpha});
  t.tagged_index = 0;
  return t;
}

inline LinkScenario toy_scenario(NetworkTopology t, DuplexMode mode = DuplexMode::fd, double eta = 0.0) {
  LinkScenario s;
  s.topology = std::move(t);
  s.duplex = DuplexConfig{mode, eta, 1.0, dbm_to_watts(23.0)};
  s.noise_w = dbm_to_watts(-120.0);
  return s;
}

}  // namespace hcnqos::testing
