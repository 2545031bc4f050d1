#pragma once

#include <cmath>
#include <limits>
#include <numbers>

namespace hcnqos {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double value) {
  if (value <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(value);
}

inline constexpr double kSquareMetersPerKm2 = 1.0e6;

}  // namespace hcnqos
