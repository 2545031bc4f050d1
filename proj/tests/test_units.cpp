#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "hcnqos/units.hpp"

using namespace hcnqos;

TEST_CASE("dBm conversions at reference powers") {
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dbm_to_watts(46.0) == doctest::Approx(39.810717055).epsilon(1e-10));
  CHECK(dbm_to_watts(35.0) == doctest::Approx(3.16227766017).epsilon(1e-10));
  CHECK(dbm_to_watts(23.0) == doctest::Approx(0.199526231497).epsilon(1e-10));
  CHECK(dbm_to_watts(-120.0) == doctest::Approx(1e-15).epsilon(1e-12));
}

TEST_CASE("dBm round trip") {
  for (double dbm : {-120.0, -3.5, 0.0, 23.0, 46.0}) {
    CHECK(watts_to_dbm(dbm_to_watts(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
  }
}

TEST_CASE("dB to linear") {
  CHECK(db_to_linear(-80.0) == doctest::Approx(1e-8).epsilon(1e-12));
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(db_to_linear(-INFINITY) == 0.0);
  CHECK(linear_to_db(1e-5) == doctest::Approx(-50.0));
  CHECK(std::isinf(linear_to_db(0.0)));
}
