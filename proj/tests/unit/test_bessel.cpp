#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "ionssh/bessel.hpp"
#include "ionssh/constants.hpp"

using namespace ionssh;

TEST_CASE("j0 matches the standard library to 1e-14 on |x| <= 30") {
  double worst = 0.0;
  for (int i = -3000; i <= 3000; ++i) {
    const double x = i * 0.01;
    worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, std::abs(x))));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("j0 beyond the quadrature range") {
  for (double x : {40.5, 55.0, 80.0, 150.0, 1000.0}) {
    CAPTURE(x);
    CHECK(std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)) < 1e-13);
  }
}

TEST_CASE("j0 special values") {
  CHECK(bessel_j0(0.0) == 1.0);
  CHECK(std::abs(bessel_j0(kBesselZero0)) < 1e-15);
  CHECK(bessel_j0(-3.7) == bessel_j0(3.7));
  for (int i = 0; i < 2000; ++i) CHECK(std::abs(bessel_j0(i * 0.05)) <= 1.0);
}
