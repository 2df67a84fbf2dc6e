#include <doctest.h>

#include <random>

#include "ionssh/error.hpp"
#include "ionssh/linalg.hpp"

using namespace ionssh;

namespace {

RealMatrix random_symmetric(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

}  // namespace

TEST_CASE("eigh reconstructs random symmetric matrices") {
  for (std::size_t n : {1u, 2u, 3u, 10u, 50u}) {
    CAPTURE(n);
    const RealMatrix a = random_symmetric(n, 3 + n);
    const SymmetricEigen e = eigh(a);
    for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k] >= e.values[k - 1]);
    const RealMatrix vtv = multiply(transpose(e.vectors), e.vectors);
    CHECK(max_abs_diff(vtv, RealMatrix::identity(n)) < 1e-12);
    RealMatrix d(n, n);
    for (std::size_t k = 0; k < n; ++k) d(k, k) = e.values[k];
    const RealMatrix back = multiply(multiply(e.vectors, d), transpose(e.vectors));
    CHECK(max_abs_diff(back, a) < 1e-11);
  }
}

TEST_CASE("eigh of a diagonal and of a degenerate matrix") {
  RealMatrix a(3, 3);
  a(0, 0) = 3;
  a(1, 1) = -1;
  a(2, 2) = 2;
  const auto e = eigh(a);
  CHECK(e.values[0] == doctest::Approx(-1));
  CHECK(e.values[1] == doctest::Approx(2));
  CHECK(e.values[2] == doctest::Approx(3));

  const auto id = eigh(RealMatrix::identity(4));
  for (double v : id.values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("solve with partial pivoting") {
  RealMatrix a(3, 3);
  a(0, 0) = 0; a(0, 1) = 2; a(0, 2) = 1;
  a(1, 0) = 1; a(1, 1) = 1; a(1, 2) = 0;
  a(2, 0) = 4; a(2, 1) = 0; a(2, 2) = 1;
  const auto x = solve(a, {5, 3, 5});
  CHECK(x[0] == doctest::Approx(1));
  CHECK(x[1] == doctest::Approx(2));
  CHECK(x[2] == doctest::Approx(1));
  CHECK_THROWS_AS(solve(RealMatrix(2, 2), {1, 1}), NumericalError);
}
