#pragma once

namespace ionssh {

/// Zeroth-order Bessel function of the first kind. Accurate to ~1e-15
/// absolute for |x| <= 40 and to the asymptotic series beyond.
double bessel_j0(double x);

}  // namespace ionssh
