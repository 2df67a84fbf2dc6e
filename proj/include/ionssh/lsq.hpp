#pragma once

#include <functional>
#include <vector>

namespace ionssh {

struct LsqResult {
  std::vector<double> params;
  std::vector<double> residuals;
  double cost = 0.0;  // 0.5 * sum r^2
  int iterations = 0;
  bool converged = false;
};

using ResidualFn = std::function<std::vector<double>(const std::vector<double>&)>;

/// Levenberg-Marquardt with a central-difference Jacobian. Small problems
/// only (a handful of parameters).
LsqResult levenberg_marquardt(const ResidualFn& f, std::vector<double> p0, int max_iter = 200,
                              double tol = 1e-14);

}  // namespace ionssh
