#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "ionssh/linalg.hpp"
#include "ionssh/simd/kernels.hpp"

namespace ionssh {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-9;
  double initial_step = 0.0;  // 0: automatic
  long max_steps = 50'000'000;
};

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
  long evaluations = 0;
  double min_step = 0.0;
  double max_step = 0.0;
};

/// y = H(t) x
using ApplyH = std::function<void(double t, const cplx* x, cplx* y)>;

/// Called once per output time with the dense-output state.
using OutputFn = std::function<void(std::size_t index, const std::vector<cplx>& psi)>;

/// Integrates i dpsi/dt = H(t) psi with the Dormand-Prince 5(4) pair and its
/// fourth-order continuous extension. `t_out` must be non-decreasing and
/// >= t0. Throws NumericalError on step-size underflow or when max_steps is
/// exhausted. On return `psi` holds the state at t_out.back().
OdeStats integrate_schrodinger(const ApplyH& h, std::vector<cplx>& psi, double t0,
                               const std::vector<double>& t_out, const OutputFn& out,
                               const OdeOptions& opt = {},
                               const simd::KernelTable& k = simd::active_kernels());

}  // namespace ionssh
