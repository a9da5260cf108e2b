#pragma once

#include <cstddef>

// Batched fixed-step RK4 for the geodesic system.
//
// state is structure-of-arrays: component c of trajectory j lives at
// state[c * count + j]. Components are the 2n+2 positions (z, x_1, y_1, ..., t)
// followed by the 2n+2 velocities in the same order.

namespace osc::kernels {

struct Rk4Batch {
  const double* lambdas = nullptr;
  std::size_t n = 0;
  std::size_t count = 0;
  double* state = nullptr;
  double h = 0.0;
  long steps = 0;
};

void rk4_batch_scalar(const Rk4Batch& batch);
// Requires AVX2 at runtime.
void rk4_batch_avx2(const Rk4Batch& batch);
// Same as rk4_batch_scalar, restricted to trajectories [first, last).
void rk4_range_scalar(const Rk4Batch& batch, std::size_t first, std::size_t last);

}  // namespace osc::kernels
