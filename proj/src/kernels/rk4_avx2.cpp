#include <immintrin.h>

#include <cstdlib>
#include <memory>

#include "rk4.hpp"

// Four trajectories per lane group. The arithmetic mirrors rk4_scalar.cpp
// operation for operation (no FMA), so results match the scalar kernel.

namespace osc::kernels {

namespace {

void rhs4(const double* lambdas, std::size_t n, const __m256d* y, __m256d* dy) {
  const std::size_t dim = 2 * n + 2;
  const __m256d* p = y;
  const __m256d* u = y + dim;
  __m256d* dp = dy;
  __m256d* du = dy + dim;
  for (std::size_t c = 0; c < dim; ++c) dp[c] = u[c];
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ut = u[dim - 1];
  __m256d acc = zero;
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d lam = _mm256_set1_pd(lambdas[i]);
    const __m256d x = p[1 + 2 * i], yy = p[2 + 2 * i];
    const __m256d ux = u[1 + 2 * i], uy = u[2 + 2 * i];
    const __m256d inner = _mm256_add_pd(_mm256_mul_pd(ux, x), _mm256_mul_pd(uy, yy));
    acc = _mm256_add_pd(acc, _mm256_mul_pd(lam, inner));
    du[1 + 2 * i] = _mm256_sub_pd(zero, _mm256_mul_pd(_mm256_mul_pd(lam, uy), ut));
    du[2 + 2 * i] = _mm256_mul_pd(_mm256_mul_pd(lam, ux), ut);
  }
  du[0] = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(0.5), ut), acc);
  du[dim - 1] = zero;
}

}  // namespace

void rk4_batch_avx2(const Rk4Batch& b) {
  const std::size_t width = 2 * (2 * b.n + 2);
  struct FreeDeleter {
    void operator()(void* p) const { std::free(p); }
  };
  std::unique_ptr<void, FreeDeleter> scratch(std::aligned_alloc(32, 6 * width * sizeof(__m256d)));
  auto* base = static_cast<__m256d*>(scratch.get());
  __m256d* y = base;
  __m256d* tmp = base + width;
  __m256d* k1 = base + 2 * width;
  __m256d* k2 = base + 3 * width;
  __m256d* k3 = base + 4 * width;
  __m256d* k4 = base + 5 * width;
  const __m256d hh = _mm256_set1_pd(b.h * 0.5);
  const __m256d h = _mm256_set1_pd(b.h);
  const __m256d h6 = _mm256_set1_pd(b.h / 6.0);
  const __m256d two = _mm256_set1_pd(2.0);
  const std::size_t full = b.count - b.count % 4;
  for (std::size_t j = 0; j < full; j += 4) {
    for (std::size_t c = 0; c < width; ++c) y[c] = _mm256_loadu_pd(b.state + c * b.count + j);
    for (long step = 0; step < b.steps; ++step) {
      rhs4(b.lambdas, b.n, y, k1);
      for (std::size_t c = 0; c < width; ++c) tmp[c] = _mm256_add_pd(y[c], _mm256_mul_pd(hh, k1[c]));
      rhs4(b.lambdas, b.n, tmp, k2);
      for (std::size_t c = 0; c < width; ++c) tmp[c] = _mm256_add_pd(y[c], _mm256_mul_pd(hh, k2[c]));
      rhs4(b.lambdas, b.n, tmp, k3);
      for (std::size_t c = 0; c < width; ++c) tmp[c] = _mm256_add_pd(y[c], _mm256_mul_pd(h, k3[c]));
      rhs4(b.lambdas, b.n, tmp, k4);
      for (std::size_t c = 0; c < width; ++c) {
        __m256d s = _mm256_add_pd(k1[c], _mm256_mul_pd(two, k2[c]));
        s = _mm256_add_pd(s, _mm256_mul_pd(two, k3[c]));
        s = _mm256_add_pd(s, k4[c]);
        y[c] = _mm256_add_pd(y[c], _mm256_mul_pd(h6, s));
      }
    }
    for (std::size_t c = 0; c < width; ++c) _mm256_storeu_pd(b.state + c * b.count + j, y[c]);
  }
  rk4_range_scalar(b, full, b.count);
}

}  // namespace osc::kernels
