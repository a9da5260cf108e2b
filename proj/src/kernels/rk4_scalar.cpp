#include "rk4.hpp"

#include <vector>

namespace osc::kernels {

namespace {

// f(y) for one trajectory stored contiguously in y[0, 2*dim).
void rhs(const double* lambdas, std::size_t n, const double* y, double* dy) {
  const std::size_t dim = 2 * n + 2;
  const double* p = y;
  const double* u = y + dim;
  double* dp = dy;
  double* du = dy + dim;
  for (std::size_t c = 0; c < dim; ++c) dp[c] = u[c];
  const double ut = u[dim - 1];
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = lambdas[i];
    const double x = p[1 + 2 * i], yy = p[2 + 2 * i];
    const double ux = u[1 + 2 * i], uy = u[2 + 2 * i];
    acc = acc + lam * (ux * x + uy * yy);
    du[1 + 2 * i] = -((lam * uy) * ut);
    du[2 + 2 * i] = (lam * ux) * ut;
  }
  du[0] = (0.5 * ut) * acc;
  du[dim - 1] = 0.0;
}

}  // namespace

void rk4_range_scalar(const Rk4Batch& b, std::size_t first, std::size_t last) {
  const std::size_t width = 2 * (2 * b.n + 2);
  std::vector<double> y(width), tmp(width), k1(width), k2(width), k3(width), k4(width);
  const double hh = b.h * 0.5;
  const double h6 = b.h / 6.0;
  for (std::size_t j = first; j < last; ++j) {
    for (std::size_t c = 0; c < width; ++c) y[c] = b.state[c * b.count + j];
    for (long step = 0; step < b.steps; ++step) {
      rhs(b.lambdas, b.n, y.data(), k1.data());
      for (std::size_t c = 0; c < width; ++c) tmp[c] = y[c] + hh * k1[c];
      rhs(b.lambdas, b.n, tmp.data(), k2.data());
      for (std::size_t c = 0; c < width; ++c) tmp[c] = y[c] + hh * k2[c];
      rhs(b.lambdas, b.n, tmp.data(), k3.data());
      for (std::size_t c = 0; c < width; ++c) tmp[c] = y[c] + b.h * k3[c];
      rhs(b.lambdas, b.n, tmp.data(), k4.data());
      for (std::size_t c = 0; c < width; ++c) {
        double s = k1[c] + 2.0 * k2[c];
        s = s + 2.0 * k3[c];
        s = s + k4[c];
        y[c] = y[c] + h6 * s;
      }
    }
    for (std::size_t c = 0; c < width; ++c) b.state[c * b.count + j] = y[c];
  }
}

void rk4_batch_scalar(const Rk4Batch& b) { rk4_range_scalar(b, 0, b.count); }

}  // namespace osc::kernels
