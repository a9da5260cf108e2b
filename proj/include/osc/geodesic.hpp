#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <string_view>
#include <vector>

#include "osc/algebra.hpp"
#include "osc/group.hpp"

namespace osc {

/// The geodesic s ↦ basepoint · exp(s X).
struct Geodesic {
  AlgebraVector initial;
  Element basepoint;
  FrequencyList freqs;

  Geodesic(AlgebraVector x, FrequencyList f);
  Geodesic(AlgebraVector x, Element base, FrequencyList f);
};

/// Closed-form point at parameter s of the geodesic through e with velocity X.
Element eval_geodesic(const AlgebraVector& x, double s, const FrequencyList& freqs);
Element eval_geodesic(const Geodesic& geo, double s);
/// Analytic coordinate velocity of the geodesic through e, (z', x_1', y_1', …, t').
Eigen::VectorXd geodesic_velocity(const AlgebraVector& x, double s, const FrequencyList& freqs);

/// state = (position coords, velocity coords), each of length 2n+2.
Eigen::VectorXd geodesic_rhs(const Eigen::VectorXd& state, const FrequencyList& freqs);

enum class Rk4Kernel { Auto, Scalar, Avx2 };

/// Kernel that Auto resolves to: Avx2 when the CPU has it and OSC_FORCE_SCALAR is unset.
Rk4Kernel resolve_rk4_kernel(Rk4Kernel requested = Rk4Kernel::Auto);
std::string_view to_string(Rk4Kernel k);

/// Fixed-step RK4 of geodesic_rhs from e. The step is shrunk so that a whole
/// number of steps lands on s_end exactly.
Element integrate_geodesic(const AlgebraVector& x, double s_end, double step, const FrequencyList& freqs);
/// Batched version of integrate_geodesic over many initial vectors.
std::vector<Element> integrate_geodesics(const std::vector<AlgebraVector>& xs, double s_end, double step,
                                         const FrequencyList& freqs, Rk4Kernel kernel = Rk4Kernel::Auto);

/// The left-invariant metric in coordinates (∂z, ∂x_1, ∂y_1, …, ∂t) at p.
Eigen::MatrixXd metric_matrix(const Element& p, const FrequencyList& freqs);
double metric_at(const Element& p, const Eigen::VectorXd& u, const Eigen::VectorXd& w,
                 const FrequencyList& freqs);

/// Γ^k_{ij}, zero-based coordinate indices in the order (z, x_1, y_1, …, t).
class ChristoffelArray {
 public:
  explicit ChristoffelArray(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}
  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t k, std::size_t i, std::size_t j) { return data_[(k * dim_ + i) * dim_ + j]; }
  double operator()(std::size_t k, std::size_t i, std::size_t j) const {
    return data_[(k * dim_ + i) * dim_ + j];
  }
  /// −Γ^k_{ij} u^i u^j.
  Eigen::VectorXd contract(const Eigen::VectorXd& u) const;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Levi-Civita symbols computed from the metric coefficients, whose partial
/// derivatives are taken exactly (the coefficients are affine in x, y).
ChristoffelArray christoffel(const FrequencyList& freqs, const Element& p);
/// The table as printed in the source, symmetrised in the lower indices.
ChristoffelArray printed_christoffel(const FrequencyList& freqs, const Element& p);

struct ChristoffelDiscrepancy {
  std::size_t upper, lower1, lower2;
  double derived, printed;
};
/// Entries (k, i ≤ j) where the two tables differ by more than tolerance.
std::vector<ChristoffelDiscrepancy> christoffel_discrepancies(const FrequencyList& freqs, const Element& p,
                                                              double tolerance = 1e-12);

CausalClass causal_character(const Geodesic& geo, double tolerance = kCausalTolerance);

/// Rows "s,z,x_1,y_1,…,t" for `count` evenly spaced s in [s0, s1].
void write_samples_csv(std::ostream& os, const Geodesic& geo, double s0, double s1, std::size_t count);

}  // namespace osc
