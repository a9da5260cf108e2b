#include "osc/algebra.hpp"

#include <cmath>

namespace osc {

std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Lightlike: return "lightlike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Spacelike: return "spacelike";
  }
  return "unknown";
}

CausalClass causal_class(const AlgebraVector& x, const FrequencyList& freqs, double tolerance) {
  const double q = causal_norm(x, freqs);
  if (std::abs(q) <= tolerance) return CausalClass::Lightlike;
  return q < 0 ? CausalClass::Timelike : CausalClass::Spacelike;
}

CausalClass causal_class(const ExactAlgebraVector& x, const FrequencyList& freqs) {
  const Rational q = causal_norm(x, freqs);
  if (sgn(q) == 0) return CausalClass::Lightlike;
  return sgn(q) < 0 ? CausalClass::Timelike : CausalClass::Spacelike;
}

Eigen::MatrixXd gram_matrix(const FrequencyList& freqs) {
  const auto dim = static_cast<Eigen::Index>(freqs.dim());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  g(0, dim - 1) = g(dim - 1, 0) = 1.0;
  for (std::size_t j = 0; j < freqs.n(); ++j) {
    const auto i = static_cast<Eigen::Index>(1 + 2 * j);
    g(i, i) = g(i + 1, i + 1) = 1.0 / freqs.as_double(j);
  }
  return g;
}

}  // namespace osc
