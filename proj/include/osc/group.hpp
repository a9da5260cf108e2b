#pragma once

#include <Eigen/Core>

#include <iosfwd>
#include <vector>

#include "osc/exact.hpp"
#include "osc/frequencies.hpp"

namespace osc {

/// A point (z, v, t) of Osc_n in double precision.
struct Element {
  double z = 0.0;
  Eigen::VectorXd v;
  double t = 0.0;

  static Element identity(std::size_t n) { return {0.0, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * n)), 0.0}; }
  std::size_t n() const { return static_cast<std::size_t>(v.size()) / 2; }
  /// Coordinates (z, x_1, y_1, …, t).
  Eigen::VectorXd coords() const;
  static Element from_coords(const Eigen::VectorXd& c);
};

/// A point (z, v, t) with z, t ∈ ℚ+ℚπ and v ∈ ℚ^{2n}.
struct ExactElement {
  ExactScalar z;
  std::vector<Rational> v;
  ExactScalar t;

  static ExactElement identity(std::size_t n) { return {0, std::vector<Rational>(2 * n, Rational(0)), 0}; }
  std::size_t n() const { return v.size() / 2; }
  bool is_identity() const;
  friend bool operator==(const ExactElement& a, const ExactElement& b) {
    return a.z == b.z && a.v == b.v && a.t == b.t;
  }
};

Element to_float(const ExactElement& g);
std::string to_string(const ExactElement& g);
std::ostream& operator<<(std::ostream& os, const ExactElement& g);

/**
 * R(t) in exact mode: block i turns by quarters[i]·π/2 (taken mod 4), so the
 * matrix is a signed permutation.
 */
struct ExactRotation {
  std::vector<int> quarters;

  std::vector<Rational> apply(const std::vector<Rational>& v) const;
  /// Dense 2n×2n matrix with entries in {0, ±1}.
  Eigen::MatrixXi matrix() const;
  bool is_identity() const;
};

/// Throws ExactModeUnsupportedAngle unless every λ_i·t ∈ (π/2)ℤ.
ExactRotation exact_rotation(const ExactScalar& t, const FrequencyList& freqs);
/// Whether exact_rotation(t, freqs) would succeed.
bool has_exact_rotation(const ExactScalar& t, const FrequencyList& freqs);

Eigen::MatrixXd rotation(double t, const FrequencyList& freqs);
Eigen::VectorXd rotate(double t, const Eigen::VectorXd& v, const FrequencyList& freqs);

/// Σ_i (u_{x_i} w_{y_i} − u_{y_i} w_{x_i}), i.e. uᵀJw with J(x, y) = (y, −x).
double symplectic(const Eigen::VectorXd& u, const Eigen::VectorXd& w);
Rational symplectic(const std::vector<Rational>& u, const std::vector<Rational>& w);

Element multiply(const Element& g1, const Element& g2, const FrequencyList& freqs);
Element invert(const Element& g, const FrequencyList& freqs);
Element conjugate(const Element& h, const Element& g, const FrequencyList& freqs);

ExactElement multiply(const ExactElement& g1, const ExactElement& g2, const FrequencyList& freqs);
ExactElement invert(const ExactElement& g, const FrequencyList& freqs);
ExactElement conjugate(const ExactElement& h, const ExactElement& g, const FrequencyList& freqs);
/// g^k for any integer k.
ExactElement power(const ExactElement& g, long k, const FrequencyList& freqs);

/// Max-norm distance between coordinates.
double distance(const Element& a, const Element& b);

}  // namespace osc
