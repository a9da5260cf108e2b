#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "osc/errors.hpp"
#include "osc/exact.hpp"
#include "osc/frequencies.hpp"

namespace osc {

/// Default threshold on |⟨X,X⟩| for float-mode causal decisions.
inline constexpr double kCausalTolerance = 1e-12;

enum class CausalClass { Lightlike, Timelike, Spacelike };

std::string_view to_string(CausalClass c);

/**
 * X = d·Z + Σ_j (b_j X_j + c_j Y_j) + a·T in 𝔬𝔰𝔠_n(λ).
 *
 * Coordinates are ordered like the basis (Z, X_1, Y_1, …, X_n, Y_n, T); `bc`
 * holds b_1, c_1, …, b_n, c_n.
 */
template <class T>
struct BasicAlgebraVector {
  T d{};
  std::vector<T> bc;
  T a{};

  static BasicAlgebraVector zero(std::size_t n) { return {T(0), std::vector<T>(2 * n, T(0)), T(0)}; }
  /// Basis vector `index` ∈ [0, 2n+2) in the order Z, X_1, Y_1, …, T.
  static BasicAlgebraVector basis(std::size_t n, std::size_t index) {
    auto v = zero(n);
    v.coord(index) = T(1);
    return v;
  }
  static BasicAlgebraVector from_coords(std::span<const T> coords) {
    if (coords.size() < 2 || coords.size() % 2 != 0)
      throw DimensionMismatch("AlgebraVector: coordinate count must be even and >= 2");
    BasicAlgebraVector v;
    v.d = coords.front();
    v.a = coords.back();
    v.bc.assign(coords.begin() + 1, coords.end() - 1);
    return v;
  }

  std::size_t n() const { return bc.size() / 2; }
  std::size_t dim() const { return bc.size() + 2; }
  T& b(std::size_t j) { return bc[2 * j]; }
  T& c(std::size_t j) { return bc[2 * j + 1]; }
  const T& b(std::size_t j) const { return bc[2 * j]; }
  const T& c(std::size_t j) const { return bc[2 * j + 1]; }

  T& coord(std::size_t i) { return i == 0 ? d : (i == dim() - 1 ? a : bc[i - 1]); }
  const T& coord(std::size_t i) const { return i == 0 ? d : (i == dim() - 1 ? a : bc[i - 1]); }
  std::vector<T> coords() const {
    std::vector<T> out;
    out.reserve(dim());
    out.push_back(d);
    out.insert(out.end(), bc.begin(), bc.end());
    out.push_back(a);
    return out;
  }

  BasicAlgebraVector& operator+=(const BasicAlgebraVector& o) {
    d += o.d;
    a += o.a;
    for (std::size_t i = 0; i < bc.size(); ++i) bc[i] += o.bc[i];
    return *this;
  }
  BasicAlgebraVector& operator*=(const T& s) {
    d *= s;
    a *= s;
    for (auto& x : bc) x *= s;
    return *this;
  }
  friend BasicAlgebraVector operator+(BasicAlgebraVector x, const BasicAlgebraVector& y) { return x += y; }
  friend BasicAlgebraVector operator*(const T& s, BasicAlgebraVector x) { return x *= s; }
  friend BasicAlgebraVector operator-(const BasicAlgebraVector& x, const BasicAlgebraVector& y) {
    return x + T(-1) * y;
  }
  friend bool operator==(const BasicAlgebraVector& x, const BasicAlgebraVector& y) {
    return x.d == y.d && x.a == y.a && x.bc == y.bc;
  }
};

using AlgebraVector = BasicAlgebraVector<double>;
using ExactAlgebraVector = BasicAlgebraVector<Rational>;

namespace detail {

template <class T>
T frequency_as(const FrequencyList& freqs, std::size_t i) {
  if constexpr (std::is_same_v<T, double>) return freqs.as_double(i);
  else return T(freqs[i]);
}

template <class T>
void check_dims(const BasicAlgebraVector<T>& x, const FrequencyList& freqs, const char* op) {
  if (x.bc.size() != 2 * freqs.n())
    throw DimensionMismatch(std::string(op) + ": vector has " + std::to_string(x.dim()) +
                            " coordinates, frequencies need " + std::to_string(freqs.dim()));
}

}  // namespace detail

/// Lie bracket from [X_i,Y_i]=Z, [T,X_i]=λ_i Y_i, [T,Y_i]=−λ_i X_i.
template <class T>
BasicAlgebraVector<T> bracket(const BasicAlgebraVector<T>& x, const BasicAlgebraVector<T>& y,
                              const FrequencyList& freqs) {
  detail::check_dims(x, freqs, "bracket");
  detail::check_dims(y, freqs, "bracket");
  auto out = BasicAlgebraVector<T>::zero(freqs.n());
  for (std::size_t j = 0; j < freqs.n(); ++j) {
    const T lambda = detail::frequency_as<T>(freqs, j);
    out.d += x.b(j) * y.c(j) - x.c(j) * y.b(j);
    out.b(j) = lambda * (y.a * x.c(j) - x.a * y.c(j));
    out.c(j) = lambda * (x.a * y.b(j) - y.a * x.b(j));
  }
  return out;
}

/// The ad-invariant form: ⟨Z,T⟩ = 1, ⟨X_i,X_i⟩ = ⟨Y_i,Y_i⟩ = 1/λ_i.
template <class T>
T inner(const BasicAlgebraVector<T>& x, const BasicAlgebraVector<T>& y, const FrequencyList& freqs) {
  detail::check_dims(x, freqs, "inner");
  detail::check_dims(y, freqs, "inner");
  T sum = x.a * y.d + x.d * y.a;
  for (std::size_t j = 0; j < freqs.n(); ++j) {
    const T lambda = detail::frequency_as<T>(freqs, j);
    sum += (x.b(j) * y.b(j) + x.c(j) * y.c(j)) / lambda;
  }
  return sum;
}

/// 2ad + Σ (b_k² + c_k²)/λ_k.
template <class T>
T causal_norm(const BasicAlgebraVector<T>& x, const FrequencyList& freqs) {
  return inner(x, x, freqs);
}

CausalClass causal_class(const AlgebraVector& x, const FrequencyList& freqs,
                         double tolerance = kCausalTolerance);
CausalClass causal_class(const ExactAlgebraVector& x, const FrequencyList& freqs);

/// Gram matrix of `inner` in the basis (Z, X_1, Y_1, …, T).
Eigen::MatrixXd gram_matrix(const FrequencyList& freqs);

}  // namespace osc
