#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "osc/exact.hpp"

namespace osc {

/// A maximal run of equal frequencies λ_{first} = … = λ_{first+size-1} = rho.
struct FrequencyRun {
  std::size_t first = 0;
  std::size_t size = 0;
  Rational rho;
};

/**
 * The frequencies λ_1, …, λ_n of Osc_n(λ_1, …, λ_n), strictly positive rationals
 * kept in the order given.
 */
class FrequencyList {
 public:
  FrequencyList() = default;
  explicit FrequencyList(std::vector<Rational> lambdas);
  FrequencyList(std::initializer_list<Rational> lambdas)
      : FrequencyList(std::vector<Rational>(lambdas)) {}

  std::size_t n() const { return lambdas_.size(); }
  /// Dimension 2n+2 of the algebra and of the group.
  std::size_t dim() const { return 2 * n() + 2; }
  const Rational& operator[](std::size_t i) const { return lambdas_[i]; }
  double as_double(std::size_t i) const { return doubles_[i]; }
  const std::vector<Rational>& values() const { return lambdas_; }

  /// Consecutive runs of equal values, as the block layout of isotropy matrices expects.
  std::vector<FrequencyRun> runs() const;
  /// Same values with equal ones made adjacent (order of first appearance kept);
  /// `permutation[i]` is the original index of the i-th canonical entry.
  FrequencyList canonical(std::vector<std::size_t>* permutation = nullptr) const;

  friend bool operator==(const FrequencyList& a, const FrequencyList& b) {
    return a.lambdas_ == b.lambdas_;
  }

 private:
  std::vector<Rational> lambdas_;
  std::vector<double> doubles_;
};

}  // namespace osc
