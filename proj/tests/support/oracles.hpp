#pragma once

#include <vector>

#include "osc/algebra.hpp"

namespace osc::testing {

// Structure constants of the oscillator algebra written out entry by entry:
// table[p][q] is [e_p, e_q] in the basis (Z, X_1, Y_1, …, T).
template <class T>
std::vector<std::vector<BasicAlgebraVector<T>>> structure_table(const FrequencyList& freqs) {
  const std::size_t dim = freqs.dim(), n = freqs.n(), tt = dim - 1;
  std::vector<std::vector<BasicAlgebraVector<T>>> table(
      dim, std::vector<BasicAlgebraVector<T>>(dim, BasicAlgebraVector<T>::zero(n)));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t xi = 1 + 2 * i, yi = xi + 1;
    T lam;
    if constexpr (std::is_same_v<T, double>) lam = freqs.as_double(i);
    else lam = T(freqs[i]);
    table[xi][yi].d = T(1);
    table[yi][xi].d = T(-1);
    table[tt][xi].coord(yi) = lam;
    table[xi][tt].coord(yi) = -lam;
    table[tt][yi].coord(xi) = -lam;
    table[yi][tt].coord(xi) = lam;
  }
  return table;
}

template <class T>
BasicAlgebraVector<T> bracket_by_table(const BasicAlgebraVector<T>& x, const BasicAlgebraVector<T>& y,
                                       const FrequencyList& freqs) {
  const auto table = structure_table<T>(freqs);
  auto out = BasicAlgebraVector<T>::zero(freqs.n());
  for (std::size_t p = 0; p < freqs.dim(); ++p)
    for (std::size_t q = 0; q < freqs.dim(); ++q) {
      const T w = x.coord(p) * y.coord(q);
      if (w != T(0)) out += w * table[p][q];
    }
  return out;
}

}  // namespace osc::testing
