#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "osc/algebra.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace osc;
using osc::testing::Gen;

namespace {

ExactAlgebraVector e(std::size_t n, std::size_t i) { return ExactAlgebraVector::basis(n, i); }

}  // namespace

TEST_SUITE("lie-core") {

TEST_CASE("bracket of basis vectors") {
  const FrequencyList one{1};
  const std::size_t Z = 0, X1 = 1, Y1 = 2, T = 3;
  CHECK(bracket(e(1, X1), e(1, Y1), one) == e(1, Z));
  CHECK(bracket(e(1, Y1), e(1, X1), one) == Rational(-1) * e(1, Z));
  const auto x = Gen(3).exact_algebra(1);
  CHECK(bracket(x, x, one) == ExactAlgebraVector::zero(1));
  CHECK(bracket(e(1, T), e(1, Z), one) == ExactAlgebraVector::zero(1));
}

TEST_CASE("bracket(T, X1 + Y2) with lambda = (1, 3)") {
  const FrequencyList f{1, 3};
  // basis order Z, X1, Y1, X2, Y2, T
  const auto lhs = bracket(e(2, 5), e(2, 1) + e(2, 4), f);
  const auto expected = e(2, 2) + Rational(-3) * e(2, 3);
  CHECK(lhs == expected);
  CHECK(osc::testing::bracket_by_table(e(2, 5), e(2, 1) + e(2, 4), f) == expected);
}

TEST_CASE("bracket agrees with the structure-constant table") {
  Gen g(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    const auto f = g.freqs(n);
    const auto x = g.exact_algebra(n), y = g.exact_algebra(n);
    REQUIRE(bracket(x, y, f) == osc::testing::bracket_by_table(x, y, f));
  }
}

TEST_CASE("inner product values") {
  const FrequencyList one{1};
  CHECK(inner(e(1, 0), e(1, 3), one) == 1);
  CHECK(inner(e(1, 0), e(1, 0), one) == 0);
  CHECK(inner(e(1, 3), e(1, 3), one) == 0);
  const FrequencyList two{2};
  CHECK(inner(e(1, 1), e(1, 1), two) == Rational(1, 2));
  CHECK(inner(e(1, 2), e(1, 2), two) == Rational(1, 2));
  CHECK(inner(e(1, 1), e(1, 2), two) == 0);
}

TEST_CASE("causal classes") {
  const FrequencyList one{1};
  CHECK(causal_class(e(1, 0), one) == CausalClass::Lightlike);
  CHECK(causal_class(e(1, 0) - e(1, 3), one) == CausalClass::Timelike);
  CHECK(causal_norm(e(1, 0) - e(1, 3), one) == -2);
  CHECK(causal_class(e(1, 1), one) == CausalClass::Spacelike);
  CHECK(causal_norm(e(1, 1), one) == 1);

  AlgebraVector x = AlgebraVector::zero(1);
  x.d = 1;
  x.a = -1;
  CHECK(causal_class(x, one) == CausalClass::Timelike);
  x.a = 1e-14;
  CHECK(causal_class(x, one) == CausalClass::Lightlike);
  CHECK(causal_class(x, one, 0.0) == CausalClass::Spacelike);
}

TEST_CASE("dimension mismatch is rejected") {
  const FrequencyList f{1, 2};
  CHECK_THROWS_AS(bracket(e(1, 1), e(1, 2), f), DimensionMismatch);
  CHECK_THROWS_AS(inner(e(1, 1), e(2, 2), f), DimensionMismatch);
}

TEST_CASE("ad-invariance and Jacobi hold exactly on basis triples") {
  Gen g(17);
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = g.freqs(n);
      const std::size_t dim = f.dim();
      for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
          for (std::size_t k = 0; k < dim; ++k) {
            const auto x = e(n, i), y = e(n, j), w = e(n, k);
            REQUIRE(inner(bracket(x, y, f), w, f) + inner(y, bracket(x, w, f), f) == 0);
            const auto jac = bracket(x, bracket(y, w, f), f) + bracket(y, bracket(w, x, f), f) +
                             bracket(w, bracket(x, y, f), f);
            REQUIRE(jac == ExactAlgebraVector::zero(n));
          }
    }
  }
}

TEST_CASE("inner has Lorentzian signature") {
  Gen g(5);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto f = g.freqs(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram_matrix(f));
    int neg = 0, pos = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) (es.eigenvalues()(i) < 0 ? neg : pos)++;
    CHECK(neg == 1);
    CHECK(pos == static_cast<int>(2 * n + 1));
  }
}

TEST_CASE("causal class is scale invariant") {
  Gen g(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = g.freqs(static_cast<std::size_t>(g.integer(1, 3)));
    const auto x = g.exact_algebra(f.n());
    Rational s = g.rational(9, 5);
    if (sgn(s) == 0) s = 3;
    REQUIRE(causal_class(s * x, f) == causal_class(x, f));
  }
}

}
