#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace osc {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses an integer, a fraction "a/b" or a finite decimal "1.25".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
bool is_integer(const Rational& q);
/// Nearest integer, ties away from zero.
Integer round_to_integer(const Rational& q);
Rational rational_from_double(double x);

/**
 * A number q1 + q2·π with rational q1, q2.
 *
 * {1, π} is linearly independent over ℚ, so equality and zero tests are
 * componentwise. The type is closed under addition and under multiplication
 * by rationals; a product of two factors that both carry π is rejected.
 */
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(Rational rational_part, Rational pi_part = 0);  // NOLINT: implicit from ℚ
  ExactScalar(long value) : ExactScalar(Rational(value)) {}   // NOLINT
  ExactScalar(int value) : ExactScalar(Rational(value)) {}    // NOLINT

  static ExactScalar pi_times(const Rational& coefficient) { return {0, coefficient}; }

  const Rational& rational_part() const { return q1_; }
  const Rational& pi_part() const { return q2_; }

  bool is_zero() const { return sgn(q1_) == 0 && sgn(q2_) == 0; }
  bool is_rational() const { return sgn(q2_) == 0; }
  bool is_pure_pi() const { return sgn(q1_) == 0; }

  double to_double() const;
  /// Exact sign, decided against rational enclosures of π.
  int sign() const;

  ExactScalar operator-() const { return {-q1_, -q2_}; }
  ExactScalar& operator+=(const ExactScalar& o);
  ExactScalar& operator-=(const ExactScalar& o);
  ExactScalar& operator*=(const Rational& r);
  ExactScalar& operator/=(const Rational& r);

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const Rational& r) { return a *= r; }
  friend ExactScalar operator*(const Rational& r, ExactScalar a) { return a *= r; }
  friend ExactScalar operator/(ExactScalar a, const Rational& r) { return a /= r; }
  /// Throws NonRepresentable when both factors carry a π component.
  friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.q1_ == b.q1_ && a.q2_ == b.q2_;
  }

 private:
  Rational q1_;
  Rational q2_;
};

/// Returns r with x = r·step when such a rational exists (step ≠ 0).
std::optional<Rational> ratio(const ExactScalar& x, const ExactScalar& step);
/// x ∈ step·ℤ.
bool is_integer_multiple(const ExactScalar& x, const ExactScalar& step);

/// Grammar: sums of terms "Q", "Q pi", "Q*pi", "pi/N", "Q pi/N", e.g.
/// "1/2 + 3/4 pi", "2pi", "-pi/2".
ExactScalar parse_exact_scalar(std::string_view text);
/// Canonical form "Q", "Q pi" or "Q + Q pi".
std::string to_string(const ExactScalar& x);
std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

}  // namespace osc
