#include <cmath>
#include <numbers>

#include "doctest.h"
#include "osc/group.hpp"
#include "support/generators.hpp"

using namespace osc;
using osc::testing::Gen;

namespace {

const double kPi = std::numbers::pi;

ExactElement ex(ExactScalar z, std::vector<Rational> v, ExactScalar t) { return {z, std::move(v), t}; }

void check_close(const Element& a, const Element& b, double tol) {
  REQUIRE(a.v.size() == b.v.size());
  CHECK(distance(a, b) <= tol);
}

}  // namespace

TEST_SUITE("group-ops") {

TEST_CASE("identity and inverse") {
  const FrequencyList f{1, Rational(1, 2)};
  Gen g(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = g.exact_element(f);
    const auto id = ExactElement::identity(2);
    CHECK(multiply(id, a, f) == a);
    CHECK(multiply(a, id, f) == a);
    CHECK(multiply(a, invert(a, f), f).is_identity());
    CHECK(multiply(invert(a, f), a, f).is_identity());
  }
  CHECK(invert(ExactElement::identity(2), f).is_identity());
  const auto central = ex(parse_exact_scalar("3/2 + pi"), {0, 0, 0, 0}, ExactScalar::pi_times(4));
  CHECK(invert(central, f) == ex(parse_exact_scalar("-3/2 - pi"), {0, 0, 0, 0}, ExactScalar::pi_times(-4)));
}

TEST_CASE("multiply example with a quarter turn") {
  const FrequencyList f{1};
  const auto a = ex(0, {1, 0}, ExactScalar::pi_times(Rational(1, 2)));
  const auto b = ex(0, {1, 0}, 0);
  // ½·(1,0)ᵀ J R(π/2)(1,0) with J = N_{(-1)} = [[0,1],[-1,0]]: J(0,1) = (1,0).
  const auto expected = ex(Rational(1, 2), {1, 1}, ExactScalar::pi_times(Rational(1, 2)));
  CHECK(multiply(a, b, f) == expected);
  check_close(multiply(to_float(a), to_float(b), f), to_float(expected), 1e-12);
}

TEST_CASE("invert example checked by multiplying back") {
  const FrequencyList f{1};
  const auto g = ex(0, {1, 0}, ExactScalar::pi_times(Rational(1, 2)));
  const auto gi = invert(g, f);
  CHECK(gi == ex(0, {0, 1}, ExactScalar::pi_times(Rational(-1, 2))));
  CHECK(multiply(g, gi, f).is_identity());
  CHECK(invert(ex(Rational(5), {0, 0}, ExactScalar::pi_times(2)), f) ==
        ex(Rational(-5), {0, 0}, ExactScalar::pi_times(-2)));
}

TEST_CASE("conjugate examples") {
  const FrequencyList f{1};
  const auto h = ex(0, {1, 0}, 0);
  const auto g = ex(0, {0, 0}, ExactScalar::pi_times(1));
  const auto expected = ex(0, {2, 0}, ExactScalar::pi_times(1));
  CHECK(conjugate(h, g, f) == expected);
  CHECK(multiply(multiply(h, g, f), invert(h, f), f) == expected);
  CHECK(conjugate(h, ExactElement::identity(1), f).is_identity());
  Gen gen(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = gen.exact_element(f);
    CHECK(conjugate(ex(parse_exact_scalar("7/3 + 2pi"), {0, 0}, 0), x, f) == x);
  }
}

TEST_CASE("exact rotations") {
  const FrequencyList one{1};
  CHECK(exact_rotation(0, one).is_identity());
  const auto r = exact_rotation(ExactScalar::pi_times(1), one).matrix();
  CHECK(r == -Eigen::Matrix2i::Identity());
  const FrequencyList two{1, Rational(1, 2)};
  Eigen::MatrixXi expected = Eigen::MatrixXi::Identity(4, 4);
  expected.bottomRightCorner(2, 2) *= -1;
  CHECK(exact_rotation(ExactScalar::pi_times(2), two).matrix() == expected);
  CHECK_THROWS_AS(exact_rotation(ExactScalar::pi_times(Rational(1, 4)), one), ExactModeUnsupportedAngle);
  CHECK_THROWS_AS(exact_rotation(ExactScalar(1), one), ExactModeUnsupportedAngle);
  CHECK_THROWS_AS(multiply(ex(0, {1, 0}, ExactScalar(1)), ex(0, {1, 0}, 0), one), ExactModeUnsupportedAngle);
}

TEST_CASE("float rotations") {
  const FrequencyList two{1, Rational(1, 2)};
  CHECK((rotation(0, two) - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-15);
  const auto r = rotation(2 * kPi, two);
  CHECK(std::abs(r(0, 0) - 1) < 1e-12);
  CHECK(std::abs(r(2, 2) + 1) < 1e-12);
  Gen g(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = g.float_freqs(3, 3.0);
    const double s = g.uniform(-10, 10), t = g.uniform(-10, 10);
    const auto rs = rotation(s, f), rt = rotation(t, f);
    REQUIRE((rs.transpose() * rs - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-12);
    REQUIRE((rotation(s + t, f) - rs * rt).cwiseAbs().maxCoeff() <= 1e-12);
  }
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = g.freqs(2);
    const auto step = Gen::exact_t_step(f);
    const long a = g.integer(-9, 9), b = g.integer(-9, 9);
    const auto ra = exact_rotation(step * Rational(a), f).matrix();
    const auto rb = exact_rotation(step * Rational(b), f).matrix();
    REQUIRE(ra.transpose() * ra == Eigen::MatrixXi::Identity(4, 4));
    REQUIRE(exact_rotation(step * Rational(a + b), f).matrix() == ra * rb);
  }
}

TEST_CASE("associativity exact and float") {
  Gen g(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = g.freqs(static_cast<std::size_t>(g.integer(1, 3)));
    const auto a = g.exact_element(f), b = g.exact_element(f), c = g.exact_element(f);
    REQUIRE(multiply(multiply(a, b, f), c, f) == multiply(a, multiply(b, c, f), f));
    const auto fa = g.element(f.n(), 3), fb = g.element(f.n(), 3), fc = g.element(f.n(), 3);
    REQUIRE(distance(multiply(multiply(fa, fb, f), fc, f), multiply(fa, multiply(fb, fc, f), f)) <= 1e-10);
  }
}

TEST_CASE("exact and float modes agree") {
  Gen g(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = g.freqs(static_cast<std::size_t>(g.integer(1, 3)));
    const auto a = g.exact_element(f), b = g.exact_element(f);
    REQUIRE(distance(to_float(multiply(a, b, f)), multiply(to_float(a), to_float(b), f)) <= 1e-12);
    REQUIRE(distance(to_float(invert(a, f)), invert(to_float(a), f)) <= 1e-12);
    REQUIRE(distance(to_float(conjugate(a, b, f)), conjugate(to_float(a), to_float(b), f)) <= 1e-12);
  }
}

TEST_CASE("conjugation is a homomorphism depending only on (v, t)") {
  Gen g(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = g.freqs(2);
    const auto h = g.exact_element(f), a = g.exact_element(f), b = g.exact_element(f);
    REQUIRE(conjugate(h, multiply(a, b, f), f) == multiply(conjugate(h, a, f), conjugate(h, b, f), f));
    REQUIRE(conjugate(h, ExactElement::identity(2), f).is_identity());
    auto h2 = h;
    h2.z = h.z + ExactScalar(g.rational(9, 4), g.rational(9, 4));
    REQUIRE(conjugate(h2, a, f) == conjugate(h, a, f));
  }
}

TEST_CASE("power") {
  const FrequencyList f{1};
  const auto g = ex(Rational(1, 3), {1, 2}, ExactScalar::pi_times(Rational(1, 2)));
  CHECK(power(g, 0, f).is_identity());
  CHECK(power(g, 3, f) == multiply(g, multiply(g, g, f), f));
  CHECK(multiply(power(g, -2, f), power(g, 2, f), f).is_identity());
  CHECK(power(g, 4, f).t == ExactScalar::pi_times(2));
}

}
