#include <Eigen/LU>

#include "doctest.h"
#include "osc/geodesic.hpp"
#include "osc/lattice.hpp"
#include "support/families.hpp"
#include "support/generators.hpp"

using namespace osc;
using osc::testing::Gen;

namespace {

ExactElement ex(ExactScalar z, std::vector<Rational> v, ExactScalar t) { return {z, std::move(v), t}; }
ExactScalar pi(Rational r) { return ExactScalar::pi_times(r); }

ExactElement random_member(Gen& g, const LatticeSpec& spec, long bound) {
  std::vector<Integer> iv;
  for (std::size_t i = 0; i < 2 * spec.freqs().n(); ++i) iv.emplace_back(g.integer(-bound, bound));
  return member_with(spec, g.integer(-bound, bound), iv, g.integer(-bound, bound));
}

}  // namespace

TEST_SUITE("lattice-lab") {

TEST_CASE("membership examples") {
  const auto l20 = LatticeSpec::dim4(2, Dim4Angle::TwoPi);
  CHECK(contains(l20, ex(Rational(1, 4), {3, -1}, pi(2))));
  CHECK_FALSE(contains(l20, ex(Rational(1, 8), {3, -1}, pi(2))));
  CHECK_FALSE(contains(l20, ex(Rational(1, 4), {Rational(1, 2), -1}, pi(2))));
  CHECK_FALSE(contains(l20, ex(Rational(1, 4), {3, -1}, pi(1))));
  CHECK_FALSE(contains(l20, ex(ExactScalar(Rational(1, 4), 1), {3, -1}, pi(2))));
  CHECK_FALSE(contains(l20, ex(Rational(1, 4), {3, -1}, ExactScalar(2))));
  for (const auto& spec : osc::testing::all_closed_families())
    CHECK(contains(spec, ExactElement::identity(spec.freqs().n())));
  const auto tw = LatticeSpec::twisted(LatticeSpec::dim4(1, Dim4Angle::TwoPi), 1);
  CHECK_FALSE(contains(tw, ex(0, {0, 0}, pi(2))));
  CHECK(contains(tw, ex(pi(2), {0, 0}, pi(2))));
  CHECK_THROWS_AS(contains(l20, ex(0, {0, 0, 0, 0}, 0)), DimensionMismatch);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(LatticeSpec::dim4(0, Dim4Angle::Pi), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec::dim6(1, 2, 4, 1), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec::dim6(1, 1, 2, 2), InvalidSpec);
  CHECK_THROWS_AS(LatticeSpec::dim6(1, 1, 1, 3), InvalidSpec);
  CHECK_NOTHROW(LatticeSpec::dim6(1, 1, 2, 1));
  CHECK(parse_dim4_angle("pi/2") == Dim4Angle::HalfPi);
  CHECK(parse_dim4_angle("0") == Dim4Angle::TwoPi);
  CHECK_THROWS_AS(parse_dim4_angle("pi/3"), InvalidSpec);
  CHECK(LatticeSpec::dim6(2, 1, 3, 4).freqs() == FrequencyList{1, Rational(1, 3)});
}

TEST_CASE("profiles") {
  for (long n = 1; n <= 3; ++n) {
    const auto p = profile(LatticeSpec::dim4(n, Dim4Angle::TwoPi));
    CHECK(p.t0 == pi(2));
    CHECK(p.K0 == 1);
    CHECK(p.central_w == ExactScalar(Rational(1, 2 * n)));
    CHECK(p.has_pure_t);
    CHECK(profile(LatticeSpec::dim4(n, Dim4Angle::Pi)).K0 == 2);
    const auto h = profile(LatticeSpec::dim4(n, Dim4Angle::HalfPi));
    CHECK(h.t0 == pi(Rational(1, 2)));
    CHECK(h.K0 == 4);
    for (long m = 1; m <= 3; ++m)
      CHECK_FALSE(profile(LatticeSpec::twisted(LatticeSpec::dim4(n, Dim4Angle::TwoPi), m)).has_pure_t);
  }
  CHECK(profile(LatticeSpec::dim6(1, 2, 3, 1)).K0 == 1);
  CHECK(profile(LatticeSpec::dim6(1, 1, 3, 4)).K0 == 4);
  CHECK(profile(LatticeSpec::dim6(1, 2, 1, 2)).K0 == 2);
  CHECK(profile(LatticeSpec::twisted(LatticeSpec::dim4(1, Dim4Angle::TwoPi), 0)).has_pure_t);
}

TEST_CASE("K0 is minimal and closes every rotation block") {
  for (const auto& spec : osc::testing::all_closed_families()) {
    const auto p = profile(spec);
    const auto& f = spec.freqs();
    CHECK(exact_rotation(p.t0 * Rational(p.K0), f).is_identity());
    for (Integer k = 1; k < p.K0; ++k) CHECK_FALSE(exact_rotation(p.t0 * Rational(k), f).is_identity());
    // t0 = 2π k_i / (K0 λ_i) with integer k_i
    for (std::size_t i = 0; i < f.n(); ++i) CHECK(is_integer(Rational(p.t0.pi_part() * p.K0 * f[i] / 2)));
  }
}

TEST_CASE("distinguished elements") {
  CHECK(central_element(LatticeSpec::dim4(3, Dim4Angle::TwoPi)) == ex(Rational(1, 6), {0, 0}, 0));
  for (long q : {1, 3}) {
    const auto pt = pure_t_element(LatticeSpec::dim6(2, 1, q, 1));
    REQUIRE(pt);
    CHECK(*pt == ex(0, {0, 0, 0, 0}, pi(2 * q)));
  }
  CHECK_FALSE(pure_t_element(LatticeSpec::twisted(LatticeSpec::dim4(1, Dim4Angle::TwoPi), 2)));
  for (const auto& spec : osc::testing::all_closed_families()) {
    CHECK(contains(spec, central_element(spec)));
    const auto pt = pure_t_element(spec);
    CHECK(pt.has_value() == profile(spec).has_pure_t);
    if (pt) {
      CHECK(contains(spec, *pt));
      CHECK_FALSE(pt->t.is_zero());
    }
    for (const auto& g : generators(spec)) CHECK(contains(spec, g));
  }
}

TEST_CASE("closure under g h^-1") {
  Gen g(43);
  for (const auto& spec : osc::testing::all_closed_families()) {
    for (int trial = 0; trial < 40; ++trial) {
      const auto a = random_member(g, spec, 6), b = random_member(g, spec, 6);
      REQUIRE(contains(spec, a));
      REQUIRE(contains(spec, multiply(a, invert(b, spec.freqs()), spec.freqs())));
    }
  }
}

TEST_CASE("discreteness and t-components") {
  Gen g(47);
  for (const auto& spec : osc::testing::all_closed_families()) {
    const auto p = profile(spec);
    bool t0_seen = false;
    for (int trial = 0; trial < 60; ++trial) {
      const auto a = random_member(g, spec, 3);
      REQUIRE(is_integer_multiple(a.t, p.t0));
      if (a.t == p.t0) t0_seen = true;
      if (a.is_identity()) continue;
      // some coordinate is at least one grid step away from 0
      bool far = a.t.sign() != 0;
      for (const auto& x : a.v) far = far || sgn(x) != 0;
      if (!far) far = abs(a.z.rational_part()) >= p.central_w.rational_part() || !a.z.is_rational();
      REQUIRE(far);
    }
    CHECK((t0_seen || contains(spec, member_with(spec, 0, std::vector<Integer>(2 * spec.freqs().n(), 0), 1))));
    CHECK(member_with(spec, 0, std::vector<Integer>(2 * spec.freqs().n(), 0), 1).t == p.t0);
  }
}

TEST_CASE("R(t0) preserves the integer v-lattice") {
  for (const auto& spec : osc::testing::all_closed_families()) {
    const auto r = exact_rotation(profile(spec).t0, spec.freqs()).matrix();
    CHECK(std::abs(r.cast<double>().determinant()) == doctest::Approx(1));
    CHECK((r.cwiseAbs().array() <= 1).all());
  }
}

TEST_CASE("lightlike geodesics reach (0, 0, K0 t0)") {
  Gen g(53);
  for (const auto& spec : osc::testing::all_closed_families()) {
    const auto p = profile(spec);
    const auto& f = spec.freqs();
    for (int trial = 0; trial < 10; ++trial) {
      auto x = g.algebra(f.n(), 2);
      if (std::abs(x.a) < 0.1) x.a = 0.5;
      double q = 0;
      for (std::size_t i = 0; i < f.n(); ++i) q += (x.b(i) * x.b(i) + x.c(i) * x.c(i)) / f.as_double(i);
      x.d = -q / (2 * x.a);
      REQUIRE(causal_class(x, f, 1e-9) == CausalClass::Lightlike);
      const double big_t = p.t0.to_double() * p.K0.get_d();
      Element target = Element::identity(f.n());
      target.t = big_t;
      REQUIRE(distance(eval_geodesic(x, big_t / x.a, f), target) <= 1e-9);
    }
  }
}

TEST_CASE("nearest member") {
  const auto spec = LatticeSpec::twisted(LatticeSpec::dim4(2, Dim4Angle::Pi), 1);
  const auto m = member_with(spec, 3, {Integer(-1), Integer(2)}, 2);
  Element near = to_float(m);
  near.z += 0.01;
  near.v(0) -= 0.2;
  near.t += 0.3;
  CHECK(nearest_member(spec, near) == m);
}

TEST_CASE("generator search agrees with closed-form membership") {
  const auto spec = LatticeSpec::dim4(1, Dim4Angle::HalfPi);
  const auto gl = LatticeSpec::generator_list(spec.freqs(), generators(spec), 4);
  Gen g(59);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Integer> iv{Integer(g.integer(-1, 1)), Integer(g.integer(-1, 1))};
    const auto a = member_with(spec, g.integer(-1, 1), iv, g.integer(-1, 1));
    bool found = false;
    try {
      found = contains(gl, a);
    } catch (const MembershipUndecidable&) {
      continue;
    }
    CHECK(found);
  }
  CHECK(contains(gl, ExactElement::identity(1)));
  CHECK_THROWS_AS(contains(gl, ex(Rational(1, 3), {0, 0}, 0)), MembershipUndecidable);
  CHECK_THROWS_AS(profile(gl), UnsupportedSpec);
}

TEST_CASE("product with a line") {
  const auto base = LatticeSpec::dim4(1, Dim4Angle::TwoPi);
  const auto e = ExactElement::identity(1);
  const auto exact = LatticeSpec::product_line(base, {LineLattice::Kind::Exact, pi(Rational(1, 2)), ""});
  CHECK(contains(exact, e, pi(Rational(3, 2))));
  CHECK_FALSE(contains(exact, e, pi(Rational(1, 3))));
  CHECK_THROWS_AS(contains(exact, e), UnsupportedSpec);
  const auto sq = LatticeSpec::product_line(base, {LineLattice::Kind::Square, Rational(1, 4), ""});
  CHECK(contains(sq, e, Rational(3, 2)));
  CHECK_FALSE(contains(sq, e, Rational(1, 3)));
  CHECK_FALSE(contains(sq, e, pi(1)));
  const auto two_pi = LatticeSpec::product_line(base, {LineLattice::Kind::Square, pi(2), ""});
  CHECK_FALSE(contains(two_pi, e, Rational(1)));
  CHECK(contains(two_pi, e, 0));
  const auto irr = LatticeSpec::product_line(base, {LineLattice::Kind::Irrational, 0, "e"});
  CHECK(contains(irr, e, 0));
  CHECK_THROWS_AS(contains(irr, e, Rational(1)), MembershipUndecidable);
  CHECK_THROWS_AS(LatticeSpec::product_line(base, {LineLattice::Kind::Square, -1, ""}), InvalidSpec);
}

}
