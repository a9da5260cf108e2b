#include <cmath>

#include "doctest.h"
#include "osc/quotient.hpp"
#include "support/families.hpp"
#include "support/generators.hpp"

using namespace osc;
using osc::testing::Gen;

namespace {

ExactScalar pi(Rational r) { return ExactScalar::pi_times(r); }

AlgebraVector random_lightlike(Gen& g, const FrequencyList& f) {
  auto x = AlgebraVector::zero(f.n());
  x.a = g.uniform(0.3, 2.0) * (g.coin() ? 1 : -1);
  double sum = 0;
  for (std::size_t j = 0; j < f.n(); ++j) {
    x.b(j) = g.uniform(-2, 2);
    x.c(j) = g.uniform(-2, 2);
    sum += (x.b(j) * x.b(j) + x.c(j) * x.c(j)) / f.as_double(j);
  }
  x.d = -sum / (2 * x.a);
  return x;
}

void check_certificate(const LatticeSpec& spec, const ClosedGeodesicCertificate& c, CausalClass expected) {
  CHECK(c.causal == expected);
  CHECK(causal_class(c.initial, spec.freqs()) == expected);
  REQUIRE(c.exact_initial);
  CHECK(contains(spec, c.lattice_point));
  const Element end = eval_geodesic(c.initial, c.s_star, spec.freqs());
  CHECK(distance(end, to_float(c.lattice_point)) <= kLatticeHitTolerance);
  // Exact causal norm in ℚ+ℚπ is unavailable (π² terms), so recompute it in long double.
  long double q = 2.0L * c.initial.a * c.initial.d;
  for (std::size_t j = 0; j < spec.freqs().n(); ++j)
    q += (static_cast<long double>(c.initial.b(j)) * c.initial.b(j) +
          static_cast<long double>(c.initial.c(j)) * c.initial.c(j)) /
         spec.freqs().as_double(j);
  CHECK((expected == CausalClass::Timelike ? q < 0 : q > 0));
}

}  // namespace

TEST_SUITE("quotient-classifier") {

TEST_CASE("lightlike verdicts") {
  const auto l10 = LatticeSpec::dim4(1, Dim4Angle::TwoPi);
  const auto v = classify_lightlike(l10);
  CHECK(v.kind == LightlikeVerdict::Kind::AllClosed);
  REQUIRE(v.witness);
  CHECK(*v.witness == ExactElement{0, {0, 0}, pi(2)});

  const auto half = classify_lightlike(LatticeSpec::dim4(1, Dim4Angle::HalfPi));
  CHECK(half.kind == LightlikeVerdict::Kind::AllClosed);
  REQUIRE(half.witness);
  CHECK(half.witness->t == pi(2));
  REQUIRE(half.pure_t);
  CHECK(half.pure_t->t == pi(Rational(1, 2)));

  const auto tw = classify_lightlike(LatticeSpec::twisted(l10, 1));
  CHECK(tw.kind == LightlikeVerdict::Kind::OnlyCentralDirection);
  CHECK_FALSE(tw.witness);

  const auto six = classify_lightlike(LatticeSpec::dim6(1, 1, 3, 1));
  CHECK(six.kind == LightlikeVerdict::Kind::AllClosed);
  REQUIRE(six.witness);
  CHECK(six.witness->t == pi(6));
}

TEST_CASE("every lightlike geodesic with a != 0 passes through the witness") {
  Gen g(41);
  for (const auto& spec : osc::testing::all_closed_families()) {
    const auto v = classify_lightlike(spec);
    if (v.kind != LightlikeVerdict::Kind::AllClosed) continue;
    const double t = v.witness->t.to_double();
    for (int i = 0; i < 50; ++i) {
      const auto x = random_lightlike(g, spec.freqs());
      const Element end = eval_geodesic(x, t / x.a, spec.freqs());
      CHECK(distance(end, to_float(*v.witness)) <= 1e-9 * std::max(1.0, std::abs(t / x.a)));
      const auto hit = search_closed(x, spec);
      REQUIRE(hit);
      CHECK(contains(spec, hit->lattice_point));
      CHECK(hit->causal == CausalClass::Lightlike);
    }
  }
}

TEST_CASE("without a pure-t member random lightlike geodesics with a != 0 do not close") {
  Gen g(43);
  const auto spec = LatticeSpec::twisted(LatticeSpec::dim4(1, Dim4Angle::TwoPi), 1);
  for (int i = 0; i < 50; ++i) CHECK_FALSE(search_closed(random_lightlike(g, spec.freqs()), spec, 50));
  // The central direction still closes.
  auto z = AlgebraVector::zero(1);
  z.d = 1;
  const auto hit = search_closed(z, spec);
  REQUIRE(hit);
  CHECK(hit->s_star == doctest::Approx(0.5));
}

TEST_CASE("search hits along the central and time directions") {
  for (long n = 1; n <= 4; ++n) {
    const auto spec = LatticeSpec::dim4(n, Dim4Angle::TwoPi);
    auto z = AlgebraVector::zero(1);
    z.d = 1;
    const auto hz = search_closed(z, spec);
    REQUIRE(hz);
    CHECK(hz->s_star == doctest::Approx(1.0 / (2 * n)));
    CHECK(hz->lattice_point == ExactElement{ExactScalar(Rational(1, 2 * n)), {0, 0}, 0});

    auto t = AlgebraVector::zero(1);
    t.a = 1;
    const auto ht = search_closed(t, spec);
    REQUIRE(ht);
    CHECK(ht->s_star == doctest::Approx(2 * M_PI));
    CHECK(ht->lattice_point == ExactElement{0, {0, 0}, pi(2)});
  }
  auto v = AlgebraVector::zero(1);
  v.b(0) = 0.5;
  const auto hv = search_closed(v, LatticeSpec::dim4(1, Dim4Angle::TwoPi));
  REQUIRE(hv);
  CHECK(hv->s_star == doctest::Approx(2.0));
  CHECK(hv->causal == CausalClass::Spacelike);
  CHECK_THROWS_AS(search_closed(AlgebraVector::zero(2), LatticeSpec::dim4(1, Dim4Angle::TwoPi)), DimensionMismatch);
}

TEST_CASE("closed timelike and spacelike geodesics on the basic lattice") {
  const auto spec = LatticeSpec::dim4(1, Dim4Angle::TwoPi);
  const auto pair = closed_timelike_and_spacelike(spec);
  check_certificate(spec, pair.timelike, CausalClass::Timelike);
  check_certificate(spec, pair.spacelike, CausalClass::Spacelike);
  CHECK(pair.singular_blocks == std::vector<std::size_t>{0});
  // K0 = 1: the geodesic is (d, 0, 0, 2π) with sign(Q) = sign(d).
  CHECK(pair.timelike.exact_initial->a == pi(2));
  CHECK(pair.timelike.exact_initial->d.sign() < 0);
  CHECK(pair.spacelike.exact_initial->d.sign() > 0);
}

TEST_CASE("construction with a nonsingular block") {
  const auto spec = LatticeSpec::dim4(1, Dim4Angle::HalfPi);
  CHECK(profile(spec).K0 == 4);
  const auto pair = closed_timelike_and_spacelike(spec);
  CHECK(pair.singular_blocks.empty());
  const auto& x = *pair.timelike.exact_initial;
  CHECK(x.a == pi(Rational(3, 2)));
  CHECK(x.b(0) == pi(Rational(-3, 4)));
  CHECK(x.c(0) == pi(Rational(-3, 4)));
  check_certificate(spec, pair.timelike, CausalClass::Timelike);
  check_certificate(spec, pair.spacelike, CausalClass::Spacelike);
}

TEST_CASE("constructed certificates verify across families") {
  for (const auto& spec : osc::testing::all_closed_families()) {
    CAPTURE(spec.name());
    const auto pair = closed_timelike_and_spacelike(spec);
    check_certificate(spec, pair.timelike, CausalClass::Timelike);
    check_certificate(spec, pair.spacelike, CausalClass::Spacelike);
    // Closed geodesics are periodic modulo the lattice: α(k·s*) lies on the orbit of the lattice point.
    for (const auto* c : {&pair.timelike, &pair.spacelike})
      for (long k = 2; k <= 4; ++k) {
        const Element end = eval_geodesic(c->initial, k * c->s_star, spec.freqs());
        const ExactElement expect = power(c->lattice_point, k, spec.freqs());
        CHECK(distance(end, to_float(expect)) <= 1e-8 * std::max(1.0, to_float(expect).coords().cwiseAbs().maxCoeff()));
        CHECK(contains(spec, expect));
      }
  }
}

TEST_CASE("product with a line") {
  const auto base = LatticeSpec::dim4(1, Dim4Angle::TwoPi);
  auto square = [&](ExactScalar w2) {
    return LatticeSpec::product_line(base, LineLattice{LineLattice::Kind::Square, w2, ""});
  };
  CHECK(product_line_lightlike(square(1)).kind == ProductLineVerdict::Kind::NeverClosed);
  CHECK(product_line_lightlike(square(ExactScalar(1, 2))).kind == ProductLineVerdict::Kind::NeverClosed);
  const auto e = product_line_lightlike(
      LatticeSpec::product_line(base, LineLattice{LineLattice::Kind::Irrational, 0, "e"}));
  CHECK(e.kind == ProductLineVerdict::Kind::NeverClosed);
  CHECK(e.assumes_independence);
  CHECK(product_line_lightlike(LatticeSpec::product_line(base, LineLattice{LineLattice::Kind::Exact, pi(1), ""})).kind ==
        ProductLineVerdict::Kind::NeverClosed);

  const auto yes = product_line_lightlike(square(pi(2)));
  CHECK(yes.kind == ProductLineVerdict::Kind::SomeClosedPossible);
  REQUIRE(yes.relation);
  CHECK((*yes.relation)[0] == -1);
  CHECK((*yes.relation)[1] == 1);
  CHECK((*yes.relation)[2] == 1);
  REQUIRE(yes.certificate);
  CHECK(yes.certificate->lattice_point == ExactElement{ExactScalar(Rational(1, 2)), {0, 0}, pi(-2)});

  for (long k = 1; k <= 3; ++k)
    for (const Rational& rho : {Rational(1, 3), Rational(5, 2), Rational(7)}) {
      const auto spec = LatticeSpec::product_line(LatticeSpec::dim4(k, Dim4Angle::TwoPi),
                                                  LineLattice{LineLattice::Kind::Square, pi(2 * rho), ""});
      const auto v = product_line_lightlike(spec);
      REQUIRE(v.relation);
      const auto& [kk, m, z] = *v.relation;
      CHECK(Rational(-2 * kk * m) / Rational(z * z) == 2 * rho);
      REQUIRE(v.certificate);
      CHECK(contains(LatticeSpec::dim4(k, Dim4Angle::TwoPi), v.certificate->lattice_point));
      const double w = std::sqrt(2 * M_PI * rho.get_d());
      CHECK(v.line_velocity * v.certificate->s_star == doctest::Approx(w * v.line_index.get_d()));
      CHECK(causal_norm(v.certificate->initial, spec.freqs()) + v.line_velocity * v.line_velocity ==
            doctest::Approx(0.0).epsilon(1e-12));
    }
  CHECK_THROWS_AS(product_line_lightlike(base), UnsupportedSpec);
}

}  // TEST_SUITE
