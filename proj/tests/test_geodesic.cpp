#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "osc/geodesic.hpp"
#include "support/generators.hpp"

using namespace osc;
using osc::testing::Gen;

namespace {

const double kPi = std::numbers::pi;

AlgebraVector vec(std::size_t n, std::initializer_list<double> coords) {
  std::vector<double> c(coords);
  auto x = AlgebraVector::from_coords(c);
  REQUIRE(x.n() == n);
  return x;
}

Eigen::VectorXd unit(std::size_t dim, std::size_t i) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  u(static_cast<Eigen::Index>(i)) = 1;
  return u;
}

Eigen::VectorXd fd_velocity(const AlgebraVector& x, double s, const FrequencyList& f, double h = 1e-6) {
  return (eval_geodesic(x, s + h, f).coords() - eval_geodesic(x, s - h, f).coords()) / (2 * h);
}

}  // namespace

TEST_SUITE("geodesic-engine") {

TEST_CASE("closed-form special cases") {
  const FrequencyList one{1};
  for (double s : {0.0, 0.5, 2.0, -3.0}) {
    CHECK(distance(eval_geodesic(vec(1, {2, 0, 0, 0}), s, one), Element{2 * s, Eigen::Vector2d::Zero(), 0}) < 1e-15);
    CHECK(distance(eval_geodesic(vec(1, {0, 0, 0, 1}), s, one), Element{0, Eigen::Vector2d::Zero(), s}) < 1e-15);
  }
  Gen g(4);
  const auto x = g.algebra(2, 2);
  CHECK(distance(eval_geodesic(x, 0, FrequencyList{1, 2}), Element::identity(2)) == 0);
}

TEST_CASE("a = 1, b = 1 closes its rotation at 2 pi") {
  const FrequencyList one{1};
  const auto x = vec(1, {0, 1, 0, 1});
  const Element expected{kPi, Eigen::Vector2d::Zero(), 2 * kPi};
  CHECK(distance(eval_geodesic(x, 2 * kPi, one), expected) < 1e-12);
  CHECK(distance(integrate_geodesic(x, 2 * kPi, 1e-3, one), expected) < 1e-9);
}

TEST_CASE("a = 0 limit is continuous") {
  const FrequencyList f{1, 3};
  auto x = vec(2, {0.3, 1, -2, 0.5, 1.5, 0});
  const auto flat = eval_geodesic(x, 2.0, f);
  CHECK(std::abs(flat.z - 0.6) < 1e-15);
  x.a = 1e-9;
  CHECK(distance(eval_geodesic(x, 2.0, f), flat) < 1e-7);
  x.a = 1e-3;
  CHECK(distance(eval_geodesic(x, 2.0, f), integrate_geodesic(x, 2.0, 1e-3, f)) < 1e-10);
}

TEST_CASE("geodesic_rhs examples") {
  const FrequencyList one{1};
  Eigen::VectorXd state = Eigen::VectorXd::Zero(8);
  state.head(4) << 0.3, 1.2, -0.7, 2.0;
  CHECK(geodesic_rhs(state, one).tail(4).isZero());
  state.tail(4) << 0, 0, 0, 1.5;
  CHECK(geodesic_rhs(state, one).tail(4).isZero());
  state << 0, 1, 0, 0, 0, 0, 1, 1;
  const auto d = geodesic_rhs(state, one);
  CHECK(d(4) == 0);
  CHECK(d(5) == -1);
  CHECK(d(6) == 0);
  CHECK(d(7) == 0);
  CHECK_THROWS_AS(geodesic_rhs(Eigen::VectorXd::Zero(6), one), DimensionMismatch);
}

TEST_CASE("integrator on linear solutions") {
  const FrequencyList f{1, 2};
  CHECK(distance(integrate_geodesic(vec(2, {0, 0, 0, 0, 0, 1}), 4.0, 1e-2, f),
                 Element{0, Eigen::Vector4d::Zero(), 4.0}) < 1e-12);
  CHECK(distance(integrate_geodesic(vec(2, {1, 0, 0, 0, 0, 0}), 3.0, 1e-2, f),
                 Element{3.0, Eigen::Vector4d::Zero(), 0}) < 1e-12);
  // 0.7 / 0.3 is not a whole number of steps; the step shrinks to land on 0.7.
  CHECK(distance(integrate_geodesic(vec(2, {0, 0, 0, 0, 0, 1}), 0.7, 0.3, f),
                 Element{0, Eigen::Vector4d::Zero(), 0.7}) < 1e-15);
  CHECK_THROWS_AS(integrate_geodesic(vec(2, {1, 0, 0, 0, 0, 0}), 1.0, 0.0, f), InvalidSpec);
  CHECK_THROWS_AS(integrate_geodesic(vec(2, {1e308, 0, 0, 0, 0, 0}), 100.0, 1.0, f), NonFiniteState);
}

TEST_CASE("closed form matches RK4") {
  Gen g(101);
  for (std::size_t n = 1; n <= 2; ++n) {
    std::vector<AlgebraVector> xs;
    for (int i = 0; i < 100; ++i) xs.push_back(g.algebra(n, 2));
    const auto f = g.float_freqs(n, 3.0);
    const double s = g.uniform(0, 5);
    const auto rk = integrate_geodesics(xs, s, 1e-3, f);
    double worst = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, distance(rk[i], eval_geodesic(xs[i], s, f)));
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("scalar and AVX2 kernels agree") {
  if (resolve_rk4_kernel(Rk4Kernel::Auto) != Rk4Kernel::Avx2 &&
      resolve_rk4_kernel(Rk4Kernel::Scalar) == Rk4Kernel::Scalar) {
    bool has_avx2 = true;
    try {
      resolve_rk4_kernel(Rk4Kernel::Avx2);
    } catch (const Error&) {
      has_avx2 = false;
    }
    if (!has_avx2) return;
  }
  Gen g(7);
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto f = g.float_freqs(n, 3.0);
    std::vector<AlgebraVector> xs;
    for (int i = 0; i < 11; ++i) xs.push_back(g.algebra(n, 2));
    const auto a = integrate_geodesics(xs, 3.0, 1e-3, f, Rk4Kernel::Scalar);
    const auto b = integrate_geodesics(xs, 3.0, 1e-3, f, Rk4Kernel::Avx2);
    for (std::size_t i = 0; i < xs.size(); ++i) REQUIRE(distance(a[i], b[i]) <= 1e-12);
  }
}

TEST_CASE("metric coefficients") {
  const FrequencyList f{2, 3};
  const std::size_t dim = f.dim(), t = dim - 1;
  const auto e = Element::identity(2);
  CHECK(metric_at(e, unit(dim, 0), unit(dim, t), f) == 1);
  CHECK(metric_at(e, unit(dim, t), unit(dim, t), f) == 0);
  Gen g(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = g.element(2, 5);
    CHECK(metric_at(p, unit(dim, 1), unit(dim, 1), f) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(metric_at(p, unit(dim, 4), unit(dim, 4), f) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  }
  // Left-invariant metric: g_{t y_1} = −x_1/2.
  Element p = Element::identity(2);
  p.v(0) = 2;
  CHECK(metric_at(p, unit(dim, t), unit(dim, 2), f) == -1);
  CHECK(metric_at(p, unit(dim, 2), unit(dim, t), f) == -1);
}

TEST_CASE("metric at e is the algebra form") {
  Gen g(9);
  const auto f = g.freqs(3);
  CHECK((metric_matrix(Element::identity(3), f) - gram_matrix(f)).norm() == 0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = g.algebra(3, 2), y = g.algebra(3, 2);
    std::vector<double> xc = x.coords(), yc = y.coords();
    const Eigen::Map<Eigen::VectorXd> u(xc.data(), 8), w(yc.data(), 8);
    CHECK(metric_at(Element::identity(3), u, w, f) == doctest::Approx(inner(x, y, f)).epsilon(1e-12));
  }
}

TEST_CASE("Christoffel symbols contract to the geodesic equation") {
  Gen g(13);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    const auto f = g.float_freqs(n, 3.0);
    const auto p = g.element(n, 3);
    const auto gamma = christoffel(f, p);
    Eigen::VectorXd u(static_cast<Eigen::Index>(f.dim()));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = g.uniform(-2, 2);
    Eigen::VectorXd state(2 * u.size());
    state << p.coords(), u;
    const Eigen::VectorXd accel = geodesic_rhs(state, f).tail(u.size());
    REQUIRE((gamma.contract(u) - accel).cwiseAbs().maxCoeff() <= 1e-10);
    for (std::size_t k = 0; k < f.dim(); ++k)
      for (std::size_t i = 0; i < f.dim(); ++i)
        for (std::size_t j = 0; j < f.dim(); ++j) REQUIRE(gamma(k, i, j) == gamma(k, j, i));
  }
}

TEST_CASE("Christoffel pattern and printed-table discrepancies") {
  const FrequencyList f{1, 3};
  const std::size_t t = f.dim() - 1;
  const auto gamma = christoffel(f, Element::identity(2));
  // At v = 0 only the constant couplings between t and x/y survive.
  for (std::size_t k = 0; k < f.dim(); ++k)
    for (std::size_t i = 0; i < f.dim(); ++i)
      for (std::size_t j = 0; j < f.dim(); ++j)
        if (i != t && j != t) CHECK(gamma(k, i, j) == 0);
  CHECK(gamma(1, t, 2) == doctest::Approx(0.5));
  CHECK(gamma(2, t, 1) == doctest::Approx(-0.5));
  CHECK(gamma(3, t, 4) == doctest::Approx(1.5));
  Element p = Element::identity(2);
  p.v << 2, -1, 0.5, 4;
  const auto at_p = christoffel(f, p);
  CHECK(at_p(0, t, 1) == doctest::Approx(-0.5));
  CHECK(at_p(0, t, 2) == doctest::Approx(0.25));
  CHECK(at_p(0, t, 3) == doctest::Approx(-0.375));

  const auto printed = printed_christoffel(f, p);
  CHECK(printed(0, t, 1) == at_p(0, t, 1));
  CHECK(printed(0, t, 2) == at_p(0, t, 2));
  const auto diff = christoffel_discrepancies(f, p);
  REQUIRE(diff.size() == 4);
  for (const auto& d : diff) {
    CHECK(d.lower1 != 0);
    CHECK(d.lower2 == t);
  }
  CHECK(diff[0].upper == 1);
  CHECK(diff[0].lower1 == 1);
  CHECK(diff[0].printed == 0.5);
  CHECK(diff[0].derived == 0);
}

TEST_CASE("one-parameter subgroup law") {
  Gen g(19);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 3));
    const auto f = g.float_freqs(n, 3.0);
    const auto x = g.algebra(n, 2);
    const double s = g.uniform(-3, 3), t = g.uniform(-3, 3);
    worst = std::max(worst, distance(eval_geodesic(x, s + t, f),
                                     multiply(eval_geodesic(x, s, f), eval_geodesic(x, t, f), f)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("geodesics through other points are left translates") {
  Gen g(21);
  const FrequencyList f{1, 2};
  for (int trial = 0; trial < 20; ++trial) {
    const Geodesic geo(g.algebra(2, 2), g.element(2, 2), f);
    CHECK(distance(eval_geodesic(geo, 0), geo.basepoint) < 1e-15);
    const double s = g.uniform(0, 3);
    Eigen::VectorXd state(2 * static_cast<Eigen::Index>(f.dim()));
    const double h = 1e-5;
    const auto p0 = eval_geodesic(geo, s - h).coords(), p1 = eval_geodesic(geo, s).coords(),
               p2 = eval_geodesic(geo, s + h).coords();
    state << p1, (p2 - p0) / (2 * h);
    const Eigen::VectorXd accel = (p2 - 2 * p1 + p0) / (h * h);
    CHECK((geodesic_rhs(state, f).tail(f.dim()) - accel).cwiseAbs().maxCoeff() < 1e-3);
  }
}

TEST_CASE("constant causal norm along geodesics") {
  Gen g(29);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = static_cast<std::size_t>(g.integer(1, 2));
    const auto f = g.float_freqs(n, 3.0);
    const auto x = g.algebra(n, 2);
    const double q = causal_norm(x, f);
    for (int k = 0; k < 50; ++k) {
      const double s = 5.0 * k / 49;
      const auto p = eval_geodesic(x, s, f);
      const auto fd = fd_velocity(x, s, f);
      const auto an = geodesic_velocity(x, s, f);
      REQUIRE((fd - an).cwiseAbs().maxCoeff() <= 1e-6);
      REQUIRE(std::abs(metric_at(p, an, an, f) - q) <= 1e-9);
      REQUIRE(std::abs(metric_at(p, fd, fd, f) - q) <= 1e-5);
    }
  }
}

TEST_CASE("causal character delegates to the initial vector") {
  const FrequencyList one{1};
  CHECK(causal_character(Geodesic(vec(1, {1, 0, 0, 0}), one)) == CausalClass::Lightlike);
  CHECK(causal_character(Geodesic(vec(1, {1, 0, 0, -1}), one)) == CausalClass::Timelike);
  CHECK(causal_character(Geodesic(vec(1, {0, 1, 0, 0}), one)) == CausalClass::Spacelike);
}

TEST_CASE("CSV samples") {
  std::ostringstream os;
  write_samples_csv(os, Geodesic(vec(1, {1, 0, 0, 0}), FrequencyList{1}), 1, 3, 3);
  CHECK(os.str() == "s,z,x1,y1,t\n1,1,0,0,0\n2,2,0,0,0\n3,3,0,0,0\n");
}

}
