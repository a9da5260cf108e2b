#include "osc/geodesic.hpp"

#include <Eigen/LU>

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>

#include "kernels/rk4.hpp"
#include "osc/errors.hpp"

namespace osc {

namespace {

// sin θ / θ, (1 − cos θ)/θ and (θ − sin θ)/θ³, with series near 0 so that
// a → 0 needs no separate branch.
struct ThetaFactors {
  double f1, f2, f3;
};

ThetaFactors theta_factors(double th) {
  if (std::abs(th) < 0.5) {
    const double th2 = th * th;
    double f1 = 0, f2 = 0, f3 = 0;
    double term1 = 1.0, term2 = 0.5, term3 = 1.0 / 6.0;
    // term_k of f1: (−1)^k θ^{2k}/(2k+1)!, f2: θ·(−1)^k θ^{2k}/(2k+2)!, f3: (−1)^k θ^{2k}/(2k+3)!
    for (int k = 0; k < 10; ++k) {
      f1 += term1;
      f2 += term2;
      f3 += term3;
      term1 *= -th2 / ((2.0 * k + 2) * (2.0 * k + 3));
      term2 *= -th2 / ((2.0 * k + 3) * (2.0 * k + 4));
      term3 *= -th2 / ((2.0 * k + 4) * (2.0 * k + 5));
    }
    return {f1, f2 * th, f3};
  }
  return {std::sin(th) / th, (1.0 - std::cos(th)) / th, (th - std::sin(th)) / (th * th * th)};
}

void check_vector(const AlgebraVector& x, const FrequencyList& freqs, const char* op) {
  if (x.bc.size() != 2 * freqs.n())
    throw DimensionMismatch(std::string(op) + ": initial vector does not match the frequencies");
}

// Affine coefficients of the metric: G(p) = constant + Σ_m p_m · linear[m].
struct AffineMetric {
  Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> constant;
  std::vector<Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>> linear;
};

AffineMetric affine_metric(const FrequencyList& freqs) {
  const auto dim = static_cast<Eigen::Index>(freqs.dim());
  using RMat = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
  auto zero = [&] {
    RMat m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
      for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = 0;
    return m;
  };
  AffineMetric g{zero(), std::vector<RMat>(static_cast<std::size_t>(dim), zero())};
  const Eigen::Index t = dim - 1;
  g.constant(0, t) = g.constant(t, 0) = 1;
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const auto xi = static_cast<Eigen::Index>(1 + 2 * i);
    const auto yi = xi + 1;
    g.constant(xi, xi) = g.constant(yi, yi) = Rational(1) / freqs[i];
    // g_{t x_i} = y_i/2, g_{t y_i} = −x_i/2
    g.linear[static_cast<std::size_t>(yi)](t, xi) = g.linear[static_cast<std::size_t>(yi)](xi, t) = Rational(1, 2);
    g.linear[static_cast<std::size_t>(xi)](t, yi) = g.linear[static_cast<std::size_t>(xi)](yi, t) = Rational(-1, 2);
  }
  return g;
}

}  // namespace

Geodesic::Geodesic(AlgebraVector x, FrequencyList f)
    : initial(std::move(x)), basepoint(Element::identity(f.n())), freqs(std::move(f)) {
  check_vector(initial, freqs, "Geodesic");
}

Geodesic::Geodesic(AlgebraVector x, Element base, FrequencyList f)
    : initial(std::move(x)), basepoint(std::move(base)), freqs(std::move(f)) {
  check_vector(initial, freqs, "Geodesic");
  if (static_cast<std::size_t>(basepoint.v.size()) != 2 * freqs.n())
    throw DimensionMismatch("Geodesic: basepoint does not match the frequencies");
}

Element eval_geodesic(const AlgebraVector& x, double s, const FrequencyList& freqs) {
  check_vector(x, freqs, "eval_geodesic");
  Element out = Element::identity(freqs.n());
  double z = x.d * s;
  for (std::size_t k = 0; k < freqs.n(); ++k) {
    const double lam = freqs.as_double(k);
    const double b = x.b(k), c = x.c(k);
    const auto f = theta_factors(lam * x.a * s);
    out.v(static_cast<Eigen::Index>(2 * k)) = s * (b * f.f1 - c * f.f2);
    out.v(static_cast<Eigen::Index>(2 * k + 1)) = s * (b * f.f2 + c * f.f1);
    z += 0.5 * (b * b + c * c) * lam * x.a * s * s * s * f.f3;
  }
  out.z = z;
  out.t = x.a * s;
  return out;
}

Element eval_geodesic(const Geodesic& geo, double s) {
  return multiply(geo.basepoint, eval_geodesic(geo.initial, s, geo.freqs), geo.freqs);
}

Eigen::VectorXd geodesic_velocity(const AlgebraVector& x, double s, const FrequencyList& freqs) {
  check_vector(x, freqs, "geodesic_velocity");
  Eigen::VectorXd u(static_cast<Eigen::Index>(freqs.dim()));
  double dz = x.d;
  for (std::size_t k = 0; k < freqs.n(); ++k) {
    const double th = freqs.as_double(k) * x.a * s;
    const double b = x.b(k), c = x.c(k);
    const double co = std::cos(th), si = std::sin(th);
    u(static_cast<Eigen::Index>(1 + 2 * k)) = b * co - c * si;
    u(static_cast<Eigen::Index>(2 + 2 * k)) = b * si + c * co;
    dz += 0.5 * (b * b + c * c) * s * theta_factors(th).f2;
  }
  u(0) = dz;
  u(u.size() - 1) = x.a;
  return u;
}

Eigen::VectorXd geodesic_rhs(const Eigen::VectorXd& state, const FrequencyList& freqs) {
  const auto dim = static_cast<Eigen::Index>(freqs.dim());
  if (state.size() != 2 * dim)
    throw DimensionMismatch("geodesic_rhs: state has " + std::to_string(state.size()) + " entries, need " +
                            std::to_string(2 * dim));
  Eigen::VectorXd out(2 * dim);
  const auto p = state.head(dim);
  const auto u = state.tail(dim);
  out.head(dim) = u;
  const double ut = u(dim - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const double lam = freqs.as_double(i);
    const auto xi = static_cast<Eigen::Index>(1 + 2 * i);
    acc += lam * (u(xi) * p(xi) + u(xi + 1) * p(xi + 1));
    out(dim + xi) = -lam * u(xi + 1) * ut;
    out(dim + xi + 1) = lam * u(xi) * ut;
  }
  out(dim) = 0.5 * ut * acc;
  out(2 * dim - 1) = 0.0;
  return out;
}

Rk4Kernel resolve_rk4_kernel(Rk4Kernel requested) {
  static const bool cpu_avx2 = [] {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
  }();
  if (requested == Rk4Kernel::Scalar) return Rk4Kernel::Scalar;
  if (requested == Rk4Kernel::Avx2) {
    if (!cpu_avx2) throw Error("AVX2 kernel requested but the CPU does not support AVX2");
    return Rk4Kernel::Avx2;
  }
  const char* force = std::getenv("OSC_FORCE_SCALAR");
  if (force && *force && std::string_view(force) != "0") return Rk4Kernel::Scalar;
  return cpu_avx2 ? Rk4Kernel::Avx2 : Rk4Kernel::Scalar;
}

std::string_view to_string(Rk4Kernel k) {
  switch (k) {
    case Rk4Kernel::Auto: return "auto";
    case Rk4Kernel::Scalar: return "scalar";
    case Rk4Kernel::Avx2: return "avx2";
  }
  return "unknown";
}

std::vector<Element> integrate_geodesics(const std::vector<AlgebraVector>& xs, double s_end, double step,
                                         const FrequencyList& freqs, Rk4Kernel kernel) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidSpec("integrate_geodesic: step must be > 0");
  if (!std::isfinite(s_end)) throw NonFiniteState("integrate_geodesic: non-finite s_end");
  const std::size_t dim = freqs.dim();
  const std::size_t count = xs.size();
  std::vector<double> lambdas(freqs.n());
  for (std::size_t i = 0; i < freqs.n(); ++i) lambdas[i] = freqs.as_double(i);
  std::vector<double> state(2 * dim * count, 0.0);
  for (std::size_t j = 0; j < count; ++j) {
    check_vector(xs[j], freqs, "integrate_geodesic");
    const auto coords = xs[j].coords();
    for (std::size_t c = 0; c < dim; ++c) state[(dim + c) * count + j] = coords[c];
  }
  const long steps = static_cast<long>(std::ceil(std::abs(s_end) / step - 1e-12));
  kernels::Rk4Batch batch{lambdas.data(), freqs.n(), count, state.data(), steps > 0 ? s_end / steps : 0.0,
                          steps};
  if (count > 0 && steps > 0) {
    if (resolve_rk4_kernel(kernel) == Rk4Kernel::Avx2) kernels::rk4_batch_avx2(batch);
    else kernels::rk4_batch_scalar(batch);
  }
  std::vector<Element> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) {
      const double value = state[k * count + j];
      if (!std::isfinite(value)) throw NonFiniteState("integrate_geodesic: state became non-finite");
      c(static_cast<Eigen::Index>(k)) = value;
    }
    out.push_back(Element::from_coords(c));
  }
  return out;
}

Element integrate_geodesic(const AlgebraVector& x, double s_end, double step, const FrequencyList& freqs) {
  return integrate_geodesics({x}, s_end, step, freqs, Rk4Kernel::Scalar).front();
}

Eigen::MatrixXd metric_matrix(const Element& p, const FrequencyList& freqs) {
  const auto dim = static_cast<Eigen::Index>(freqs.dim());
  if (p.v.size() != dim - 2) throw DimensionMismatch("metric_at: point does not match the frequencies");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
  g(0, dim - 1) = g(dim - 1, 0) = 1.0;
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const auto xi = static_cast<Eigen::Index>(1 + 2 * i);
    g(xi, xi) = g(xi + 1, xi + 1) = 1.0 / freqs.as_double(i);
    g(dim - 1, xi) = g(xi, dim - 1) = 0.5 * p.v(xi);
    g(dim - 1, xi + 1) = g(xi + 1, dim - 1) = -0.5 * p.v(xi - 1);
  }
  return g;
}

double metric_at(const Element& p, const Eigen::VectorXd& u, const Eigen::VectorXd& w, const FrequencyList& freqs) {
  if (u.size() != static_cast<Eigen::Index>(freqs.dim()) || w.size() != u.size())
    throw DimensionMismatch("metric_at: tangent vectors must have 2n+2 coordinates");
  return u.dot(metric_matrix(p, freqs) * w);
}

Eigen::VectorXd ChristoffelArray::contract(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim_));
  for (std::size_t k = 0; k < dim_; ++k)
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t j = 0; j < dim_; ++j)
        out(static_cast<Eigen::Index>(k)) -=
            (*this)(k, i, j) * u(static_cast<Eigen::Index>(i)) * u(static_cast<Eigen::Index>(j));
  return out;
}

ChristoffelArray christoffel(const FrequencyList& freqs, const Element& p) {
  const std::size_t dim = freqs.dim();
  const auto g = affine_metric(freqs);
  const Eigen::MatrixXd ginv = metric_matrix(p, freqs).inverse();
  auto dg = [&](std::size_t m, std::size_t i, std::size_t j) {
    return g.linear[m](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)).get_d();
  };
  ChristoffelArray out(dim);
  for (std::size_t k = 0; k < dim; ++k)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) {
        double sum = 0.0;
        for (std::size_t l = 0; l < dim; ++l)
          sum += ginv(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) *
                 (dg(i, l, j) + dg(j, l, i) - dg(l, i, j));
        out(k, i, j) = 0.5 * sum;
      }
  return out;
}

ChristoffelArray printed_christoffel(const FrequencyList& freqs, const Element& p) {
  const std::size_t dim = freqs.dim();
  const std::size_t t = dim - 1;
  ChristoffelArray out(dim);
  auto set = [&](std::size_t k, std::size_t i, std::size_t j, double value) {
    out(k, i, j) = value;
    out(k, j, i) = value;
  };
  for (std::size_t i = 0; i < freqs.n(); ++i) {
    const double lam = freqs.as_double(i);
    const std::size_t xi = 1 + 2 * i, yi = xi + 1;
    set(0, t, xi, -p.v(static_cast<Eigen::Index>(xi - 1)) * lam / 4);
    set(0, t, yi, -p.v(static_cast<Eigen::Index>(yi - 1)) * lam / 4);
    set(xi, t, xi, lam / 2);
    set(yi, t, xi, -lam / 2);
  }
  return out;
}

std::vector<ChristoffelDiscrepancy> christoffel_discrepancies(const FrequencyList& freqs, const Element& p,
                                                              double tolerance) {
  const auto derived = christoffel(freqs, p);
  const auto printed = printed_christoffel(freqs, p);
  std::vector<ChristoffelDiscrepancy> out;
  for (std::size_t k = 0; k < derived.dim(); ++k)
    for (std::size_t i = 0; i < derived.dim(); ++i)
      for (std::size_t j = i; j < derived.dim(); ++j)
        if (std::abs(derived(k, i, j) - printed(k, i, j)) > tolerance)
          out.push_back({k, i, j, derived(k, i, j), printed(k, i, j)});
  return out;
}

CausalClass causal_character(const Geodesic& geo, double tolerance) {
  return causal_class(geo.initial, geo.freqs, tolerance);
}

void write_samples_csv(std::ostream& os, const Geodesic& geo, double s0, double s1, std::size_t count) {
  os << "s,z";
  for (std::size_t i = 0; i < geo.freqs.n(); ++i) os << ",x" << i + 1 << ",y" << i + 1;
  os << ",t\n";
  const auto flags = os.flags();
  const auto precision = os.precision();
  os << std::setprecision(17);
  for (std::size_t r = 0; r < count; ++r) {
    const double s = count == 1 ? s0 : s0 + (s1 - s0) * static_cast<double>(r) / static_cast<double>(count - 1);
    const auto c = eval_geodesic(geo, s).coords();
    os << s;
    for (Eigen::Index i = 0; i < c.size(); ++i) os << ',' << c(i);
    os << '\n';
  }
  os.flags(flags);
  os.precision(precision);
}

}  // namespace osc
