#include "osc/quotient.hpp"

#include <cmath>

#include "osc/errors.hpp"

namespace osc {

namespace {

double scale_of(const ExactElement& g) { return std::max(1.0, to_float(g).coords().cwiseAbs().maxCoeff()); }

AlgebraVector to_double(const ExactInitial& x) {
  auto out = AlgebraVector::zero(x.n());
  out.d = x.d.to_double();
  out.a = x.a.to_double();
  for (std::size_t i = 0; i < x.bc.size(); ++i) out.bc[i] = x.bc[i].to_double();
  return out;
}

// Sequence 0, 1, −1, 2, −2, …
long nth_m(long i) { return i % 2 == 1 ? (i + 1) / 2 : -(i / 2); }

struct BlockSolve {
  Rational beta, gamma;  // b_j = β·π, c_j = γ·π
  int sin_value = 0;
  bool singular = true;
};

}  // namespace

std::string to_string(LightlikeVerdict::Kind k) {
  return k == LightlikeVerdict::Kind::AllClosed ? "AllClosed" : "OnlyCentralDirection";
}

std::string to_string(ProductLineVerdict::Kind k) {
  return k == ProductLineVerdict::Kind::SomeClosedPossible ? "SomeClosedPossible" : "NeverClosed";
}

LightlikeVerdict classify_lightlike(const LatticeSpec& spec) {
  const auto p = profile(spec);
  LightlikeVerdict v;
  v.pure_t = pure_t_element(spec);
  if (!v.pure_t) {
    v.kind = LightlikeVerdict::Kind::OnlyCentralDirection;
    return v;
  }
  v.kind = LightlikeVerdict::Kind::AllClosed;
  ExactElement w = *v.pure_t;
  w.t = w.t * Rational(p.K0);
  if (!contains(spec, w)) throw CertificateVerificationFailed("classify_lightlike: witness " + to_string(w) + " not in lattice");
  v.witness = w;
  return v;
}

CausalPair closed_timelike_and_spacelike(const LatticeSpec& spec, long m_cap) {
  const auto p = profile(spec);
  const auto& f = spec.freqs();
  const std::size_t n = f.n();
  const Integer steps = p.K0 == 1 ? Integer(1) : Integer(p.K0 - 1);
  const ExactScalar a = p.t0 * Rational(steps);
  if (!a.is_pure_pi()) throw UnsupportedSpec("closed_timelike_and_spacelike: t0 is not a multiple of pi");
  const Rational alpha = a.pi_part();
  const auto rot = exact_rotation(a, f);

  CausalPair out;
  std::vector<BlockSolve> blocks(n);
  std::vector<Integer> iv(2 * n, Integer(0));
  static constexpr int kCos[4] = {1, 0, -1, 0};
  static constexpr int kSin[4] = {0, 1, 0, -1};
  Rational sum_s = 0, sum_t = 0;  // π²-coefficients of Σ(b²+c²)/λ and Σ(b²+c²)·sin/λ²
  for (std::size_t j = 0; j < n; ++j) {
    const int q = ((rot.quarters[j] % 4) + 4) % 4;
    auto& b = blocks[j];
    b.sin_value = kSin[q];
    if (q == 0) {
      b.singular = true;
      out.singular_blocks.push_back(j);
      continue;
    }
    b.singular = false;
    iv[2 * j] = 1;
    // [[s, c−1], [1−c, s]] (b, c) = aλ(1, 0), inverse (1/(2−2c)) [[s, 1−c], [c−1, s]].
    const int s = kSin[q], c = kCos[q];
    const Rational factor = alpha * f[j] / Rational(2 - 2 * c);
    b.beta = factor * s;
    b.gamma = factor * (c - 1);
    const Rational r2 = b.beta * b.beta + b.gamma * b.gamma;
    sum_s += r2 / f[j];
    sum_t += r2 * s / (f[j] * f[j]);
  }

  bool have_time = false, have_space = false;
  for (long i = 0; i <= 2 * m_cap && !(have_time && have_space); ++i) {
    const long m = nth_m(i);
    const ExactElement gamma_m = member_with(spec, m, iv, steps);
    const Rational z1 = gamma_m.z.rational_part(), z2 = gamma_m.z.pi_part();
    // Q = π·(2α z1 + T/α) + π²·(2α z2)
    const int sign = ExactScalar(2 * alpha * z1 + sum_t / alpha, 2 * alpha * z2).sign();
    if (sign == 0) continue;
    const bool timelike = sign < 0;
    if ((timelike && have_time) || (!timelike && have_space)) continue;

    ExactInitial x0 = ExactInitial::zero(n);
    x0.a = a;
    x0.d = ExactScalar(z1 + sum_t / (2 * alpha * alpha), z2 - sum_s / (2 * alpha));
    for (std::size_t j = 0; j < n; ++j) {
      x0.b(j) = ExactScalar::pi_times(blocks[j].beta);
      x0.c(j) = ExactScalar::pi_times(blocks[j].gamma);
    }
    ClosedGeodesicCertificate cert;
    cert.exact_initial = x0;
    cert.initial = to_double(x0);
    cert.s_star = 1.0;
    cert.s_star_exact = ExactScalar(1);
    cert.lattice_point = gamma_m;
    cert.causal = timelike ? CausalClass::Timelike : CausalClass::Spacelike;
    cert.residual = distance(eval_geodesic(cert.initial, 1.0, f), to_float(gamma_m));
    if (cert.residual > kLatticeHitTolerance * scale_of(gamma_m))
      throw CertificateVerificationFailed("closed_timelike_and_spacelike: geodesic misses " + to_string(gamma_m) +
                                          " by " + std::to_string(cert.residual));
    if (!contains(spec, gamma_m))
      throw CertificateVerificationFailed("closed_timelike_and_spacelike: " + to_string(gamma_m) + " not in lattice");
    const double q_float = causal_norm(cert.initial, f);
    if (std::abs(q_float) > 1e-9 && (q_float < 0) != timelike)
      throw CertificateVerificationFailed("closed_timelike_and_spacelike: exact and float causal signs disagree");
    if (timelike) {
      out.timelike = std::move(cert);
      out.m_timelike = m;
      have_time = true;
    } else {
      out.spacelike = std::move(cert);
      out.m_spacelike = m;
      have_space = true;
    }
  }
  if (!have_time || !have_space)
    throw CertificateVerificationFailed("closed_timelike_and_spacelike: no sign change for |m| <= " +
                                        std::to_string(m_cap));
  return out;
}

std::optional<ClosedGeodesicCertificate> search_closed(const AlgebraVector& x, const LatticeSpec& spec, long r_max) {
  const auto& f = spec.freqs();
  if (x.bc.size() != 2 * f.n()) throw DimensionMismatch("search_closed: vector does not match the lattice");
  const auto p = profile(spec);
  auto accept = [&](double s) -> std::optional<ClosedGeodesicCertificate> {
    const Element g = eval_geodesic(x, s, f);
    const ExactElement hit = nearest_member(spec, g);
    const double residual = distance(g, to_float(hit));
    if (residual > kLatticeHitTolerance * scale_of(hit) || !contains(spec, hit)) return std::nullopt;
    ClosedGeodesicCertificate c;
    c.initial = x;
    c.s_star = s;
    c.lattice_point = hit;
    c.causal = causal_class(x, f);
    c.residual = residual;
    return c;
  };
  if (x.a != 0.0) {
    const double t0 = p.t0.to_double();
    for (long r = 1; r <= r_max; ++r) {
      const double s = static_cast<double>(r) * t0 / std::abs(x.a);
      if (auto c = accept(s)) return c;
    }
    return std::nullopt;
  }
  // a = 0: α(s) = (ds, (b s, c s), 0); candidates make the first nonzero coordinate land on its grid.
  const double w = p.central_w.to_double();
  double step = 0.0;
  for (double c : x.bc)
    if (c != 0.0) {
      step = 1.0 / std::abs(c);
      break;
    }
  if (step == 0.0) {
    if (x.d == 0.0) return std::nullopt;
    step = w / std::abs(x.d);
  }
  for (long r = 1; r <= r_max; ++r)
    if (auto c = accept(static_cast<double>(r) * step)) return c;
  return std::nullopt;
}

ProductLineVerdict product_line_lightlike(const LatticeSpec& spec) {
  const auto* fam = std::get_if<ProductLineFamily>(&spec.family());
  if (!fam) throw UnsupportedSpec("product_line_lightlike: " + spec.name() + " has no line factor");
  const auto* base = std::get_if<Dim4Family>(&fam->base->family());
  if (!base || base->angle != Dim4Angle::TwoPi)
    throw UnsupportedSpec("product_line_lightlike: base must be a dim4 lattice with angle 2pi");

  ProductLineVerdict v;
  const LineLattice& line = fam->line;
  if (line.kind == LineLattice::Kind::Irrational) {
    v.kind = ProductLineVerdict::Kind::NeverClosed;
    v.assumes_independence = true;
    v.reason = "w = " + line.label + " is taken to satisfy no relation w^2 = r*pi with r rational";
    return v;
  }
  const auto w2 = line.square();
  if (!w2) {
    v.kind = ProductLineVerdict::Kind::NeverClosed;
    v.reason = "w^2 has a pi^2 component, so it is not in 2pi*Q (pi is transcendental)";
    return v;
  }
  if (!w2->is_pure_pi() || w2->pi_part() <= 0) {
    v.kind = ProductLineVerdict::Kind::NeverClosed;
    v.reason = "w^2 = " + to_string(*w2) + " is not a positive rational multiple of 2pi";
    return v;
  }
  // w² = 2πρ: take k = −1, z = den(ρ), m = ρz².
  const Rational rho = w2->pi_part() / 2;
  const Integer z = rho.get_den();
  const Integer m = rho.get_num() * rho.get_den();
  v.kind = ProductLineVerdict::Kind::SomeClosedPossible;
  v.relation = std::array<Integer, 3>{Integer(-1), m, z};
  v.reason = "w^2 = 2pi*" + to_string(rho) + " = -2pi*k*m/z^2 with k = -1, m = " + m.get_str() + ", z = " + z.get_str();

  // a = −1, s = 2π, line velocity r = w·z/(2π), d = r²/2 (lightlike: 2ad + r² = 0).
  const double w = std::sqrt(w2->to_double());
  const double r = w * z.get_d() / (2 * M_PI);
  ClosedGeodesicCertificate cert;
  cert.initial = AlgebraVector::zero(1);
  cert.initial.a = -1.0;
  cert.initial.d = r * r / 2;
  cert.s_star = 2 * M_PI;
  cert.s_star_exact = ExactScalar::pi_times(2);
  cert.lattice_point = ExactElement{ExactScalar(Rational(m, 2)), {0, 0}, ExactScalar::pi_times(-2)};
  cert.causal = causal_class(cert.initial, spec.freqs());
  cert.residual = distance(eval_geodesic(cert.initial, cert.s_star, spec.freqs()), to_float(cert.lattice_point));
  const double line_residual = std::abs(r * cert.s_star - w * z.get_d());
  if (cert.residual > kLatticeHitTolerance * scale_of(cert.lattice_point) ||
      line_residual > kLatticeHitTolerance * std::max(1.0, w * z.get_d()) || !contains(*fam->base, cert.lattice_point) ||
      std::abs(causal_norm(cert.initial, spec.freqs()) + r * r) > 1e-12)
    throw CertificateVerificationFailed("product_line_lightlike: constructed geodesic does not close");
  v.certificate = cert;
  v.line_velocity = r;
  v.line_index = z;
  return v;
}

}  // namespace osc
