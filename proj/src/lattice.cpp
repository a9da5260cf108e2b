#include "osc/lattice.hpp"

#include <cmath>
#include <numeric>
#include <set>

#include "osc/errors.hpp"

namespace osc {

namespace {

// (w, t0, m): the set φ_m(wℤ × ℤ^{2n} × t0ℤ).
struct ClosedForm {
  Rational w;
  ExactScalar t0;
  ExactScalar m;
};

ClosedForm closed_form(const LatticeSpec& spec) {
  return std::visit(
      [&](const auto& fam) -> ClosedForm {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, Dim4Family>) {
          return {Rational(1, 2 * fam.k), angle_value(fam.angle), 0};
        } else if constexpr (std::is_same_v<F, Dim6Family>) {
          return {Rational(1, 2 * fam.k), ExactScalar::pi_times(Rational(2 * fam.q, fam.M)), 0};
        } else if constexpr (std::is_same_v<F, TwistedFamily>) {
          auto base = closed_form(*fam.base);
          base.m += fam.m;
          return base;
        } else {
          throw UnsupportedSpec("lattice " + spec.name() + " is not a closed-form family");
        }
      },
      spec.family());
}

// m·t, or nullopt when it would need a π² term.
std::optional<ExactScalar> times(const ExactScalar& m, const ExactScalar& t) {
  if (!m.is_rational() && !t.is_rational()) return std::nullopt;
  return m * t;
}

bool all_integers(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (!is_integer(x)) return false;
  return true;
}

bool closed_form_contains(const ClosedForm& cf, const ExactElement& g) {
  if (!is_integer_multiple(g.t, cf.t0)) return false;
  if (!all_integers(g.v)) return false;
  const auto shift = times(cf.m, g.t);
  // z − m·t would carry a π² component, which no base member has.
  if (!shift) return false;
  const ExactScalar z = g.z - *shift;
  return z.is_rational() && is_integer(Rational(z.rational_part() / cf.w));
}

void require_dim(const LatticeSpec& spec, const ExactElement& g) {
  if (g.v.size() != 2 * spec.freqs().n())
    throw DimensionMismatch("lattice " + spec.name() + ": element " + to_string(g) + " has the wrong dimension");
}

bool generator_search(const LatticeSpec& spec, const GeneratorFamily& fam, const ExactElement& g) {
  const auto& f = spec.freqs();
  if (g.is_identity()) return true;
  std::vector<ExactElement> letters;
  for (const auto& x : fam.generators) {
    letters.push_back(x);
    letters.push_back(invert(x, f));
  }
  const std::string target = to_string(g);
  std::set<std::string> seen{to_string(ExactElement::identity(f.n()))};
  std::vector<ExactElement> frontier{ExactElement::identity(f.n())};
  for (int d = 0; d < fam.depth; ++d) {
    std::vector<ExactElement> next;
    for (const auto& w : frontier)
      for (const auto& l : letters) {
        auto p = multiply(w, l, f);
        auto key = to_string(p);
        if (key == target) return true;
        if (seen.insert(std::move(key)).second) next.push_back(std::move(p));
      }
    frontier = std::move(next);
  }
  throw MembershipUndecidable("lattice " + spec.name() + ": " + to_string(g) + " not reached by words of length <= " +
                              std::to_string(fam.depth));
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

bool line_contains(const LineLattice& line, const ExactScalar& r) {
  if (r.is_zero()) return true;
  switch (line.kind) {
    case LineLattice::Kind::Exact: return is_integer_multiple(r, line.value);
    case LineLattice::Kind::Square: {
      // r = k·w forces r² = k²·w²; r² leaves ℚ+ℚπ unless r is rational.
      if (!r.is_rational() || !line.value.is_rational()) return false;
      const Rational k2 = r.rational_part() * r.rational_part() / line.value.rational_part();
      if (!is_integer(k2)) return false;
      return mpz_perfect_square_p(k2.get_num().get_mpz_t()) != 0;
    }
    case LineLattice::Kind::Irrational:
      throw MembershipUndecidable("r = " + to_string(r) + " in " + line.label +
                                  "·Z needs a linear relation between " + line.label + ", 1 and pi");
  }
  return false;
}

}  // namespace

std::optional<ExactScalar> LineLattice::square() const {
  switch (kind) {
    case Kind::Exact:
      // a π component would square to π²
      if (!value.is_rational()) return std::nullopt;
      return value * value;
    case Kind::Square: return value;
    case Kind::Irrational: return std::nullopt;
  }
  return std::nullopt;
}

std::string LineLattice::describe() const {
  switch (kind) {
    case Kind::Exact: return "w=" + to_string(value);
    case Kind::Square: return "w2=" + to_string(value);
    case Kind::Irrational: return "w=" + label;
  }
  return "?";
}

std::string to_string(Dim4Angle a) {
  switch (a) {
    case Dim4Angle::TwoPi: return "2pi";
    case Dim4Angle::Pi: return "pi";
    case Dim4Angle::HalfPi: return "pi/2";
  }
  return "?";
}

Dim4Angle parse_dim4_angle(std::string_view text) {
  ExactScalar v;
  try {
    v = parse_exact_scalar(text);
  } catch (const ParseError&) {
    throw InvalidSpec("dim4 angle must be one of 2pi, pi, pi/2; got '" + std::string(text) + "'");
  }
  // Λ_{k,0} is the 2π family: both spellings are accepted.
  if (v.is_zero() || v == ExactScalar::pi_times(2)) return Dim4Angle::TwoPi;
  if (v == ExactScalar::pi_times(1)) return Dim4Angle::Pi;
  if (v == ExactScalar::pi_times(Rational(1, 2))) return Dim4Angle::HalfPi;
  throw InvalidSpec("dim4 angle must be one of 2pi, pi, pi/2; got '" + std::string(text) + "'");
}

ExactScalar angle_value(Dim4Angle a) {
  switch (a) {
    case Dim4Angle::TwoPi: return ExactScalar::pi_times(2);
    case Dim4Angle::Pi: return ExactScalar::pi_times(1);
    case Dim4Angle::HalfPi: return ExactScalar::pi_times(Rational(1, 2));
  }
  return 0;
}

LatticeSpec LatticeSpec::dim4(long k, Dim4Angle angle) {
  if (k < 1) throw InvalidSpec("dim4: k must be a positive integer");
  return LatticeSpec(FrequencyList{1}, Dim4Family{k, angle});
}

LatticeSpec LatticeSpec::dim6(long k, long p, long q, int M) {
  if (k < 1 || p < 1 || q < 1) throw InvalidSpec("dim6: k, p, q must be positive integers");
  if (M != 1 && M != 2 && M != 4) throw InvalidSpec("dim6: M must be 1, 2 or 4");
  if (std::gcd(p, q) != 1) throw InvalidSpec("dim6: p and q must be coprime");
  if (M > 1 && q % 2 == 0) throw InvalidSpec("dim6: q must be odd when M > 1");
  return LatticeSpec(FrequencyList{1, Rational(p, q)}, Dim6Family{k, p, q, M});
}

LatticeSpec LatticeSpec::twisted(const LatticeSpec& base, ExactScalar m) {
  if (!base.is_closed_form()) throw UnsupportedSpec("twisted: base must be a closed-form family");
  if (!m.is_rational() && !profile(base).t0.is_rational())
    throw InvalidSpec("twisted: m = " + to_string(m) + " times the pi-valued t step is not in Q+Q*pi");
  return LatticeSpec(base.freqs(), TwistedFamily{std::make_shared<const LatticeSpec>(base), std::move(m)});
}

LatticeSpec LatticeSpec::product_line(const LatticeSpec& base, LineLattice line) {
  if (!base.is_closed_form()) throw UnsupportedSpec("product_line: base must be a closed-form family");
  switch (line.kind) {
    case LineLattice::Kind::Exact:
    case LineLattice::Kind::Square:
      if (line.value.sign() <= 0) throw InvalidSpec("product_line: w (or w^2) must be positive");
      break;
    case LineLattice::Kind::Irrational:
      if (line.label.empty()) throw InvalidSpec("product_line: irrational w needs a label");
      break;
  }
  return LatticeSpec(base.freqs(), ProductLineFamily{std::make_shared<const LatticeSpec>(base), std::move(line)});
}

LatticeSpec LatticeSpec::generator_list(FrequencyList freqs, std::vector<ExactElement> gens, int depth) {
  if (depth < 1) throw InvalidSpec("generator list: depth must be >= 1");
  for (const auto& g : gens)
    if (g.v.size() != 2 * freqs.n()) throw DimensionMismatch("generator list: generator " + to_string(g));
  return LatticeSpec(std::move(freqs), GeneratorFamily{std::move(gens), depth});
}

std::string LatticeSpec::name() const {
  return std::visit(
      [](const auto& fam) -> std::string {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, Dim4Family>) {
          return "dim4:k=" + std::to_string(fam.k) + ":angle=" + to_string(fam.angle);
        } else if constexpr (std::is_same_v<F, Dim6Family>) {
          return "dim6:k=" + std::to_string(fam.k) + ":p=" + std::to_string(fam.p) + ":q=" + std::to_string(fam.q) +
                 ":M=" + std::to_string(fam.M);
        } else if constexpr (std::is_same_v<F, TwistedFamily>) {
          return "twisted[m=" + to_string(fam.m) + "](" + fam.base->name() + ")";
        } else if constexpr (std::is_same_v<F, ProductLineFamily>) {
          return "product_line[" + fam.line.describe() + "](" + fam.base->name() + ")";
        } else {
          return "generators[" + std::to_string(fam.generators.size()) + ",depth=" + std::to_string(fam.depth) + "]";
        }
      },
      family_);
}

bool LatticeSpec::is_closed_form() const {
  if (std::holds_alternative<Dim4Family>(family_) || std::holds_alternative<Dim6Family>(family_)) return true;
  if (const auto* t = std::get_if<TwistedFamily>(&family_)) return t->base->is_closed_form();
  return false;
}

bool contains(const LatticeSpec& spec, const ExactElement& g) {
  require_dim(spec, g);
  if (const auto* fam = std::get_if<GeneratorFamily>(&spec.family())) return generator_search(spec, *fam, g);
  if (std::holds_alternative<ProductLineFamily>(spec.family()))
    throw UnsupportedSpec("lattice " + spec.name() + ": membership needs the line coordinate as well");
  return closed_form_contains(closed_form(spec), g);
}

bool contains(const LatticeSpec& spec, const ExactElement& g, const ExactScalar& r) {
  const auto* fam = std::get_if<ProductLineFamily>(&spec.family());
  if (!fam) throw UnsupportedSpec("lattice " + spec.name() + " has no line factor");
  return contains(*fam->base, g) && line_contains(fam->line, r);
}

LatticeProfile profile(const LatticeSpec& spec) {
  const auto cf = closed_form(spec);
  LatticeProfile p;
  p.t0 = cf.t0;
  p.central_w = ExactScalar(cf.w);
  // K0 = lcm_i den(λ_i·t0 / 2π); t0 is a rational multiple of π.
  p.K0 = 1;
  for (const auto& l : spec.freqs().values()) p.K0 = lcm(p.K0, Rational(l * cf.t0.pi_part() / 2).get_den());
  // Members (z, 0, i·t0) have z ∈ i·c + wℤ with c = m·t0.
  const auto c = times(cf.m, cf.t0);
  if (c && c->is_rational()) {
    p.has_pure_t = true;
    p.pure_t_multiple = Rational(c->rational_part() / cf.w).get_den();
  }
  return p;
}

ExactElement central_element(const LatticeSpec& spec) {
  const auto cf = closed_form(spec);
  ExactElement g = ExactElement::identity(spec.freqs().n());
  g.z = cf.w;
  return g;
}

std::optional<ExactElement> pure_t_element(const LatticeSpec& spec) {
  const auto p = profile(spec);
  if (!p.has_pure_t) return std::nullopt;
  ExactElement g = ExactElement::identity(spec.freqs().n());
  g.t = p.t0 * Rational(p.pure_t_multiple);
  return g;
}

std::vector<ExactElement> generators(const LatticeSpec& spec) {
  if (const auto* fam = std::get_if<GeneratorFamily>(&spec.family())) return fam->generators;
  const std::size_t n = spec.freqs().n();
  std::vector<ExactElement> out{central_element(spec)};
  for (std::size_t i = 0; i < 2 * n; ++i) {
    ExactElement g = ExactElement::identity(n);
    g.v[i] = 1;
    out.push_back(g);
  }
  std::vector<Integer> zero_v(2 * n, Integer(0));
  out.push_back(member_with(spec, 0, zero_v, 1));
  return out;
}

ExactElement member_with(const LatticeSpec& spec, const Integer& iz, const std::vector<Integer>& iv,
                         const Integer& it) {
  const auto cf = closed_form(spec);
  if (iv.size() != 2 * spec.freqs().n()) throw DimensionMismatch("member_with: wrong number of v indices");
  ExactElement g;
  g.t = cf.t0 * Rational(it);
  const auto shift = times(cf.m, g.t);
  if (!shift) throw NonRepresentable("member_with: twist m·t needs a pi^2 term");
  g.z = ExactScalar(Rational(cf.w * iz)) + *shift;
  for (const auto& x : iv) g.v.emplace_back(x);
  return g;
}

ExactElement nearest_member(const LatticeSpec& spec, const Element& g) {
  const auto cf = closed_form(spec);
  if (static_cast<std::size_t>(g.v.size()) != 2 * spec.freqs().n())
    throw DimensionMismatch("nearest_member: wrong dimension");
  if (!std::isfinite(g.z) || !std::isfinite(g.t) || !g.v.allFinite())
    throw NonFiniteState("nearest_member: non-finite coordinates");
  const Integer it = round_to_integer(rational_from_double(g.t / cf.t0.to_double()));
  const double shift = cf.m.to_double() * (cf.t0.to_double() * it.get_d());
  const Integer iz = round_to_integer(rational_from_double((g.z - shift) / cf.w.get_d()));
  std::vector<Integer> iv;
  for (Eigen::Index i = 0; i < g.v.size(); ++i) iv.push_back(round_to_integer(rational_from_double(g.v(i))));
  return member_with(spec, iz, iv, it);
}

}  // namespace osc
