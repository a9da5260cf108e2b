#include "osc/normalizer.hpp"

#include <random>

#include "osc/errors.hpp"

namespace osc {

namespace {

bool in_grid(const Rational& x, const Rational& scale) { return is_integer(x / scale); }

bool half_odd(const Rational& x) {
  const Rational twice = 2 * x;
  return is_integer(twice) && !is_integer(x);
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

std::string factor_grammar(const SetFactor& f) {
  switch (f.kind) {
    case SetFactor::Kind::Real: return "R";
    case SetFactor::Kind::IntegerOrHalfOdd: return "I" + std::to_string(f.dim);
    case SetFactor::Kind::Angle: return "(" + to_string(f.angle) + ")Z";
    case SetFactor::Kind::Grid: {
      const std::string z = "Z^" + std::to_string(f.dim);
      return f.scale == 1 ? z : "(" + to_string(f.scale) + ")" + z;
    }
  }
  return "?";
}

SetFactor parse_factor(const std::string& text) {
  if (text == "R") return SetFactor::real();
  if (text == "I2" || text == "I4") return SetFactor::integer_or_half_odd(text == "I2" ? 2 : 4);
  std::string rest = text;
  std::string inside = "1";
  if (!rest.empty() && rest.front() == '(') {
    const auto close = rest.find(')');
    if (close == std::string::npos) throw ParseError("product set: unbalanced '(' in '" + text + "'");
    inside = rest.substr(1, close - 1);
    rest = rest.substr(close + 1);
  }
  if (rest == "Z") return SetFactor::angle_grid(parse_exact_scalar(inside));
  if (rest.rfind("Z^", 0) == 0) {
    const std::size_t dim = std::stoul(rest.substr(2));
    if (dim == 0) throw ParseError("product set: zero exponent in '" + text + "'");
    return SetFactor::grid(dim, parse_rational(inside));
  }
  throw ParseError("product set: cannot read factor '" + text + "'");
}

const Dim4Family* as_dim4(const LatticeSpec& s) { return std::get_if<Dim4Family>(&s.family()); }
const Dim6Family* as_dim6(const LatticeSpec& s) { return std::get_if<Dim6Family>(&s.family()); }

NormalizerTable table_for(const LatticeSpec& spec, bool published) {
  NormalizerTable t;
  t.family = spec.name();
  t.factors.push_back(SetFactor::real());
  if (const auto* f = as_dim4(spec)) {
    const Rational k = f->k;
    switch (f->angle) {
      case Dim4Angle::TwoPi: t.factors.push_back(SetFactor::grid(2, 1 / (2 * k))); break;
      case Dim4Angle::Pi: t.factors.push_back(SetFactor::grid(2, Rational(1, 2))); break;
      case Dim4Angle::HalfPi:
        if (!published && f->k % 2 == 0) t.factors.push_back(SetFactor::integer_or_half_odd(2));
        else t.factors.push_back(SetFactor::grid(2, 1));
        break;
    }
    t.factors.push_back(SetFactor::angle_grid(ExactScalar::pi_times(Rational(1, 2))));
    return t;
  }
  const auto* f = as_dim6(spec);
  if (!f) throw UnsupportedSpec("normalizer table: " + spec.name() + " is not a dim4 or dim6 family");
  const Rational inv2k = Rational(1, 2 * f->k);
  const bool p_odd = f->p % 2 != 0, k_odd = f->k % 2 != 0;
  switch (f->M) {
    case 1: t.factors.push_back(SetFactor::grid(4, inv2k)); break;
    case 2:
      if (p_odd) t.factors.push_back(SetFactor::grid(4, Rational(1, 2)));
      else {
        t.factors.push_back(SetFactor::grid(2, Rational(1, 2)));
        t.factors.push_back(SetFactor::grid(2, inv2k));
      }
      break;
    default:
      if (p_odd) {
        if (k_odd) t.factors.push_back(SetFactor::integer_or_half_odd(4));
        else {
          t.factors.push_back(SetFactor::integer_or_half_odd(2));
          t.factors.push_back(SetFactor::integer_or_half_odd(2));
        }
      } else {
        t.factors.push_back(k_odd ? SetFactor::grid(2, 1) : SetFactor::integer_or_half_odd(2));
        const bool two_mod_four = f->p % 4 == 2;
        t.factors.push_back(!published && two_mod_four ? SetFactor::grid(2, Rational(1, 2)) : SetFactor::grid(2, inv2k));
      }
  }
  t.factors.push_back(SetFactor::angle_grid(ExactScalar::pi_times(Rational(f->q, 2))));
  return t;
}

bool integral(const std::vector<Rational>& v, const Rational& scale) {
  for (const auto& x : v)
    if (!in_grid(x, scale)) return false;
  return true;
}

}  // namespace

std::string NormalizerTable::grammar() const {
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) out += (i ? " x " : "") + factor_grammar(factors[i]);
  return out;
}

bool NormalizerTable::contains(const ExactElement& g) const {
  std::size_t width = 0;
  for (const auto& f : factors)
    if (f.kind != SetFactor::Kind::Real && f.kind != SetFactor::Kind::Angle) width += f.dim;
  if (width != g.v.size()) throw DimensionMismatch("normalizer table " + grammar() + ": element has the wrong size");
  std::size_t at = 0;
  bool z_done = false;
  for (const auto& f : factors) {
    switch (f.kind) {
      case SetFactor::Kind::Real:
        if (z_done) throw ParseError("normalizer table: more than one R factor");
        z_done = true;
        break;
      case SetFactor::Kind::Angle:
        if (!is_integer_multiple(g.t, f.angle)) return false;
        break;
      case SetFactor::Kind::Grid:
        for (std::size_t i = 0; i < f.dim; ++i)
          if (!in_grid(g.v[at + i], f.scale)) return false;
        at += f.dim;
        break;
      case SetFactor::Kind::IntegerOrHalfOdd: {
        bool all_int = true, all_half = true;
        for (std::size_t i = 0; i < f.dim; ++i) {
          all_int = all_int && is_integer(g.v[at + i]);
          all_half = all_half && half_odd(g.v[at + i]);
        }
        if (!all_int && !all_half) return false;
        at += f.dim;
        break;
      }
    }
  }
  return true;
}

NormalizerTable NormalizerTable::parse(std::string_view text) {
  NormalizerTable t;
  std::size_t start = 0;
  while (true) {
    const auto sep = text.find(" x ", start);
    const auto piece = trim(text.substr(start, sep == std::string_view::npos ? std::string_view::npos : sep - start));
    if (piece.empty()) throw ParseError("product set: empty factor in '" + std::string(text) + "'");
    t.factors.push_back(parse_factor(piece));
    if (sep == std::string_view::npos) break;
    start = sep + 3;
  }
  return t;
}

NormalizerTable normalizer_table(const LatticeSpec& spec) { return table_for(spec, false); }
NormalizerTable published_normalizer_table(const LatticeSpec& spec) { return table_for(spec, true); }

bool in_normalizer(const ExactElement& g, const LatticeSpec& spec) {
  if (g.v.size() != 2 * spec.freqs().n()) throw DimensionMismatch("in_normalizer: element does not match the lattice");
  return normalizer_table(spec).contains(g);
}

bool normalizer_oracle(const ExactElement& g, const LatticeSpec& spec) {
  const auto& f = spec.freqs();
  if (g.v.size() != 2 * f.n()) throw DimensionMismatch("normalizer_oracle: element does not match the lattice");
  if (!has_exact_rotation(g.t, f)) {
    if (std::holds_alternative<GeneratorFamily>(spec.family()) || std::holds_alternative<ProductLineFamily>(spec.family()))
      throw ExactModeUnsupportedAngle("normalizer_oracle: t = " + to_string(g.t) + " has no exact rotation");
    return false;
  }
  const ExactElement gi = invert(g, f);
  for (const auto& gamma : generators(spec))
    if (!contains(spec, conjugate(g, gamma, f)) || !contains(spec, conjugate(gi, gamma, f))) return false;
  return true;
}

bool ConditionReport::all_hold() const {
  for (const auto& c : checks)
    if (!c.holds) return false;
  return true;
}

ConditionReport normalizer_conditions(const ExactElement& g, const LatticeSpec& spec) {
  const auto* fam = as_dim6(spec);
  if (!fam) throw UnsupportedSpec("normalizer_conditions: " + spec.name() + " is not a dim6 family");
  const auto& f = spec.freqs();
  if (g.v.size() != 4) throw DimensionMismatch("normalizer_conditions: element does not match the lattice");
  ConditionReport r;
  r.checks.push_back({"t on the (q pi/2) grid", 0, is_integer_multiple(g.t, ExactScalar::pi_times(Rational(fam->q, 2)))});
  r.checks.push_back({"v in Z^4/2k", 0, integral(g.v, Rational(1, 2 * fam->k))});
  const Rational inv_k(1, fam->k);
  for (int c = 1; c < fam->M; ++c) {
    const auto rc = exact_rotation(ExactScalar::pi_times(Rational(2 * fam->q * c, fam->M)), f).apply(g.v);
    std::vector<Rational> minus(4), plus(4);
    for (std::size_t i = 0; i < 4; ++i) {
      minus[i] = g.v[i] - rc[i];
      plus[i] = g.v[i] + rc[i];
    }
    r.checks.push_back({"v - R_c v in Z^4", c, integral(minus, 1)});
    r.checks.push_back({"v^T J R_c v in Z/k", c, in_grid(symplectic(g.v, rc), inv_k)});
    r.checks.push_back({"v + R_c v in Z^4/k", c, integral(plus, inv_k)});
  }
  return r;
}

std::vector<ExactElement> verification_grid(const LatticeSpec& spec) {
  std::vector<Rational> values;
  std::vector<ExactScalar> times;
  const auto pi = [](Rational r) { return ExactScalar::pi_times(r); };
  if (as_dim4(spec)) {
    for (auto [a, b] : {std::pair{0, 1}, {1, 8}, {1, 6}, {1, 4}, {1, 3}, {1, 2}, {3, 4}, {1, 1}, {3, 2}, {-1, 2}})
      values.emplace_back(a, b);
    times = {0, pi(Rational(1, 4)), pi(Rational(1, 2)), pi(1), pi(Rational(3, 2)), pi(2)};
  } else if (const auto* f = as_dim6(spec)) {
    values = {0, Rational(1, 4), Rational(1, 3), Rational(1, 2), 1};
    times = {0, pi(Rational(1, 4)), pi(Rational(1, 2)), pi(1), pi(Rational(f->q, 2))};
  } else {
    throw UnsupportedSpec("verification_grid: " + spec.name() + " is not a dim4 or dim6 family");
  }
  for (auto& v : values) v.canonicalize();
  const std::size_t width = 2 * spec.freqs().n();
  const ExactScalar zs[3] = {0, ExactScalar(Rational(1, 7)), pi(1)};
  std::vector<ExactElement> grid;
  std::vector<std::size_t> digit(width, 0);
  std::size_t index = 0;
  while (true) {
    std::vector<Rational> v(width);
    for (std::size_t i = 0; i < width; ++i) v[i] = values[digit[i]];
    for (const auto& t : times) grid.push_back({zs[index++ % 3], v, t});
    std::size_t i = 0;
    while (i < width && ++digit[i] == values.size()) digit[i++] = 0;
    if (i == width) break;
  }
  return grid;
}

GridAgreement grid_agreement(const LatticeSpec& spec, const std::vector<ExactElement>& grid, std::size_t keep) {
  GridAgreement out;
  const auto table = normalizer_table(spec);
  const auto published = published_normalizer_table(spec);
  out.has_conditions = as_dim6(spec) != nullptr;
  for (const auto& g : grid) {
    const bool truth = normalizer_oracle(g, spec);
    ++out.points;
    if (table.contains(g) == truth) ++out.table_agree;
    else if (out.table_mismatches.size() < keep) out.table_mismatches.push_back(g);
    if (published.contains(g) == truth) ++out.published_agree;
    else if (out.published_mismatches.size() < keep) out.published_mismatches.push_back(g);
    if (out.has_conditions) {
      if (normalizer_conditions(g, spec).all_hold() == truth) ++out.conditions_agree;
      else if (out.condition_mismatches.size() < keep) out.condition_mismatches.push_back(g);
    }
  }
  return out;
}

FiberVerdict is_fiber_preserving(const IsometryDescriptor& f, const LatticeSpec& spec, int samples,
                                 unsigned long seed) {
  const auto& freqs = spec.freqs();
  const auto prof = profile(spec);
  const std::size_t width = 2 * freqs.n();

  std::vector<ExactElement> points{ExactElement::identity(freqs.n())};
  for (const Rational& s : {Rational(1, 2), Rational(1, 3)}) {
    points.push_back({prof.central_w * s, std::vector<Rational>(width, Rational(0)), 0});
    for (std::size_t i = 0; i < width; ++i) {
      ExactElement g = ExactElement::identity(freqs.n());
      g.v[i] = s;
      points.push_back(g);
    }
    points.push_back({0, std::vector<Rational>(width, Rational(0)), prof.t0 * s});
    points.push_back({prof.central_w * s, std::vector<Rational>(width, s), prof.t0 * s});
  }
  std::mt19937_64 rng(seed);
  const auto frac = [&] {
    Rational q(std::uniform_int_distribution<long>(-6, 6)(rng), std::uniform_int_distribution<long>(1, 4)(rng));
    q.canonicalize();
    return q;
  };
  for (int k = 0; k < samples; ++k) {
    ExactElement g{prof.central_w * frac(), {}, {}};
    for (std::size_t i = 0; i < width; ++i) g.v.push_back(frac());
    g.t = prof.t0 * frac();
    points.push_back(std::move(g));
  }

  std::vector<ExactElement> lambdas;
  for (const auto& gamma : generators(spec)) {
    lambdas.push_back(gamma);
    lambdas.push_back(invert(gamma, freqs));
  }

  FiberVerdict verdict;
  verdict.decided_exactly = true;
  for (const auto& g : points)
    for (const auto& lambda : lambdas) {
      ++verdict.pairs_checked;
      std::optional<ExactElement> exact;
      try {
        const auto fg = apply_exact(f, g, freqs);
        const auto fgl = fg ? apply_exact(f, multiply(g, lambda, freqs), freqs) : std::nullopt;
        if (fg && fgl) exact = multiply(invert(*fg, freqs), *fgl, freqs);
      } catch (const ExactModeUnsupportedAngle&) {
      }
      bool member;
      Element image;
      verdict.decided_exactly = verdict.decided_exactly && exact.has_value();
      if (exact) {
        member = contains(spec, *exact);
        image = to_float(*exact);
      } else {
        const Element fg = apply(f, to_float(g), freqs);
        const Element fgl = apply(f, multiply(to_float(g), to_float(lambda), freqs), freqs);
        image = multiply(invert(fg, freqs), fgl, freqs);
        const ExactElement near = nearest_member(spec, image);
        const double scale = std::max(1.0, image.coords().cwiseAbs().maxCoeff());
        member = distance(image, to_float(near)) <= kGroupMapTolerance * scale && contains(spec, near);
      }
      if (!member) {
        verdict.preserving = false;
        verdict.g = g;
        verdict.lambda = lambda;
        verdict.image = image;
        verdict.decided_exactly = exact.has_value();
        return verdict;
      }
    }
  return verdict;
}

}  // namespace osc
