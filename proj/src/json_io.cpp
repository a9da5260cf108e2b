#include "osc/json_io.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>

namespace osc {

namespace {

std::string child(const std::string& ptr, std::string_view key) { return ptr + "/" + std::string(key); }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& field(const Json& j, std::string_view key, const std::string& ptr) {
  if (!j.is_object()) throw SchemaError(ptr.empty() ? "/" : ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(child(ptr, key), "missing field");
  return *it;
}

long integer_field(const Json& j, std::string_view key, const std::string& ptr) {
  const Json& v = field(j, key, ptr);
  if (!v.is_number_integer()) throw SchemaError(child(ptr, key), "expected an integer");
  return v.get<long>();
}

long positive_field(const Json& j, std::string_view key, const std::string& ptr) {
  long v = integer_field(j, key, ptr);
  if (v < 1) throw SchemaError(child(ptr, key), "must be a positive integer");
  return v;
}

// Numbers keep their decimal spelling, so 0.1 reads as 1/10.
Rational rational_from_json(const Json& j, const std::string& ptr) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number_float()) {
      if (!std::isfinite(j.get<double>())) throw SchemaError(ptr, "non-finite number");
      return parse_rational(j.dump());
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
  throw SchemaError(ptr, "expected a rational (number or \"a/b\")");
}

double double_from_json(const Json& j, const std::string& ptr) {
  if (j.is_number()) return j.get<double>();
  return exact_scalar_from_json(j, ptr).to_double();
}

Json kind_name(CausalClass c) { return std::string(to_string(c)); }

}  // namespace

ExactScalar exact_scalar_from_json(const Json& j, const std::string& ptr) {
  if (j.is_string()) {
    try {
      return parse_exact_scalar(j.get<std::string>());
    } catch (const Error& e) {
      throw SchemaError(ptr, e.what());
    }
  }
  if (j.is_number()) return ExactScalar(rational_from_json(j, ptr));
  throw SchemaError(ptr, "expected a number or a string like \"1/2 + 3/4 pi\"");
}

Json to_json(const ExactScalar& x) { return to_string(x); }
Json to_json(const Rational& q) { return to_string(q); }

FrequencyList frequencies_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_array() || j.empty()) throw SchemaError(ptr, "expected a non-empty array of rationals");
  std::vector<Rational> values;
  for (std::size_t i = 0; i < j.size(); ++i) values.push_back(rational_from_json(j[i], child(ptr, i)));
  try {
    return FrequencyList(std::move(values));
  } catch (const Error& e) {
    throw SchemaError(ptr, e.what());
  }
}

Json to_json(const FrequencyList& f) {
  Json out = Json::array();
  for (const auto& l : f.values()) out.push_back(to_string(l));
  return out;
}

ExactElement exact_element_from_json(const Json& j, std::size_t n, const std::string& ptr) {
  ExactElement g;
  g.z = exact_scalar_from_json(field(j, "z", ptr), child(ptr, "z"));
  g.t = exact_scalar_from_json(field(j, "t", ptr), child(ptr, "t"));
  const Json& v = field(j, "v", ptr);
  const auto vptr = child(ptr, "v");
  if (!v.is_array()) throw SchemaError(vptr, "expected an array");
  if (v.size() != 2 * n)
    throw SchemaError(vptr, "expected " + std::to_string(2 * n) + " entries, got " + std::to_string(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) g.v.push_back(rational_from_json(v[i], child(vptr, i)));
  return g;
}

Element element_from_json(const Json& j, std::size_t n, const std::string& ptr) {
  Element g;
  g.z = double_from_json(field(j, "z", ptr), child(ptr, "z"));
  g.t = double_from_json(field(j, "t", ptr), child(ptr, "t"));
  const auto vptr = child(ptr, "v");
  g.v = vector_from_json(field(j, "v", ptr), vptr);
  if (static_cast<std::size_t>(g.v.size()) != 2 * n)
    throw SchemaError(vptr, "expected " + std::to_string(2 * n) + " entries, got " + std::to_string(g.v.size()));
  return g;
}

Json to_json(const ExactElement& g) {
  Json v = Json::array();
  for (const auto& x : g.v) v.push_back(to_string(x));
  return {{"z", to_json(g.z)}, {"v", v}, {"t", to_json(g.t)}};
}

Json to_json(const Element& g) { return {{"z", g.z}, {"v", to_json(g.v)}, {"t", g.t}}; }

Json to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_array()) throw SchemaError(ptr, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = double_from_json(j[i], child(ptr, i));
  return v;
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& ptr) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw SchemaError(ptr, "expected an array of rows");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw SchemaError(child(ptr, r), "rows must have equal length");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r], child(ptr, r)).transpose();
  }
  return m;
}

LatticeSpec lattice_from_json(const Json& j, const std::string& ptr) {
  const Json& fam = field(j, "family", ptr);
  if (!fam.is_string()) throw SchemaError(child(ptr, "family"), "expected a string");
  const auto family = fam.get<std::string>();
  try {
    if (family == "dim4") {
      const Json& angle = field(j, "angle", ptr);
      if (!angle.is_string() && !angle.is_number()) throw SchemaError(child(ptr, "angle"), "expected 2pi, pi or pi/2");
      Dim4Angle a;
      try {
        a = parse_dim4_angle(angle.is_string() ? angle.get<std::string>() : angle.dump());
      } catch (const InvalidSpec& e) {
        throw SchemaError(child(ptr, "angle"), e.what());
      }
      return LatticeSpec::dim4(positive_field(j, "k", ptr), a);
    }
    if (family == "dim6") {
      const long M = integer_field(j, "M", ptr);
      if (M != 1 && M != 2 && M != 4) throw SchemaError(child(ptr, "M"), "M must be 1, 2 or 4");
      const long k = positive_field(j, "k", ptr), p = positive_field(j, "p", ptr), q = positive_field(j, "q", ptr);
      if (std::gcd(p, q) != 1) throw SchemaError(child(ptr, "q"), "p and q must be coprime");
      if (M > 1 && q % 2 == 0) throw SchemaError(child(ptr, "q"), "q must be odd when M > 1");
      return LatticeSpec::dim6(k, p, q, static_cast<int>(M));
    }
    if (family == "twisted") {
      auto base = lattice_from_json(field(j, "base", ptr), child(ptr, "base"));
      return LatticeSpec::twisted(base, exact_scalar_from_json(field(j, "m", ptr), child(ptr, "m")));
    }
    if (family == "product_line") {
      auto base = lattice_from_json(field(j, "base", ptr), child(ptr, "base"));
      LineLattice line;
      if (j.contains("w2")) {
        line.kind = LineLattice::Kind::Square;
        line.value = exact_scalar_from_json(j["w2"], child(ptr, "w2"));
      } else if (j.contains("w")) {
        line.value = exact_scalar_from_json(j["w"], child(ptr, "w"));
      } else if (j.contains("w_label")) {
        if (!j["w_label"].is_string()) throw SchemaError(child(ptr, "w_label"), "expected a string");
        line.kind = LineLattice::Kind::Irrational;
        line.label = j["w_label"].get<std::string>();
      } else {
        throw SchemaError(child(ptr, "w2"), "one of w2, w, w_label is required");
      }
      return LatticeSpec::product_line(base, line);
    }
    if (family == "generators") {
      auto freqs = frequencies_from_json(field(j, "freqs", ptr), child(ptr, "freqs"));
      const Json& gens = field(j, "generators", ptr);
      const auto gptr = child(ptr, "generators");
      if (!gens.is_array()) throw SchemaError(gptr, "expected an array of elements");
      std::vector<ExactElement> list;
      for (std::size_t i = 0; i < gens.size(); ++i)
        list.push_back(exact_element_from_json(gens[i], freqs.n(), child(gptr, i)));
      int depth = j.contains("depth") ? static_cast<int>(integer_field(j, "depth", ptr)) : 6;
      return LatticeSpec::generator_list(std::move(freqs), std::move(list), depth);
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const InvalidSpec& e) {
    throw SchemaError(ptr.empty() ? "/" : ptr, e.what());
  } catch (const UnsupportedSpec& e) {
    throw SchemaError(ptr.empty() ? "/" : ptr, e.what());
  } catch (const DimensionMismatch& e) {
    throw SchemaError(ptr.empty() ? "/" : ptr, e.what());
  }
  throw SchemaError(child(ptr, "family"), "unknown family '" + family + "'");
}

Json to_json(const LatticeSpec& spec) {
  return std::visit(
      [&](const auto& fam) -> Json {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, Dim4Family>) {
          return {{"family", "dim4"}, {"k", fam.k}, {"angle", to_string(fam.angle)}};
        } else if constexpr (std::is_same_v<F, Dim6Family>) {
          return {{"family", "dim6"}, {"k", fam.k}, {"p", fam.p}, {"q", fam.q}, {"M", fam.M}};
        } else if constexpr (std::is_same_v<F, TwistedFamily>) {
          return {{"family", "twisted"}, {"m", to_json(fam.m)}, {"base", to_json(*fam.base)}};
        } else if constexpr (std::is_same_v<F, ProductLineFamily>) {
          Json out = {{"family", "product_line"}, {"base", to_json(*fam.base)}};
          switch (fam.line.kind) {
            case LineLattice::Kind::Exact: out["w"] = to_json(fam.line.value); break;
            case LineLattice::Kind::Square: out["w2"] = to_json(fam.line.value); break;
            case LineLattice::Kind::Irrational: out["w_label"] = fam.line.label; break;
          }
          return out;
        } else {
          Json gens = Json::array();
          for (const auto& g : fam.generators) gens.push_back(to_json(g));
          return {{"family", "generators"},
                  {"freqs", to_json(spec.freqs())},
                  {"generators", gens},
                  {"depth", fam.depth}};
        }
      },
      spec.family());
}

namespace {

// Compact names: "dim4:k=1:angle=2pi", "dim6:k=..:p=..:q=..:M=..", "twisted[m=..](…)",
// "product_line[w2=..](…)" (also w=.., where a value that is not in Q+Q*pi becomes a label).
class CompactLatticeParser {
 public:
  explicit CompactLatticeParser(std::string_view s) : s_(s) {}

  LatticeSpec parse() {
    auto spec = spec_at(0, s_.size());
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SchemaError("/lattice", msg + " in '" + std::string(s_) + "'");
  }

  static std::string trim(std::string_view t) {
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
    return std::string(t);
  }

  // key=value pairs separated by ':' after the family tag.
  Json keyed(std::string_view body, const std::string& family) const {
    Json j = {{"family", family}};
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t end = body.find(':', pos);
      if (end == std::string_view::npos) end = body.size();
      auto item = body.substr(pos, end - pos);
      auto eq = item.find('=');
      if (eq == std::string_view::npos) fail("expected key=value, got '" + std::string(item) + "'");
      auto key = trim(item.substr(0, eq));
      auto value = trim(item.substr(eq + 1));
      if (key == "angle") {
        j[key] = value;
      } else {
        try {
          std::size_t used = 0;
          long v = std::stol(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
          j[key] = v;
        } catch (const std::exception&) {
          fail("'" + key + "' must be an integer");
        }
      }
      pos = end + 1;
    }
    return j;
  }

  LatticeSpec spec_at(std::size_t begin, std::size_t end) const {
    auto text = s_.substr(begin, end - begin);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
      text.remove_prefix(1);
      ++begin;
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.starts_with("dim4:")) return lattice_from_json(keyed(text.substr(5), "dim4"), "/lattice");
    if (text.starts_with("dim6:")) return lattice_from_json(keyed(text.substr(5), "dim6"), "/lattice");
    for (std::string_view tag : {"twisted", "product_line"}) {
      if (!text.starts_with(tag) || text.size() <= tag.size() || text[tag.size()] != '[') continue;
      auto close = text.find(']', tag.size());
      if (close == std::string_view::npos || close + 1 >= text.size() || text[close + 1] != '(' || text.back() != ')')
        fail("expected " + std::string(tag) + "[..](..)");
      auto arg = text.substr(tag.size() + 1, close - tag.size() - 1);
      auto eq = arg.find('=');
      if (eq == std::string_view::npos) fail("expected key=value inside brackets");
      auto key = trim(arg.substr(0, eq));
      auto value = trim(arg.substr(eq + 1));
      auto base = spec_at(begin + close + 2, begin + text.size() - 1);
      Json j = {{"family", std::string(tag)}, {"base", to_json(base)}};
      if (tag == "twisted") {
        if (key != "m") fail("twisted takes m=..");
        j["m"] = value;
      } else if (key == "w2") {
        j["w2"] = value;
      } else if (key == "w") {
        try {
          parse_exact_scalar(value);
          j["w"] = value;
        } catch (const ParseError&) {
          j["w_label"] = value;
        }
      } else {
        fail("product_line takes w2=.. or w=..");
      }
      return lattice_from_json(j, "/lattice");
    }
    fail("unknown lattice family");
  }

  std::string_view s_;
};

}  // namespace

LatticeSpec parse_lattice(std::string_view text) {
  auto first = text.find_first_not_of(" \t\n");
  if (first != std::string_view::npos && text[first] == '{') {
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw SchemaError("/lattice", e.what());
    }
    return lattice_from_json(j, "/lattice");
  }
  return CompactLatticeParser(text).parse();
}

ExactAlgebraVector parse_algebra_vector(std::string_view text, std::size_t n) {
  auto fail = [&](const std::string& msg) -> ExactAlgebraVector {
    throw SchemaError("/params/X", msg + " in '" + std::string(text) + "'");
  };
  auto x = ExactAlgebraVector::zero(n);
  const bool listed = text.find(',') != std::string_view::npos ||
                      text.find_first_of("ZTXYztxy") == std::string_view::npos;
  if (listed) {
    std::vector<Rational> coords;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      auto end = text.find(',', pos);
      if (end == std::string_view::npos) end = text.size();
      try {
        coords.push_back(parse_rational(text.substr(pos, end - pos)));
      } catch (const Error& e) {
        fail(e.what());
      }
      pos = end + 1;
    }
    if (coords.size() != 2 * n + 2)
      fail("expected " + std::to_string(2 * n + 2) + " coordinates, got " + std::to_string(coords.size()));
    return ExactAlgebraVector::from_coords(coords);
  }
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  bool first = true;
  while (true) {
    skip();
    if (pos >= text.size()) break;
    Rational sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip();
    } else if (!first) {
      fail("expected '+' or '-'");
    }
    first = false;
    std::size_t coef_end = pos;
    while (coef_end < text.size() && (std::isdigit(static_cast<unsigned char>(text[coef_end])) ||
                                      text[coef_end] == '/' || text[coef_end] == '.'))
      ++coef_end;
    Rational coef = 1;
    if (coef_end > pos) {
      try {
        coef = parse_rational(text.substr(pos, coef_end - pos));
      } catch (const Error& e) {
        fail(e.what());
      }
    }
    pos = coef_end;
    skip();
    if (pos < text.size() && text[pos] == '*') {
      ++pos;
      skip();
    }
    if (pos >= text.size()) fail("missing basis name");
    const char name = static_cast<char>(std::toupper(static_cast<unsigned char>(text[pos++])));
    std::size_t index = 0;
    if (name == 'Z') {
      index = 0;
    } else if (name == 'T') {
      index = 2 * n + 1;
    } else if (name == 'X' || name == 'Y') {
      std::size_t num_end = pos;
      while (num_end < text.size() && std::isdigit(static_cast<unsigned char>(text[num_end]))) ++num_end;
      std::size_t i = 1;
      if (num_end > pos) i = std::stoul(std::string(text.substr(pos, num_end - pos)));
      else if (n != 1) fail("X and Y need an index when n > 1");
      if (i < 1 || i > n) fail("basis index out of range 1.." + std::to_string(n));
      pos = num_end;
      index = 2 * (i - 1) + (name == 'X' ? 1 : 2);
    } else {
      fail(std::string("unknown basis name '") + name + "'");
    }
    // A coefficient may also trail the name as "/k".
    if (pos < text.size() && text[pos] == '/') {
      std::size_t num_end = ++pos;
      while (num_end < text.size() && std::isdigit(static_cast<unsigned char>(text[num_end]))) ++num_end;
      if (num_end == pos) fail("expected a divisor");
      coef /= Rational(std::string(text.substr(pos, num_end - pos)));
      pos = num_end;
    }
    x.coord(index) += sign * coef;
  }
  if (first) fail("empty vector");
  return x;
}

AlgebraVector to_double(const ExactAlgebraVector& x) {
  AlgebraVector out;
  out.d = x.d.get_d();
  out.a = x.a.get_d();
  for (const auto& v : x.bc) out.bc.push_back(v.get_d());
  return out;
}

Json to_json(const AlgebraVector& x) {
  Json out = Json::array();
  for (double c : x.coords()) out.push_back(c);
  return out;
}

Json to_json(const LatticeProfile& p) {
  Json out = {{"t0", to_json(p.t0)},
              {"K0", p.K0.get_str()},
              {"central_step", to_json(p.central_w)},
              {"has_pure_t", p.has_pure_t}};
  if (p.has_pure_t) out["pure_t_multiple"] = p.pure_t_multiple.get_str();
  return out;
}

Json to_json(const LightlikeVerdict& v) {
  Json out = {{"kind", to_string(v.kind)}, {"exact", true}};
  if (v.witness) out["witness"] = to_json(*v.witness);
  if (v.pure_t) out["pure_t"] = to_json(*v.pure_t);
  return out;
}

Json to_json(const ClosedGeodesicCertificate& c) {
  Json out = {{"initial", to_json(c.initial)},
              {"s_star", c.s_star},
              {"lattice_point", to_json(c.lattice_point)},
              {"causal", kind_name(c.causal)},
              {"residual", c.residual},
              {"exact", c.exact_initial.has_value() && c.s_star_exact.has_value()}};
  if (c.exact_initial) {
    Json coords = Json::array();
    for (const auto& x : c.exact_initial->coords()) coords.push_back(to_json(x));
    out["initial_exact"] = coords;
  }
  if (c.s_star_exact) out["s_star_exact"] = to_json(*c.s_star_exact);
  return out;
}

Json to_json(const CausalPair& p) {
  Json singular = Json::array();
  for (auto b : p.singular_blocks) singular.push_back(b);
  return {{"timelike", to_json(p.timelike)},
          {"spacelike", to_json(p.spacelike)},
          {"m_timelike", p.m_timelike},
          {"m_spacelike", p.m_spacelike},
          {"singular_blocks", singular}};
}

Json to_json(const ProductLineVerdict& v) {
  Json out = {{"kind", to_string(v.kind)},
              {"reason", v.reason},
              {"assumes_independence", v.assumes_independence},
              {"exact", true}};
  if (v.relation) {
    const auto& r = *v.relation;
    out["relation"] = {{"k", r[0].get_str()}, {"m", r[1].get_str()}, {"z", r[2].get_str()}};
  }
  if (v.certificate) {
    out["certificate"] = to_json(*v.certificate);
    out["line_velocity"] = v.line_velocity;
    out["line_index"] = v.line_index.get_str();
  }
  return out;
}

Json to_json(const NormalizerTable& t) { return {{"family", t.family}, {"set", t.grammar()}}; }

Json to_json(const GridAgreement& g) {
  auto pct = [&](std::size_t k) { return g.points == 0 ? 0.0 : 100.0 * static_cast<double>(k) / g.points; };
  auto list = [](const std::vector<ExactElement>& v) {
    Json out = Json::array();
    for (const auto& e : v) out.push_back(to_json(e));
    return out;
  };
  Json out = {{"points", g.points},
              {"table_agree", g.table_agree},
              {"table_agreement_pct", pct(g.table_agree)},
              {"published_agree", g.published_agree},
              {"published_agreement_pct", pct(g.published_agree)},
              {"table_mismatches", list(g.table_mismatches)},
              {"published_mismatches", list(g.published_mismatches)},
              {"exact", true}};
  if (g.has_conditions) {
    out["conditions_agree"] = g.conditions_agree;
    out["conditions_agreement_pct"] = pct(g.conditions_agree);
    out["condition_mismatches"] = list(g.condition_mismatches);
  }
  return out;
}

Json to_json(const FiberVerdict& v) {
  Json out = {{"preserving", v.preserving},
              {"pairs_checked", v.pairs_checked},
              {"exact", v.decided_exactly},
              {"conclusion", v.preserving ? "no counterexample found" : "counterexample found"}};
  if (v.g) out["g"] = to_json(*v.g);
  if (v.lambda) out["lambda"] = to_json(*v.lambda);
  if (!v.preserving) out["image"] = to_json(v.image);
  return out;
}

Json to_json(const StructureRelationsReport& r) {
  Json rel = Json::array();
  for (const auto& o : r.relations) {
    Json e = {{"name", o.name}, {"holds", o.holds}, {"max_error", o.max_error}, {"exact", false}};
    if (o.witness) e["witness"] = to_json(*o.witness);
    rel.push_back(e);
  }
  return {{"relations", rel}, {"all_hold", r.all_hold()}};
}

Json to_json(const IsotropyElement& el) {
  Json blocks = Json::array();
  for (const auto& b : el.blocks) blocks.push_back(to_json(b));
  Json cs = Json::array();
  for (const auto& c : el.c) cs.push_back(to_json(c));
  Json out = {{"eps", el.eps}, {"blocks", blocks}, {"c", cs}, {"invert", el.invert}};
  if (el.inner) out["inner"] = {{"v", to_json(el.inner->first)}, {"t", el.inner->second}};
  return out;
}

IsometryDescriptor descriptor_from_json(const Json& j, const FrequencyList& freqs, const std::string& ptr) {
  const Json& kind_json = field(j, "kind", ptr);
  if (!kind_json.is_string()) throw SchemaError(child(ptr, "kind"), "expected a string");
  const auto kind = kind_json.get<std::string>();
  if (kind == "inversion") return IsometryDescriptor::inversion();
  if (kind == "theta") {
    const Json& blocks = field(j, "blocks", ptr);
    const auto bptr = child(ptr, "blocks");
    if (!blocks.is_array()) throw SchemaError(bptr, "expected an array of matrices");
    std::vector<Eigen::MatrixXd> list;
    for (std::size_t i = 0; i < blocks.size(); ++i) list.push_back(matrix_from_json(blocks[i], child(bptr, i)));
    auto variant = ThetaVariant::Printed;
    if (j.contains("variant")) {
      try {
        variant = parse_theta_variant(j["variant"].is_string() ? j["variant"].get<std::string>() : "");
      } catch (const Error& e) {
        throw SchemaError(child(ptr, "variant"), e.what());
      }
    }
    return IsometryDescriptor::theta(std::move(list), variant);
  }
  if (kind == "inner" || kind == "left") {
    const Json& h = field(j, "h", ptr);
    const auto hptr = child(ptr, "h");
    // Exact when every entry parses exactly; decimals count as exact rationals.
    try {
      auto exact = exact_element_from_json(h, freqs.n(), hptr);
      return kind == "inner" ? IsometryDescriptor::inner_by(exact) : IsometryDescriptor::left_translation(exact);
    } catch (const SchemaError&) {
      auto approx = element_from_json(h, freqs.n(), hptr);
      return kind == "inner" ? IsometryDescriptor::inner_by(approx) : IsometryDescriptor::left_translation(approx);
    }
  }
  if (kind == "composite") {
    const Json& parts = field(j, "parts", ptr);
    const auto pptr = child(ptr, "parts");
    if (!parts.is_array() || parts.empty()) throw SchemaError(pptr, "expected a non-empty array");
    std::vector<IsometryDescriptor> list;
    for (std::size_t i = 0; i < parts.size(); ++i) list.push_back(descriptor_from_json(parts[i], freqs, child(pptr, i)));
    return IsometryDescriptor::composite(std::move(list));
  }
  throw SchemaError(child(ptr, "kind"), "unknown isometry kind '" + kind + "'");
}

}  // namespace osc
