#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "osc/geodesic.hpp"

namespace osc::cli {

namespace {

using LatticeUse = VerbSpec::LatticeUse;

const std::vector<VerbSpec> kVerbs = {
    {"geodesic", "eval", "closed-form samples of s -> exp(sX) as CSV", LatticeUse::Optional,
     {{"X", "initial vector: \"Z + 2X1 - T/2\" or coordinates \"d,b1,c1,...,a\""},
      {"freqs", "frequencies, e.g. \"1,3/2\" (default: the lattice's, else 1)"},
      {"s", "parameter range \"a..b\" or a single value (default 0..1)"},
      {"ds", "spacing of the samples (default 1)"},
      {"format", "csv or json (default csv)"}}},
    {"geodesic", "integrate", "RK4 integration compared with the closed form", LatticeUse::Optional,
     {{"X", "initial vector"},
      {"freqs", "frequencies"},
      {"s_end", "end of the parameter interval (default 5)"},
      {"step", "RK4 step (default 1e-3)"},
      {"kernel", "auto, scalar or avx2 (default auto)"}}},
    {"geodesic", "character", "causal character of a geodesic", LatticeUse::Optional,
     {{"X", "initial vector"}, {"freqs", "frequencies"}}},
    {"lattice", "info", "frequencies, grid profile and generators", LatticeUse::Required, {}},
    {"lattice", "contains", "membership of an element", LatticeUse::Required,
     {{"g", "element {\"z\":..,\"v\":[..],\"t\":..}"}, {"r", "line coordinate (product_line lattices)"}}},
    {"quotient", "classify", "closedness of lightlike geodesics", LatticeUse::Required, {}},
    {"quotient", "closed-search", "bounded search for a closing time", LatticeUse::Required,
     {{"X", "initial vector"}, {"r_max", "number of candidate times (default 1000)"}}},
    {"quotient", "certify-causal", "closed timelike and spacelike geodesics", LatticeUse::Required,
     {{"m_cap", "bound on the central shift search (default 1000000)"}}},
    {"quotient", "product-line", "lightlike closedness on a product with a line", LatticeUse::Required, {}},
    {"isometry", "check-matrix", "is a matrix the differential of an isometry fixing e", LatticeUse::Optional,
     {{"matrix", "square matrix as JSON rows"}, {"freqs", "frequencies"}, {"tol", "tolerance (default 1e-10)"}}},
    {"isometry", "normalizer", "normalizer table of a lattice and its oracle agreement", LatticeUse::Required,
     {{"grid", "default or none (default: default)"}, {"g", "element to test against the table"}}},
    {"isometry", "fiber", "counterexample search for fiber preservation", LatticeUse::Required,
     {{"map", "inversion, or a JSON descriptor such as {\"kind\":\"theta\",\"blocks\":[[[1,0],[0,-1]]]}"},
      {"samples", "random base points (default 32)"}}},
    {"isometry", "relations", "compare both sides of the conjugation relations", LatticeUse::Optional,
     {{"B", "orthogonal blocks as JSON, one matrix per run of equal frequencies"},
      {"v", "inner-automorphism vector, JSON or \"x1,y1,...\""},
      {"t", "inner-automorphism time (default 0)"},
      {"freqs", "frequencies"},
      {"theta", "printed or normalized (default printed)"},
      {"points", "group points compared (default 16)"}}},
    {"isometry", "decompose", "read (eps, B, c) off an isotropy matrix", LatticeUse::Optional,
     {{"matrix", "square matrix as JSON rows"}, {"freqs", "frequencies"}, {"tol", "tolerance (default 1e-10)"}}},
};

std::string option_name(const std::string& key) {
  std::string out = "--";
  for (char c : key) out += c == '_' ? '-' : c;
  return out;
}

double parse_number(const std::string& text, const std::string& ptr) {
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  try {
    return parse_exact_scalar(text).to_double();
  } catch (const Error&) {
  }
  throw SchemaError(ptr, "expected a number, got '" + text + "'");
}

double default_tolerance(double fallback) {
  const char* env = std::getenv(kToleranceEnv);
  if (!env || !*env) return fallback;
  double v = parse_number(env, std::string("$") + kToleranceEnv);
  if (!std::isfinite(v) || v <= 0) throw SchemaError(std::string("$") + kToleranceEnv, "must be a positive number");
  return v;
}

class Params {
 public:
  explicit Params(const Json& j) : j_(j) {}

  bool has(const std::string& key) const { return j_.contains(key) && !j_[key].is_null(); }
  static std::string ptr(const std::string& key) { return "/params/" + key; }

  std::string text(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_[key];
    return v.is_string() ? v.get<std::string>() : v.dump();
  }
  std::string required_text(const std::string& key) const {
    if (!has(key)) throw SchemaError(ptr(key), "missing (" + option_name(key) + ")");
    return text(key, "");
  }
  double positive(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_[key];
    double x = v.is_number() ? v.get<double>() : parse_number(text(key, ""), ptr(key));
    if (!std::isfinite(x) || x <= 0) throw SchemaError(ptr(key), "must be a positive number");
    return x;
  }
  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_[key];
    double x = v.is_number() ? v.get<double>() : parse_number(text(key, ""), ptr(key));
    if (!std::isfinite(x)) throw SchemaError(ptr(key), "must be finite");
    return x;
  }
  long count(const std::string& key, long fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j_[key];
    long x = 0;
    if (v.is_number_integer()) {
      x = v.get<long>();
    } else {
      const auto s = text(key, "");
      std::size_t used = 0;
      try {
        x = std::stol(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty()) throw SchemaError(ptr(key), "expected an integer, got '" + s + "'");
    }
    if (x <= 0) throw SchemaError(ptr(key), "must be a positive integer");
    return x;
  }
  /// JSON-valued option given either as JSON or as JSON text.
  Json document(const std::string& key) const {
    if (!has(key)) throw SchemaError(ptr(key), "missing (" + option_name(key) + ")");
    const Json& v = j_[key];
    if (!v.is_string()) return v;
    try {
      return Json::parse(v.get<std::string>());
    } catch (const Json::parse_error& e) {
      throw SchemaError(ptr(key), std::string("invalid JSON: ") + e.what());
    }
  }

 private:
  const Json& j_;
};

struct Context {
  const RunConfig& config;
  Params params;
  std::optional<LatticeSpec> lattice;
  Json& report;
  std::string& csv;

  Json& verdicts() { return report["verdicts"]; }
  Json& certificates() { return report["certificates"]; }
  Json& tables() { return report["tables"]; }
  Json& diagnostics() { return report["diagnostics"]; }
  void note(const std::string& s) { diagnostics()["notes"].push_back(s); }

  const LatticeSpec& spec() const { return *lattice; }

  FrequencyList freqs() const {
    if (params.has("freqs")) {
      const Json& v = config.params["freqs"];
      if (v.is_array()) return frequencies_from_json(v, Params::ptr("freqs"));
      Json list = Json::array();
      std::stringstream ss(v.is_string() ? v.get<std::string>() : v.dump());
      for (std::string item; std::getline(ss, item, ',');) list.push_back(item);
      return frequencies_from_json(list, Params::ptr("freqs"));
    }
    if (lattice) return lattice->freqs();
    return FrequencyList{1};
  }

  ExactAlgebraVector initial(std::size_t n) const { return parse_algebra_vector(params.required_text("X"), n); }
};

Json vector_coords(const ExactAlgebraVector& x) {
  Json out = Json::array();
  for (const auto& c : x.coords()) out.push_back(to_json(c));
  return out;
}

// geodesic

std::pair<double, double> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    double s = parse_number(text, Params::ptr("s"));
    return {s, s};
  }
  return {parse_number(text.substr(0, dots), Params::ptr("s")), parse_number(text.substr(dots + 2), Params::ptr("s"))};
}

void geodesic_eval(Context& ctx) {
  const auto freqs = ctx.freqs();
  const auto x_exact = ctx.initial(freqs.n());
  const auto [s0, s1] = parse_range(ctx.params.text("s", "0..1"));
  if (s1 < s0) throw SchemaError(Params::ptr("s"), "range end is below its start");
  const double ds = ctx.params.positive("ds", 1.0);
  const auto format = ctx.params.text("format", "csv");
  if (format != "csv" && format != "json") throw SchemaError(Params::ptr("format"), "expected csv or json");
  // A whole number of spacings; the last sample lands on s1 when (s1 - s0)/ds is integral.
  const double spans = std::floor((s1 - s0) / ds + 1e-9);
  if (spans > 1e7) throw SchemaError(Params::ptr("ds"), "more than 1e7 samples requested");
  const auto count = static_cast<std::size_t>(spans) + 1;
  const double last = s0 + ds * spans;
  Geodesic geo(to_double(x_exact), freqs);
  std::ostringstream out;
  write_samples_csv(out, geo, s0, last, count);
  if (format == "csv") ctx.csv = out.str();
  Json samples = Json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const double s = count == 1 ? s0 : s0 + (last - s0) * static_cast<double>(i) / static_cast<double>(count - 1);
    Json row = {{"s", s}, {"point", to_json(eval_geodesic(geo, s))}};
    samples.push_back(row);
  }
  ctx.verdicts()["samples"] = samples;
  ctx.verdicts()["initial"] = vector_coords(x_exact);
  ctx.verdicts()["exact"] = false;
}

void geodesic_integrate(Context& ctx) {
  const auto freqs = ctx.freqs();
  const auto x = to_double(ctx.initial(freqs.n()));
  const double s_end = ctx.params.positive("s_end", 5.0);
  const double step = ctx.params.positive("step", 1e-3);
  const auto kernel_name = ctx.params.text("kernel", "auto");
  Rk4Kernel kernel;
  if (kernel_name == "auto") kernel = Rk4Kernel::Auto;
  else if (kernel_name == "scalar") kernel = Rk4Kernel::Scalar;
  else if (kernel_name == "avx2") kernel = Rk4Kernel::Avx2;
  else throw SchemaError(Params::ptr("kernel"), "expected auto, scalar or avx2");
  if (s_end / step > 1e8) throw SchemaError(Params::ptr("step"), "more than 1e8 steps requested");
  const auto numeric = integrate_geodesics({x}, s_end, step, freqs, kernel).front();
  const auto closed = eval_geodesic(x, s_end, freqs);
  ctx.verdicts()["rk4"] = to_json(numeric);
  ctx.verdicts()["closed_form"] = to_json(closed);
  ctx.verdicts()["max_error"] = distance(numeric, closed);
  ctx.verdicts()["exact"] = false;
  ctx.diagnostics()["kernel"] = std::string(to_string(resolve_rk4_kernel(kernel)));
}

void geodesic_character(Context& ctx) {
  const auto freqs = ctx.freqs();
  const auto x = ctx.initial(freqs.n());
  if (ctx.config.exact) {
    ctx.verdicts()["causal"] = std::string(to_string(causal_class(x, freqs)));
    ctx.verdicts()["norm"] = to_string(causal_norm(x, freqs));
    ctx.verdicts()["exact"] = true;
  } else {
    const double tol = default_tolerance(kCausalTolerance);
    const auto xd = to_double(x);
    ctx.verdicts()["causal"] = std::string(to_string(causal_class(xd, freqs, tol)));
    ctx.verdicts()["norm"] = causal_norm(xd, freqs);
    ctx.verdicts()["exact"] = false;
    ctx.diagnostics()["tolerance"] = tol;
  }
}

// lattice

void lattice_info(Context& ctx) {
  const auto& spec = ctx.spec();
  ctx.verdicts()["name"] = spec.name();
  ctx.verdicts()["freqs"] = to_json(spec.freqs());
  ctx.verdicts()["closed_form"] = spec.is_closed_form();
  ctx.verdicts()["exact"] = true;
  const LatticeSpec* base = &spec;
  if (const auto* pl = std::get_if<ProductLineFamily>(&spec.family())) {
    base = pl->base.get();
    ctx.verdicts()["line"] = pl->line.describe();
  }
  if (base->is_closed_form()) ctx.verdicts()["profile"] = to_json(profile(*base));
  Json gens = Json::array();
  for (const auto& g : generators(*base)) gens.push_back(to_json(g));
  ctx.tables()["generators"] = gens;
}

void lattice_contains(Context& ctx) {
  const auto& spec = ctx.spec();
  const auto doc = ctx.params.document("g");
  const bool line = std::holds_alternative<ProductLineFamily>(spec.family());
  if (line && !ctx.params.has("r")) throw SchemaError(Params::ptr("r"), "product_line lattices need --r");
  if (!line && ctx.params.has("r")) throw SchemaError(Params::ptr("r"), "only product_line lattices take --r");
  const bool float_mode = !ctx.config.exact;
  if (float_mode && !spec.is_closed_form()) ctx.note("float membership needs a closed-form family; exact mode used");
  if (float_mode && spec.is_closed_form()) {
    const auto g = element_from_json(doc, spec.freqs().n(), Params::ptr("g"));
    const double tol = default_tolerance(kLatticeHitTolerance);
    const auto nearest = nearest_member(spec, g);
    const double gap = distance(g, to_float(nearest));
    const double scale = std::max(1.0, g.coords().cwiseAbs().maxCoeff());
    ctx.verdicts()["member"] = gap <= tol * scale;
    ctx.verdicts()["nearest_member"] = to_json(nearest);
    ctx.verdicts()["distance"] = gap;
    ctx.verdicts()["exact"] = false;
    ctx.diagnostics()["tolerance"] = tol;
    return;
  }
  const auto g = exact_element_from_json(doc, spec.freqs().n(), Params::ptr("g"));
  ctx.verdicts()["exact"] = true;
  try {
    if (line) {
      const auto r = exact_scalar_from_json(ctx.params.document("r"), Params::ptr("r"));
      ctx.verdicts()["member"] = contains(spec, g, r);
    } else {
      ctx.verdicts()["member"] = contains(spec, g);
    }
  } catch (const MembershipUndecidable& e) {
    ctx.verdicts()["member"] = nullptr;
    ctx.note(e.what());
  }
}

// quotient

void quotient_classify(Context& ctx) { ctx.verdicts()["lightlike"] = to_json(classify_lightlike(ctx.spec())); }

void quotient_closed_search(Context& ctx) {
  const auto& spec = ctx.spec();
  const auto x = ctx.initial(spec.freqs().n());
  const long r_max = ctx.params.count("r_max", 1000);
  const auto cert = search_closed(to_double(x), spec, r_max);
  ctx.verdicts()["initial"] = vector_coords(x);
  ctx.verdicts()["closed"] = cert.has_value();
  ctx.verdicts()["r_max"] = r_max;
  if (cert) {
    ctx.certificates().push_back(to_json(*cert));
    ctx.verdicts()["exact"] = cert->s_star_exact.has_value();
  } else {
    ctx.verdicts()["conclusion"] = "no closure within r_max";
    ctx.verdicts()["exact"] = false;
  }
}

void quotient_certify_causal(Context& ctx) {
  const long m_cap = ctx.params.count("m_cap", 1000000);
  const auto pair = closed_timelike_and_spacelike(ctx.spec(), m_cap);
  ctx.verdicts()["causal_pair"] = {{"m_timelike", pair.m_timelike},
                                   {"m_spacelike", pair.m_spacelike},
                                   {"singular_blocks", to_json(pair)["singular_blocks"]}};
  ctx.certificates().push_back(to_json(pair.timelike));
  ctx.certificates().push_back(to_json(pair.spacelike));
}

void quotient_product_line(Context& ctx) {
  const auto v = product_line_lightlike(ctx.spec());
  auto j = to_json(v);
  if (j.contains("certificate")) {
    ctx.certificates().push_back(j["certificate"]);
    j.erase("certificate");
  }
  ctx.verdicts()["product_line"] = j;
}

// isometry

Eigen::MatrixXd square_matrix(Context& ctx, const FrequencyList& freqs) {
  const auto m = matrix_from_json(ctx.params.document("matrix"), Params::ptr("matrix"));
  const auto dim = static_cast<Eigen::Index>(freqs.dim());
  if (m.rows() != dim || m.cols() != dim)
    throw SchemaError(Params::ptr("matrix"), "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix");
  return m;
}

Json semidirect_json(const SemidirectElement& s) {
  Json blocks = Json::array();
  for (const auto& b : s.blocks) blocks.push_back(to_json(b));
  return {{"eps", s.eps}, {"blocks", blocks}, {"shift", to_json(s.shift)}};
}

void isometry_check_matrix(Context& ctx) {
  const auto freqs = ctx.freqs();
  const auto a = square_matrix(ctx, freqs);
  const double tol = ctx.params.positive("tol", kMatrixTolerance);
  ctx.verdicts()["local_isometry"] = check_local_isometry(a, freqs, tol);
  ctx.verdicts()["exact"] = false;
  try {
    const auto el = psi_decompose(a, freqs, tol);
    ctx.verdicts()["isotropy_form"] = true;
    ctx.verdicts()["decomposition"] = to_json(el);
  } catch (const ShapeMismatch& e) {
    ctx.verdicts()["isotropy_form"] = false;
    ctx.note(e.what());
  }
}

void isometry_decompose(Context& ctx) {
  const auto freqs = ctx.freqs();
  const auto a = square_matrix(ctx, freqs);
  const double tol = ctx.params.positive("tol", kMatrixTolerance);
  const auto el = psi_decompose(a, freqs, tol);
  ctx.verdicts()["decomposition"] = to_json(el);
  ctx.verdicts()["semidirect"] = semidirect_json(to_semidirect(el));
  ctx.verdicts()["round_trip_error"] = (isotropy_matrix(el, freqs) - a).cwiseAbs().maxCoeff();
  ctx.verdicts()["exact"] = false;
}

void isometry_normalizer(Context& ctx) {
  const auto& spec = ctx.spec();
  if (!ctx.config.exact) ctx.note("normalizer comparisons are exact only; exact mode used");
  const auto table = normalizer_table(spec);
  ctx.tables()["normalizer"] = to_json(table);
  ctx.tables()["published"] = to_json(published_normalizer_table(spec));
  const auto grid = ctx.params.text("grid", "default");
  if (grid == "default") {
    ctx.verdicts()["grid"] = to_json(grid_agreement(spec, verification_grid(spec)));
  } else if (grid != "none") {
    throw SchemaError(Params::ptr("grid"), "expected default or none");
  }
  if (ctx.params.has("g")) {
    const auto g = exact_element_from_json(ctx.params.document("g"), spec.freqs().n(), Params::ptr("g"));
    Json e = {{"element", to_json(g)},
              {"in_normalizer", in_normalizer(g, spec)},
              {"oracle", normalizer_oracle(g, spec)},
              {"published_table", published_normalizer_table(spec).contains(g)},
              {"exact", true}};
    if (std::holds_alternative<Dim6Family>(spec.family())) {
      const auto report = normalizer_conditions(g, spec);
      Json checks = Json::array();
      for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"c", c.c}, {"holds", c.holds}});
      e["conditions"] = {{"all_hold", report.all_hold()}, {"checks", checks}};
    }
    ctx.verdicts()["element"] = e;
  }
}

void isometry_fiber(Context& ctx) {
  const auto& spec = ctx.spec();
  const auto text = ctx.params.required_text("map");
  IsometryDescriptor f;
  if (text == "inversion") {
    f = IsometryDescriptor::inversion();
  } else {
    f = descriptor_from_json(ctx.params.document("map"), spec.freqs(), Params::ptr("map"));
  }
  const long samples = ctx.params.count("samples", 32);
  ctx.verdicts()["map"] = describe(f);
  ctx.verdicts()["fiber"] = to_json(is_fiber_preserving(f, spec, static_cast<int>(samples), ctx.config.seed));
}

void isometry_relations(Context& ctx) {
  const auto freqs = ctx.freqs();
  const auto bdoc = ctx.params.document("B");
  if (!bdoc.is_array()) throw SchemaError(Params::ptr("B"), "expected an array of matrices");
  std::vector<Eigen::MatrixXd> blocks;
  for (std::size_t i = 0; i < bdoc.size(); ++i)
    blocks.push_back(matrix_from_json(bdoc[i], Params::ptr("B") + "/" + std::to_string(i)));
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * freqs.n()));
  if (ctx.params.has("v")) {
    const auto vtext = ctx.params.text("v", "");
    Json vdoc;
    if (!vtext.empty() && vtext.front() == '[') {
      vdoc = ctx.params.document("v");
    } else {
      vdoc = Json::array();
      std::stringstream ss(vtext);
      for (std::string item; std::getline(ss, item, ',');) vdoc.push_back(parse_number(item, Params::ptr("v")));
    }
    v = vector_from_json(vdoc, Params::ptr("v"));
    if (static_cast<std::size_t>(v.size()) != 2 * freqs.n())
      throw SchemaError(Params::ptr("v"), "expected " + std::to_string(2 * freqs.n()) + " entries");
  }
  const double t = ctx.params.number("t", 0.0);
  ThetaVariant variant;
  try {
    variant = parse_theta_variant(ctx.params.text("theta", "printed"));
  } catch (const Error& e) {
    throw SchemaError(Params::ptr("theta"), e.what());
  }
  const long points = ctx.params.count("points", 16);
  IsotropyElement probe = IsotropyElement::identity(freqs);
  probe.blocks = blocks;
  validate(probe, freqs);
  ctx.verdicts()["theta"] = to_string(variant);
  ctx.verdicts()["relations"] =
      to_json(structure_relations_check(blocks, v, t, freqs, variant, static_cast<int>(points), ctx.config.seed));
}

using Handler = std::function<void(Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"geodesic eval", geodesic_eval},
      {"geodesic integrate", geodesic_integrate},
      {"geodesic character", geodesic_character},
      {"lattice info", lattice_info},
      {"lattice contains", lattice_contains},
      {"quotient classify", quotient_classify},
      {"quotient closed-search", quotient_closed_search},
      {"quotient certify-causal", quotient_certify_causal},
      {"quotient product-line", quotient_product_line},
      {"isometry check-matrix", isometry_check_matrix},
      {"isometry normalizer", isometry_normalizer},
      {"isometry fiber", isometry_fiber},
      {"isometry relations", isometry_relations},
      {"isometry decompose", isometry_decompose},
  };
  return table;
}

Json skeleton(const RunConfig& config) {
  return {{"schema_version", kReportSchemaVersion},
          {"version", kToolVersion},
          {"command", config.command + " " + config.subcommand},
          {"seed", config.seed},
          {"exact", config.exact},
          {"lattice", nullptr},
          {"params", config.params},
          {"verdicts", Json::object()},
          {"certificates", Json::array()},
          {"tables", Json::object()},
          {"diagnostics", Json::object()}};
}

void fail(RunResult& result, int code, const std::string& kind, const std::string& message,
          const std::string& pointer = "") {
  result.exit_code = code;
  result.csv.clear();
  Json err = {{"kind", kind}, {"message", message}};
  if (!pointer.empty()) err["pointer"] = pointer;
  result.report["diagnostics"]["error"] = err;
}

}  // namespace

const std::vector<VerbSpec>& verbs() { return kVerbs; }

RunConfig config_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("/", "expected an object");
  RunConfig c;
  if (!j.contains("command") || !j["command"].is_string()) throw SchemaError("/command", "expected \"verb subverb\"");
  std::istringstream words(j["command"].get<std::string>());
  words >> c.command >> c.subcommand;
  std::string extra;
  if (c.subcommand.empty() || (words >> extra)) throw SchemaError("/command", "expected \"verb subverb\"");
  if (j.contains("lattice")) {
    const Json& l = j["lattice"];
    if (l.is_string()) c.lattice = l.get<std::string>();
    else if (l.is_object()) c.lattice = l.dump();
    else if (!l.is_null()) throw SchemaError("/lattice", "expected a compact name or an object");
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) throw SchemaError("/params", "expected an object");
    c.params = j["params"];
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SchemaError("/seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("exact")) {
    if (!j["exact"].is_boolean()) throw SchemaError("/exact", "expected true or false");
    c.exact = j["exact"].get<bool>();
  }
  for (const auto& [key, _] : j.items())
    if (key != "command" && key != "lattice" && key != "params" && key != "seed" && key != "exact")
      throw SchemaError("/" + key, "unknown field");
  return c;
}

RunResult run(const RunConfig& config) {
  RunResult result;
  result.report = skeleton(config);
  try {
    const VerbSpec* verb = nullptr;
    for (const auto& v : kVerbs)
      if (v.command == config.command && v.subcommand == config.subcommand) verb = &v;
    if (!verb) throw SchemaError("/command", "unknown verb '" + config.command + " " + config.subcommand + "'");
    if (!config.params.is_object()) throw SchemaError("/params", "expected an object");
    for (const auto& [key, _] : config.params.items()) {
      bool known = false;
      for (const auto& p : verb->params) known = known || p.key == key;
      if (!known) throw SchemaError("/params/" + key, "not an option of '" + config.command + " " + config.subcommand + "'");
    }
    Context ctx{config, Params(config.params), std::nullopt, result.report, result.csv};
    if (!config.lattice.empty()) {
      if (verb->lattice == LatticeUse::None) throw SchemaError("/lattice", "this verb takes no lattice");
      ctx.lattice = parse_lattice(config.lattice);
      result.report["lattice"] = {{"name", ctx.lattice->name()}, {"spec", to_json(*ctx.lattice)}};
    } else if (verb->lattice == LatticeUse::Required) {
      throw SchemaError("/lattice", "missing (--lattice)");
    }
    handlers().at(config.command + " " + config.subcommand)(ctx);
  } catch (const SchemaError& e) {
    fail(result, kExitValidation, "validation", e.what(), e.pointer());
  } catch (const ParseError& e) {
    fail(result, kExitValidation, "validation", e.what());
  } catch (const InvalidSpec& e) {
    fail(result, kExitValidation, "validation", e.what());
  } catch (const UnsupportedSpec& e) {
    fail(result, kExitValidation, "validation", e.what());
  } catch (const DimensionMismatch& e) {
    fail(result, kExitValidation, "validation", e.what());
  } catch (const ShapeMismatch& e) {
    fail(result, kExitValidation, "validation", e.what());
  } catch (const CertificateVerificationFailed& e) {
    fail(result, kExitVerification, "verification", e.what());
  } catch (const std::exception& e) {
    fail(result, kExitVerification, "internal", e.what());
  }
  return result;
}

namespace {

bool write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int main_with_args(int argc, const char* const* argv) {
  CLI::App app{"Lattice quotients and isometries of oscillator groups"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(0, 1);

  std::string config_path, out_path, csv_path, lattice;
  std::uint64_t seed = 1;
  bool exact_flag = false, float_flag = false;
  app.add_option("--config", config_path, "run a JSON config {command, lattice, params, seed, exact}");
  app.add_option("--out", out_path, "write the JSON report here (default stdout)");
  app.add_option("--seed", seed, "seed for randomized grids")->capture_default_str();
  auto* exact_opt = app.add_flag("--exact", exact_flag, "exact arithmetic where supported (default)");
  app.add_flag("--float", float_flag, "double precision with $" + std::string(kToleranceEnv) + " tolerance")
      ->excludes(exact_opt);

  std::map<std::string, std::string> values;
  std::map<std::string, CLI::App*> groups;
  std::vector<std::pair<CLI::App*, const VerbSpec*>> leaves;
  for (const auto& verb : kVerbs) {
    auto*& group = groups[verb.command];
    if (!group) {
      group = app.add_subcommand(verb.command, verb.command + " verbs");
      group->require_subcommand(1);
    }
    auto* sub = group->add_subcommand(verb.subcommand, verb.help);
    const std::string prefix = verb.command + " " + verb.subcommand + "/";
    if (verb.lattice != LatticeUse::None) {
      auto* opt = sub->add_option("--lattice", lattice, "dim4:k=1:angle=2pi, dim6:k=..:p=..:q=..:M=.., or JSON");
      if (verb.lattice == LatticeUse::Required) opt->required();
    }
    for (const auto& p : verb.params) sub->add_option(option_name(p.key), values[prefix + p.key], p.help);
    if (verb.command == "geodesic" && verb.subcommand == "eval")
      sub->add_option("--csv", csv_path, "write the CSV here instead of stdout");
    leaves.emplace_back(sub, &verb);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  RunConfig config;
  bool have_verb = false;
  for (const auto& [sub, verb] : leaves) {
    if (!sub->parsed()) continue;
    have_verb = true;
    config.command = verb->command;
    config.subcommand = verb->subcommand;
    const std::string prefix = verb->command + " " + verb->subcommand + "/";
    for (const auto& p : verb->params)
      if (sub->count(option_name(p.key)) > 0) config.params[p.key] = values[prefix + p.key];
  }
  if (!config_path.empty()) {
    if (have_verb) {
      std::cerr << "error: --config replaces the verb on the command line\n";
      return kExitValidation;
    }
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return kExitValidation;
    }
    try {
      config = config_from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return kExitValidation;
    } catch (const SchemaError& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return kExitValidation;
    }
    if (app.count("--seed")) config.seed = seed;
    if (exact_flag) config.exact = true;
    if (float_flag) config.exact = false;
  } else {
    if (!have_verb) {
      std::cerr << app.help();
      return kExitValidation;
    }
    config.lattice = lattice;
    config.seed = seed;
    config.exact = !float_flag;
  }

  auto result = run(config);
  if (result.exit_code != kExitOk) {
    const auto& err = result.report["diagnostics"]["error"];
    std::cerr << "error: " << err["message"].get<std::string>() << "\n";
  }
  const bool csv_to_stdout = !result.csv.empty() && csv_path.empty();
  if (!result.csv.empty() && !write_text(csv_to_stdout ? "-" : csv_path, result.csv)) {
    std::cerr << "error: cannot write " << csv_path << "\n";
    return kExitValidation;
  }
  // With CSV on stdout the report is only written when asked for.
  if (!csv_to_stdout || !out_path.empty()) {
    if (!write_text(out_path, result.report.dump(2) + "\n")) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitValidation;
    }
  }
  return result.exit_code;
}

}  // namespace osc::cli
