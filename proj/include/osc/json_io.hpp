#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "osc/isometry.hpp"
#include "osc/lattice.hpp"
#include "osc/normalizer.hpp"
#include "osc/quotient.hpp"

namespace osc {

using Json = nlohmann::json;

/// A document that does not follow the schema. `pointer` names the field (RFC 6901).
class SchemaError : public ParseError {
 public:
  SchemaError(std::string pointer, const std::string& message)
      : ParseError(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// Scalars, frequencies, elements.
ExactScalar exact_scalar_from_json(const Json& j, const std::string& ptr = "");
Json to_json(const ExactScalar& x);
Json to_json(const Rational& q);
FrequencyList frequencies_from_json(const Json& j, const std::string& ptr = "");
Json to_json(const FrequencyList& f);
/// {"z": "1/2 + 3/4 pi" | number, "v": [...], "t": ...}
ExactElement exact_element_from_json(const Json& j, std::size_t n, const std::string& ptr = "");
Element element_from_json(const Json& j, std::size_t n, const std::string& ptr = "");
Json to_json(const ExactElement& g);
Json to_json(const Element& g);
Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& ptr = "");
Eigen::VectorXd vector_from_json(const Json& j, const std::string& ptr = "");

/**
 * {"family": "dim4", "k": 2, "angle": "pi/2"}, {"family": "dim6", "k", "p", "q", "M"},
 * {"family": "twisted", "m": "1", "base": {…}},
 * {"family": "product_line", "w2": "2pi" | "w": "1" | "w_label": "e", "base": {…}},
 * {"family": "generators", "freqs": [...], "generators": [...], "depth": 6}.
 */
LatticeSpec lattice_from_json(const Json& j, const std::string& ptr = "");
Json to_json(const LatticeSpec& spec);
/// Compact names as printed by LatticeSpec::name() ("dim4:k=1:angle=2pi",
/// "twisted[m=1](dim4:k=1:angle=2pi)", "product_line[w2=2pi](…)") or a JSON object.
LatticeSpec parse_lattice(std::string_view text);

/// "Z", "2X1 - 1/2 T + Y2", or comma-separated coordinates "d,b1,c1,…,a".
ExactAlgebraVector parse_algebra_vector(std::string_view text, std::size_t n);
AlgebraVector to_double(const ExactAlgebraVector& x);
Json to_json(const AlgebraVector& x);

// Reports.
Json to_json(const LatticeProfile& p);
Json to_json(const LightlikeVerdict& v);
Json to_json(const ClosedGeodesicCertificate& c);
Json to_json(const CausalPair& p);
Json to_json(const ProductLineVerdict& v);
Json to_json(const NormalizerTable& t);
Json to_json(const GridAgreement& g);
Json to_json(const FiberVerdict& v);
Json to_json(const StructureRelationsReport& r);
Json to_json(const IsotropyElement& el);

/// {"kind": "inversion"}, {"kind": "theta", "blocks": [...], "variant": "printed"},
/// {"kind": "inner" | "left", "h": element}, {"kind": "composite", "parts": [...]}.
IsometryDescriptor descriptor_from_json(const Json& j, const FrequencyList& freqs, const std::string& ptr = "");

}  // namespace osc
