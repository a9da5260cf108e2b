#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "osc/group.hpp"

namespace osc {

/**
 * An isometry fixing e. (eps, blocks, c) describe its differential
 * ε·[[1, cᵀ, −½Σρ|c|²], [0, B, −ρBc], [0, 0, 1]], one orthogonal block and one
 * c-vector per run of equal frequencies. `inner` and `invert` are the group-level
 * factors s^invert ∘ Θ(B) ∘ I_{(v,t)}.
 */
struct IsotropyElement {
  int eps = 1;
  std::vector<Eigen::MatrixXd> blocks;
  std::vector<Eigen::VectorXd> c;
  std::optional<std::pair<Eigen::VectorXd, double>> inner;
  bool invert = false;

  static IsotropyElement identity(const FrequencyList& freqs);
};

inline constexpr double kMatrixTolerance = 1e-10;
inline constexpr double kGroupMapTolerance = 1e-9;

/// Throws ShapeMismatch when blocks or c do not follow freqs.runs() or a block is not orthogonal.
void validate(const IsotropyElement& el, const FrequencyList& freqs);

Eigen::MatrixXd block_diagonal(const std::vector<Eigen::MatrixXd>& blocks);
/// J on ℝ^{2n}: (x, y) ↦ (y, −x) in every pair.
Eigen::MatrixXd symplectic_form(std::size_t n);

Eigen::MatrixXd isotropy_matrix(const IsotropyElement& el, const FrequencyList& freqs);

/// ⟨AX, AY⟩ = ⟨X, Y⟩ and A[X,[Y,W]] = [AX,[AY,AW]] on all basis tuples.
bool check_local_isometry(const Eigen::MatrixXd& a, const FrequencyList& freqs, double tol = kMatrixTolerance);

/// Reads (ε, B_ν, c_ν) back off a matrix of the isotropy shape. Throws ShapeMismatch otherwise.
IsotropyElement psi_decompose(const Eigen::MatrixXd& a, const FrequencyList& freqs, double tol = kMatrixTolerance);

/// (ε, B, shift) in O(1) × ΠO(2m_ν) ⋉ ℝ^{2n}, with (k, u)(k', u') = (kk', u + B·u').
struct SemidirectElement {
  int eps = 1;
  std::vector<Eigen::MatrixXd> blocks;
  Eigen::VectorXd shift;
};

/// shift = B·c: with this coordinate, matrix products map to semidirect products.
SemidirectElement to_semidirect(const IsotropyElement& el);
SemidirectElement semidirect_multiply(const SemidirectElement& a, const SemidirectElement& b);
double semidirect_distance(const SemidirectElement& a, const SemidirectElement& b);

/// Printed: P_λ(t) blocks [[sin, 1−cos], [cos−1, sin]] (Id on t ∈ 2πℤ/λ) as displayed.
/// Normalized: the same blocks divided by √(2 − 2cos), which makes P(t) orthogonal.
enum class ThetaVariant { Printed, Normalized };
std::string to_string(ThetaVariant v);
ThetaVariant parse_theta_variant(std::string_view text);

Eigen::MatrixXd theta_p(double t, const FrequencyList& freqs, ThetaVariant variant);
/// P(t)ᵀ·B·P(t), the linear map Θ(B) applies to v at time t.
Eigen::MatrixXd theta_matrix(const std::vector<Eigen::MatrixXd>& blocks, double t, const FrequencyList& freqs,
                             ThetaVariant variant);
Element theta_B(const std::vector<Eigen::MatrixXd>& blocks, const Element& g, const FrequencyList& freqs,
                ThetaVariant variant = ThetaVariant::Printed);
/// Throws NonRepresentable when P(t)ᵀBP(t) is singular.
Element theta_B_inverse(const std::vector<Eigen::MatrixXd>& blocks, const Element& g, const FrequencyList& freqs,
                        ThetaVariant variant = ThetaVariant::Printed);

struct ThetaValidation {
  /// max |dΘ_e − diag(1, B, 1)| from central differences.
  double differential_error = 0.0;
  /// max |dΘ_gᵀ G(Θ(g)) dΘ_g − G(g)| over the sampled points.
  double isometry_error = 0.0;
  Element worst_point;
  bool differential_ok = false;
  bool isometry_ok = false;
};

ThetaValidation validate_theta(const std::vector<Eigen::MatrixXd>& blocks, const FrequencyList& freqs,
                               ThetaVariant variant, int samples = 20, unsigned long seed = 1);

/// Inner automorphism I_{(v,t)}(g) = h·g·h⁻¹ with h = (0, v, t).
Element inner_automorphism(const Eigen::VectorXd& v, double t, const Element& g, const FrequencyList& freqs);

struct RelationOutcome {
  std::string name;
  bool holds = true;
  double max_error = 0.0;
  std::optional<Element> witness;
};

struct StructureRelationsReport {
  std::vector<RelationOutcome> relations;  // (i), (ii), (iii)
  bool all_hold() const;
};

/**
 * Compares both sides of
 *   Θ(B)∘I_{(v,t)}∘Θ(B)⁻¹ = I_{(JBJᵀv,t)},  s∘I_{(v,t)}∘s⁻¹ = I_{(v,t)},  s∘Θ(B)∘s⁻¹ = Θ(B)
 * on `points` group points drawn from `seed`, with tolerance 1e-9.
 */
StructureRelationsReport structure_relations_check(const std::vector<Eigen::MatrixXd>& blocks,
                                                   const Eigen::VectorXd& v, double t, const FrequencyList& freqs,
                                                   ThetaVariant variant = ThetaVariant::Normalized, int points = 16,
                                                   unsigned long seed = 7);

/// Blocks orthogonal and symplectic; with `invert` set, M·B_ν is tested instead (M = diag(1,−1,…)).
bool aut_intersection_check(const IsotropyElement& el, double tol = kMatrixTolerance);

/// Isometries that fiber-preservation tests can apply.
struct IsometryDescriptor {
  enum class Kind { LeftTranslation, Inversion, Theta, Inner, Composite };
  Kind kind = Kind::Inversion;
  Element h;
  /// Set when h is known exactly; enables exact evaluation.
  std::optional<ExactElement> h_exact;
  std::vector<Eigen::MatrixXd> blocks;
  ThetaVariant variant = ThetaVariant::Printed;
  /// Composite: parts[0] ∘ parts[1] ∘ …
  std::vector<IsometryDescriptor> parts;

  static IsometryDescriptor left_translation(ExactElement h);
  static IsometryDescriptor left_translation(Element h);
  static IsometryDescriptor inversion();
  static IsometryDescriptor theta(std::vector<Eigen::MatrixXd> blocks, ThetaVariant variant = ThetaVariant::Printed);
  static IsometryDescriptor inner_by(ExactElement h);
  static IsometryDescriptor inner_by(Element h);
  static IsometryDescriptor composite(std::vector<IsometryDescriptor> parts);
};

std::string describe(const IsometryDescriptor& f);
/// s^invert ∘ Θ(B) ∘ I_{(v,t)} with the normalized Θ.
IsometryDescriptor as_descriptor(const IsotropyElement& el);

Element apply(const IsometryDescriptor& f, const Element& g, const FrequencyList& freqs);
/// nullopt when f involves Θ or an angle without an exact rotation.
std::optional<ExactElement> apply_exact(const IsometryDescriptor& f, const ExactElement& g, const FrequencyList& freqs);

/// Jacobian at e by central differences in coordinates (z, x_1, y_1, …, t).
Eigen::MatrixXd differential_at_identity(const IsometryDescriptor& f, const FrequencyList& freqs, double h = 1e-5);

}  // namespace osc
