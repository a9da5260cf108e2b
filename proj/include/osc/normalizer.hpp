#pragma once

#include <optional>
#include <string>
#include <vector>

#include "osc/isometry.hpp"
#include "osc/lattice.hpp"

namespace osc {

/// One factor of a product set: ℝ, scale·ℤ^dim, ℤ^dim ∪ F^dim (F = ½·odd), or angle·ℤ.
struct SetFactor {
  enum class Kind { Real, Grid, IntegerOrHalfOdd, Angle };
  Kind kind = Kind::Real;
  std::size_t dim = 1;
  Rational scale = 1;
  ExactScalar angle;

  static SetFactor real() { return {}; }
  static SetFactor grid(std::size_t dim, Rational scale) { return {Kind::Grid, dim, std::move(scale), {}}; }
  static SetFactor integer_or_half_odd(std::size_t dim) { return {Kind::IntegerOrHalfOdd, dim, 1, {}}; }
  static SetFactor angle_grid(ExactScalar step) { return {Kind::Angle, 1, 1, std::move(step)}; }
  friend bool operator==(const SetFactor& a, const SetFactor& b) {
    return a.kind == b.kind && a.dim == b.dim && a.scale == b.scale && a.angle == b.angle;
  }
};

/**
 * A product set covering (z, v, t), written "R x (1/2)Z^2 x I2 x (pi/2)Z".
 * Grid factors print as "(s)Z^d" (or "Z^d" for s = 1), the unions as "I2"/"I4".
 */
struct NormalizerTable {
  std::string family;
  std::vector<SetFactor> factors;

  std::string grammar() const;
  bool contains(const ExactElement& g) const;
  static NormalizerTable parse(std::string_view text);
  friend bool operator==(const NormalizerTable& a, const NormalizerTable& b) { return a.factors == b.factors; }
};

/// The normalizer as confirmed by normalizer_oracle (dim-4 and dim-6 families).
NormalizerTable normalizer_table(const LatticeSpec& spec);
/// The table rows as published, kept for comparison.
NormalizerTable published_normalizer_table(const LatticeSpec& spec);

bool in_normalizer(const ExactElement& g, const LatticeSpec& spec);

/// g·γ·g⁻¹ ∈ Λ and g⁻¹·γ·g ∈ Λ for every generator γ. An angle without exact
/// rotation sends some (0, e_i, 0) off ℚ^{2n}, which decides "false" for the
/// closed-form families; generator lists raise ExactModeUnsupportedAngle instead.
bool normalizer_oracle(const ExactElement& g, const LatticeSpec& spec);

struct ConditionCheck {
  std::string name;
  int c = 0;
  bool holds = false;
};

struct ConditionReport {
  std::vector<ConditionCheck> checks;
  bool all_hold() const;
};

/// The reduced dim-6 conditions for c = 0..M−1: t on the (qπ/2) grid, v ∈ ℤ⁴/2k,
/// then v − R_c v ∈ ℤ⁴, vᵀJR_c v ∈ ℤ/k and v + R_c v ∈ ℤ⁴/k with R_c = R(2πqc/M).
ConditionReport normalizer_conditions(const ExactElement& g, const LatticeSpec& spec);

/// Default verification grid. dim 6: v ∈ {0,¼,⅓,½,1}⁴ × t ∈ {0, π/4, π/2, π, qπ/2};
/// dim 4 uses a wider v set so each family has 600 points. z cycles through {0, 1/7, π}.
std::vector<ExactElement> verification_grid(const LatticeSpec& spec);

struct GridAgreement {
  std::size_t points = 0;
  std::size_t table_agree = 0;
  std::size_t published_agree = 0;
  /// Only counted for dim-6 families.
  std::size_t conditions_agree = 0;
  bool has_conditions = false;
  std::vector<ExactElement> table_mismatches;
  std::vector<ExactElement> published_mismatches;
  std::vector<ExactElement> condition_mismatches;
};

/// Compares in_normalizer, the published table and the reduced conditions against the oracle.
GridAgreement grid_agreement(const LatticeSpec& spec, const std::vector<ExactElement>& grid,
                             std::size_t keep_mismatches = 5);

struct FiberVerdict {
  bool preserving = true;
  std::optional<ExactElement> g;
  std::optional<ExactElement> lambda;
  /// f(g)⁻¹·f(gλ) for the counterexample.
  Element image;
  /// The counterexample, or every pair when none was found, was evaluated exactly.
  bool decided_exactly = false;
  std::size_t pairs_checked = 0;
};

/**
 * Tests f(g)⁻¹·f(gλ) ∈ Λ over λ ∈ generators and their inverses and g on a grid
 * of lattice steps scaled by ½ and ⅓ plus `samples` seeded draws. Exact when f and
 * g allow it; otherwise the float image is snapped to the nearest member and
 * accepted within 1e-9. A counterexample is definitive; "preserving" is sampled.
 */
FiberVerdict is_fiber_preserving(const IsometryDescriptor& f, const LatticeSpec& spec, int samples = 32,
                                 unsigned long seed = 3);

}  // namespace osc
