#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "osc/geodesic.hpp"
#include "osc/lattice.hpp"

namespace osc {

struct LightlikeVerdict {
  enum class Kind { AllClosed, OnlyCentralDirection };
  Kind kind = Kind::OnlyCentralDirection;
  /// AllClosed: (0, 0, K0·t) for the smallest pure-t member (0, 0, t). Every
  /// lightlike geodesic with a ≠ 0 passes through it at s = K0·t/a.
  std::optional<ExactElement> witness;
  std::optional<ExactElement> pure_t;
};

std::string to_string(LightlikeVerdict::Kind k);

/// Initial vector with entries in ℚ+ℚπ, kept next to its double rounding.
using ExactInitial = BasicAlgebraVector<ExactScalar>;

struct ClosedGeodesicCertificate {
  AlgebraVector initial;
  std::optional<ExactInitial> exact_initial;
  double s_star = 0.0;
  std::optional<ExactScalar> s_star_exact;
  ExactElement lattice_point;
  CausalClass causal = CausalClass::Lightlike;
  /// max |eval_geodesic(initial, s_star) − lattice_point| in double precision.
  double residual = 0.0;
};

/// Float tolerance for matching a geodesic point with a lattice point.
inline constexpr double kLatticeHitTolerance = 1e-9;

LightlikeVerdict classify_lightlike(const LatticeSpec& spec);

struct CausalPair {
  ClosedGeodesicCertificate timelike;
  ClosedGeodesicCertificate spacelike;
  long m_timelike = 0;
  long m_spacelike = 0;
  /// Blocks where λ_j·t̂ ∈ 2πℤ, whose v-component was set to 0.
  std::vector<std::size_t> singular_blocks;
};

/// Closed timelike and spacelike geodesics through γ_m = (w,0,0)^m·γ, with γ
/// having t-component t0 when K0 = 1 and (K0 − 1)·t0 otherwise.
CausalPair closed_timelike_and_spacelike(const LatticeSpec& spec, long m_cap = 1000000);

/// Tests s = r·t0/a for r = 1..r_max (a ≠ 0) or the straight line (ds, bs, cs, 0)
/// against the lattice grid (a = 0). nullopt means no hit within the bound.
std::optional<ClosedGeodesicCertificate> search_closed(const AlgebraVector& x, const LatticeSpec& spec,
                                                       long r_max = 1000);

struct ProductLineVerdict {
  enum class Kind { SomeClosedPossible, NeverClosed };
  Kind kind = Kind::NeverClosed;
  std::string reason;
  /// (k, m, z) with w² = −2πkm/z², when SomeClosedPossible.
  std::optional<std::array<Integer, 3>> relation;
  /// A closed lightlike geodesic (a = −1, line velocity r) when SomeClosedPossible.
  std::optional<ClosedGeodesicCertificate> certificate;
  double line_velocity = 0.0;
  /// Line coordinate of the hit, as a multiple of w.
  Integer line_index = 0;
  /// The verdict leans on treating a named constant as unrelated to π.
  bool assumes_independence = false;
};

std::string to_string(ProductLineVerdict::Kind k);

/// Lightlike geodesics (α, r·s) of Osc_1(1) × ℝ with a ≠ 0 and r ≠ 0 on
/// (Λ_{k,0} × wℤ): closed ones exist iff w² ∈ 2π·ℚ_{>0}.
ProductLineVerdict product_line_lightlike(const LatticeSpec& spec);

}  // namespace osc
