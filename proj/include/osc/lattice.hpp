#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "osc/group.hpp"

namespace osc {

class LatticeSpec;

/// Λ_{k,angle} ⊂ Osc_1(1): (1/2k)ℤ × ℤ² × angle·ℤ, angle ∈ {2π, π, π/2}.
enum class Dim4Angle { TwoPi, Pi, HalfPi };

struct Dim4Family {
  long k = 1;
  Dim4Angle angle = Dim4Angle::TwoPi;
};

/// Λ_{k,q,M} ⊂ Osc_2(1, p/q): (1/2k)ℤ × ℤ⁴ × (2πq/M)ℤ.
struct Dim6Family {
  long k = 1;
  long p = 1;
  long q = 1;
  int M = 1;
};

/// φ_m(base), with φ_m(z, v, t) = (z + m·t, v, t).
struct TwistedFamily {
  std::shared_ptr<const LatticeSpec> base;
  ExactScalar m;
};

/// The line lattice wℤ ⊂ ℝ of a product Osc_n × ℝ.
struct LineLattice {
  enum class Kind {
    Exact,       // value = w ∈ ℚ+ℚπ
    Square,      // value = w², w itself is not stored
    Irrational,  // w is a named constant with no known relation to 1, π
  };
  Kind kind = Kind::Exact;
  ExactScalar value;
  std::string label;

  /// w² when it lies in ℚ+ℚπ, nullopt otherwise (π² terms or Irrational).
  std::optional<ExactScalar> square() const;
  std::string describe() const;
};

struct ProductLineFamily {
  std::shared_ptr<const LatticeSpec> base;
  LineLattice line;
};

/// Subgroup generated by explicit elements; membership by bounded word search.
struct GeneratorFamily {
  std::vector<ExactElement> generators;
  int depth = 6;
};

struct LatticeProfile {
  ExactScalar t0;
  Integer K0;
  ExactScalar central_w;
  bool has_pure_t = false;
  /// Smallest i > 0 with (0, 0, i·t0) ∈ Γ, when has_pure_t.
  Integer pure_t_multiple = 0;
};

class LatticeSpec {
 public:
  using Family = std::variant<Dim4Family, Dim6Family, TwistedFamily, ProductLineFamily, GeneratorFamily>;

  static LatticeSpec dim4(long k, Dim4Angle angle);
  static LatticeSpec dim6(long k, long p, long q, int M);
  static LatticeSpec twisted(const LatticeSpec& base, ExactScalar m);
  static LatticeSpec product_line(const LatticeSpec& base, LineLattice line);
  static LatticeSpec generator_list(FrequencyList freqs, std::vector<ExactElement> generators, int depth = 6);

  const FrequencyList& freqs() const { return freqs_; }
  const Family& family() const { return family_; }
  /// "dim4:k=1:angle=2pi", "twisted(m=1;dim4:k=1:angle=2pi)", …
  std::string name() const;
  /// Product form (1/2k)ℤ × ℤ^{2n} × t0·ℤ, possibly after twists.
  bool is_closed_form() const;

 private:
  LatticeSpec(FrequencyList f, Family fam) : freqs_(std::move(f)), family_(std::move(fam)) {}
  FrequencyList freqs_;
  Family family_;
};

std::string to_string(Dim4Angle a);
Dim4Angle parse_dim4_angle(std::string_view text);
ExactScalar angle_value(Dim4Angle a);

/// Exact membership. Throws MembershipUndecidable for generator lists when the
/// bounded search does not reach g, and UnsupportedSpec for product-with-line
/// specs (use the overload with a line coordinate).
bool contains(const LatticeSpec& spec, const ExactElement& g);
/// Membership of (g, r) in Γ × wℤ for product-with-line specs.
bool contains(const LatticeSpec& spec, const ExactElement& g, const ExactScalar& r);

LatticeProfile profile(const LatticeSpec& spec);
ExactElement central_element(const LatticeSpec& spec);
std::optional<ExactElement> pure_t_element(const LatticeSpec& spec);
/// A finite generating set (for closed-form families: images of (w,0,0), (0,e_i,0), (0,0,t0)).
std::vector<ExactElement> generators(const LatticeSpec& spec);
/// The member with grid indices (iz, iv, it): φ(iz·w, iv, it·t0) for the twist φ of the family.
ExactElement member_with(const LatticeSpec& spec, const Integer& iz, const std::vector<Integer>& iv,
                         const Integer& it);
/// Member closest to g in the grid coordinates (t first, then v, then z).
ExactElement nearest_member(const LatticeSpec& spec, const Element& g);

}  // namespace osc
