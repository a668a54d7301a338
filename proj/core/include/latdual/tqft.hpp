#pragma once

#include <string>
#include <vector>

#include "latdual/groups.hpp"
#include "latdual/homology.hpp"
#include "latdual/ising.hpp"
#include "latdual/surface.hpp"

namespace latdual {

/// Exact rational number with long long parts, reduced.
struct Rational {
  long long num = 0;
  long long den = 1;
  Rational() = default;
  Rational(long long n, long long d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Group presentation: relators are words in generators, entries +-(i+1).
struct GroupPresentation {
  int generators = 0;
  std::vector<std::vector<int>> relators;

  static GroupPresentation trivial();
  static GroupPresentation free_group(int k);
  static GroupPresentation free_abelian(int k);       // T^k fundamental group
  static GroupPresentation surface_group(int genus);  // genus >= 0
};

std::string presentation_to_json(const GroupPresentation& p);
GroupPresentation presentation_from_json(const std::string& text);

/// Number of homomorphisms pi_1 -> G (exact) and the groupoid count
/// #Hom / #G, i.e. the bundle count of a closed manifold with that
/// fundamental group weighted by automorphisms. For abelian G the number of
/// isomorphism classes equals #Hom.
struct BundleCount {
  long long hom_count = 0;
  Rational groupoid;  // hom_count / #G
};
BundleCount count_bundles(const GroupPresentation& p, const FiniteGroup& g,
                          long long search_cap = 1 << 24);

/// Loop operators on S^1 x Y along the S^1 factor, with Y given by a lattice.
/// Bundles on S^1 x Y are pairs (flat labeling z on Y, stabilizer element c);
/// the groupoid sum weights by 1/#G^V. Wilson weighs by chi(c at the marked
/// vertex); 't Hooft constrains the holonomy of the marked face to a class.
enum class LoopKind { wilson, thooft };
double loop_operator_s1xy(const Lattice2& y, const FiniteGroup& g, LoopKind kind,
                          int character_or_class, int marked_vertex = 0, int marked_face = 0,
                          long long search_cap = 1 << 24);

/// Plain bundle count of S^1 x Y by the same enumeration (no insertion).
double count_bundles_s1xy(const Lattice2& y, const FiniteGroup& g,
                          long long search_cap = 1 << 24);

/// Handlebody with boundary lattice and meridian walks (closed edge paths,
/// slots (edge, dir)) that bound in the filling.
struct HandlebodyData {
  Lattice2 boundary;
  std::vector<std::vector<Lattice2::FaceSlot>> meridians;
};

/// Pair the bulk sum over meridian-trivial flat backgrounds (weights 1/#Aut,
/// realized as 1/#G^V over labelings) with the boundary spin sum.
double pair_with_handlebody(const HandlebodyData& h, const FiniteGroup& g,
                            const WeightFunction& theta, const Insertions& ins,
                            const SpinCaps& caps = {});

/// Finite path integral of the degree-r theory on X:
///   prod_{i=0..r} (#H^{r-i}(X;A))^{(-1)^i}.
struct HigherTheorySpec {
  int degree = 1;      // r
  int dimension = 0;   // n = dim X (0 = take from the complex)
};
Rational higher_partition(const std::vector<long long>& h_orders, int r);
Rational higher_partition(const SimplicialComplex& x, const AbelianGroup& a, int r,
                          long long cell_cap = 200000);
Rational higher_partition(const Lattice2& surface, const AbelianGroup& a, int r);

/// Electromagnetic duality check: Z(X; A, r) vs Z(X; A^vee, n-1-r). The ratio
/// is (#A)^(eps * chi) with eps = 0 for odd n and eps = -1 for even n (sign
/// calibrated once on the genus-2 surface and frozen).
struct EmDualReport {
  Rational z, z_dual;
  Rational ratio;
  long long expected_base = 1;
  long long euler = 0;
  long long exponent = 0;  // such that ratio == (#A)^exponent
  bool ok = false;
};
EmDualReport em_duality_check(const std::vector<long long>& h_orders, const AbelianGroup& a,
                              int r, int n, long long euler);
EmDualReport em_duality_check(const SimplicialComplex& x, const AbelianGroup& a, int r,
                              long long cell_cap = 200000);
EmDualReport em_duality_check(const Lattice2& surface, const AbelianGroup& a, int r);

}  // namespace latdual
