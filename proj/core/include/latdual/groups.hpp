#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latdual/errors.hpp"

namespace latdual {

using cplx = std::complex<double>;

/// Finite abelian group given as a product of cyclic factors Z/n_1 x ... x Z/n_k.
/// Elements are residue vectors; the canonical element order is lexicographic
/// on residue vectors, i.e. mixed-radix with the first factor most significant.
class AbelianGroup {
 public:
  explicit AbelianGroup(std::vector<int> factors);

  int order() const { return order_; }
  const std::vector<int>& factors() const { return factors_; }

  int zero() const { return 0; }
  int add(int a, int b) const;
  int neg(int a) const;
  int sub(int a, int b) const { return add(a, neg(b)); }

  std::vector<int> residues(int a) const;
  int index(const std::vector<int>& residues) const;

  /// The Pontrjagin dual has the same factor list; dual elements are residue
  /// vectors in the same coordinates.
  AbelianGroup dual() const { return AbelianGroup(factors_); }

  /// Universal character chi(a, a_dual) = exp(2 pi i sum_j a_j a^vee_j / n_j).
  cplx pairing(int a, int a_dual) const;

  std::string element_name(int a) const;

 private:
  std::vector<int> factors_;
  std::vector<int> strides_;
  int order_ = 1;
};

/// Finite group with full multiplication table, inverse table, and conjugacy
/// classes. Construction validates associativity (all triples for order <= 64,
/// random samples above) and the group axioms.
class FiniteGroup {
 public:
  static constexpr int kDefaultOrderCap = 120;

  FiniteGroup(std::string name, std::vector<std::vector<int>> cayley,
              int order_cap = kDefaultOrderCap);

  int order() const { return n_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return cayley_[a][b]; }
  int inv(int a) const { return inverse_[a]; }
  bool is_abelian() const { return abelian_.has_value(); }

  /// Residue-vector view; only present when the group is abelian.
  const AbelianGroup& abelian() const;

  int num_classes() const { return static_cast<int>(classes_.size()); }
  const std::vector<std::vector<int>>& conjugacy_classes() const { return classes_; }
  int class_of(int g) const { return class_of_[g]; }

  const std::string& name() const { return name_; }
  std::string element_name(int g) const;

  /// Conjugacy class containing g^{-1} for each g in class c.
  int class_of_inverses(int c) const { return class_of_[inv(classes_[c][0])]; }

 private:
  std::string name_;
  int n_ = 0;
  int identity_ = 0;
  std::vector<std::vector<int>> cayley_;
  std::vector<int> inverse_;
  std::vector<std::vector<int>> classes_;
  std::vector<int> class_of_;
  std::optional<AbelianGroup> abelian_;
  std::vector<std::string> element_names_;

  friend FiniteGroup build_group(const std::string&, int);
  friend FiniteGroup as_finite_group(const AbelianGroup&);
  void set_element_names(std::vector<std::string> names) { element_names_ = std::move(names); }
  void set_abelian_view(AbelianGroup a) { abelian_ = std::move(a); }
};

/// One irreducible unitary representation: matrices per group element plus the
/// character on conjugacy classes.
struct Irrep {
  int dim = 0;
  std::vector<Eigen::MatrixXcd> mats;      // one per group element
  Eigen::VectorXcd char_on_classes;        // one per conjugacy class
  cplx character(const FiniteGroup& g, int elem) const {
    return char_on_classes[g.class_of(elem)];
  }
};

/// Parse a group descriptor: "Z<n>" products joined by 'x' (whitespace
/// insensitive), or one of the named groups S3, D4, Q8, A4.
FiniteGroup build_group(const std::string& descriptor,
                        int order_cap = FiniteGroup::kDefaultOrderCap);

/// Table view of an abelian group (identity Cayley construction).
FiniteGroup as_finite_group(const AbelianGroup& a);

/// Complete set of irreducible unitary representations, one per equivalence
/// class. Characters come from simultaneous diagonalization of the class-sum
/// matrices; matrices from splitting a character-isotypic block of the regular
/// representation with a random equivariant Hermitian operator.
std::vector<Irrep> irreducibles(const FiniteGroup& g, double tol = 1e-9,
                                unsigned seed = 0x1a7d0a1u);

}  // namespace latdual
