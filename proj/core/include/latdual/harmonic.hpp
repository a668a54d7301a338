#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latdual/groups.hpp"

namespace latdual {

/// Real weight function on a group, aligned with the canonical element order.
using WeightFunction = std::vector<double>;

/// Fourier transform on a finite abelian group:
///   f^vee(a^vee) = (1/sqrt(#A)) sum_a conj(chi(a, a^vee)) f(a).
std::vector<cplx> fourier_abelian(const std::vector<cplx>& f, const AbelianGroup& a);

/// Inverse transform; uses chi as the kernel so that inverse(fourier(f)) == f.
std::vector<cplx> fourier_abelian_inverse(const std::vector<cplx>& f, const AbelianGroup& a);

/// Real-input convenience. The result of transforming an even real function is
/// real; callers that rely on that should use fourier_abelian_even.
std::vector<cplx> fourier_abelian(const WeightFunction& f, const AbelianGroup& a);

/// Transform of an even real function, returned as real values. Throws NotEven
/// if the imaginary residue exceeds tol.
WeightFunction fourier_abelian_even(const WeightFunction& f, const AbelianGroup& a,
                                    double tol = 1e-9);

/// Operator-valued transform per irreducible representation:
///   theta^vee(rho) = (1/sqrt(#G)) sum_g theta(g) conj(rho(g)).
struct OperatorTransform {
  std::vector<Eigen::MatrixXcd> blocks;  // one per irrep, dims match
};
OperatorTransform fourier_nonabelian(const WeightFunction& theta, const FiniteGroup& g,
                                     const std::vector<Irrep>& irreps);

/// Admissibility verdict with a witness for the violated condition.
struct Admissibility {
  bool admissible = false;
  enum class Violation { none, negative_value, not_even, negative_dual, negative_operator };
  Violation violation = Violation::none;
  int witness = -1;       // offending element index, dual element index, or irrep index
  double value = 0.0;     // offending value / eigenvalue
  std::string describe() const;
};

/// theta admissible iff theta >= 0 pointwise, even, and its (operator-valued)
/// Fourier transform is positive semidefinite within tolerance. The tolerance
/// is scaled by max|theta| so the extreme points of the admissible region pass.
Admissibility is_admissible(const WeightFunction& theta, const FiniteGroup& g,
                            double tol = 1e-9);

/// Evenness check theta(g^{-1}) = theta(g).
bool is_even(const WeightFunction& theta, const FiniteGroup& g, double tol = 1e-12);

}  // namespace latdual
