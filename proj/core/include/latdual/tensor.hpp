#pragma once

#include <complex>
#include <vector>

#include "latdual/errors.hpp"

namespace latdual {

/// Small dense complex tensor, row-major (last leg fastest). Legs are plain
/// positional indices; contraction uses the bilinear dot (no conjugation).
struct Tensor {
  std::vector<int> dims;
  std::vector<std::complex<double>> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> d);
  static Tensor scalar(std::complex<double> v);

  int rank() const { return static_cast<int>(dims.size()); }
  long long size() const { return static_cast<long long>(data.size()); }
  std::complex<double>& at(const std::vector<int>& idx);
  std::complex<double> at(const std::vector<int>& idx) const;

  Tensor conjugate() const;
  Tensor permute(const std::vector<int>& order) const;  // new leg k = old leg order[k]
  Tensor reverse_legs() const;
};

/// Outer product: legs of a followed by legs of b.
Tensor outer(const Tensor& a, const Tensor& b);

/// Contract pairs of legs (one from a, one from b) with the bilinear dot.
/// Result legs: remaining legs of a in order, then remaining legs of b.
Tensor contract(const Tensor& a, const Tensor& b,
                const std::vector<std::pair<int, int>>& pairs);

/// Contract two legs of the same tensor (trace over a leg pair).
Tensor self_contract(const Tensor& a, int leg1, int leg2);

/// Hermitian inner product <a, b> = sum conj(a) * b; shapes must match.
std::complex<double> dot_conj(const Tensor& a, const Tensor& b);

}  // namespace latdual
