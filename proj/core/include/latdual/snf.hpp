#pragma once

#include <vector>

#include <Eigen/Dense>

#include "latdual/errors.hpp"

namespace latdual {

using MatZ = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using VecZ = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

/// Smith normal form S = U * A * V with U, V unimodular, S diagonal with
/// nonnegative entries in divisibility order. Uinv and Vinv are maintained
/// alongside so callers can map between original and normal coordinates.
struct SmithForm {
  MatZ s, u, v, uinv, vinv;
  std::vector<long long> diag;  // min(m,n) entries, zeros after rank
  int rank = 0;
};

SmithForm smith_normal_form(const MatZ& a);

/// Solve s * y == b (mod n) for one cyclic equation; returns the smallest
/// nonnegative solution or -1 if unsolvable.
long long solve_cyclic(long long s, long long b, long long n);

long long gcd_ll(long long a, long long b);

}  // namespace latdual
