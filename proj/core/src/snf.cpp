#include "latdual/snf.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace latdual {

long long gcd_ll(long long a, long long b) { return std::gcd(std::llabs(a), std::llabs(b)); }

namespace {

long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("integer overflow in SNF");
  return r;
}

long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("integer overflow in SNF");
  return r;
}

// row_i += c * row_j applied to a matrix.
void row_axpy(MatZ& m, int i, int j, long long c) {
  for (int k = 0; k < m.cols(); ++k) m(i, k) = checked_add(m(i, k), checked_mul(c, m(j, k)));
}
void col_axpy(MatZ& m, int i, int j, long long c) {
  for (int k = 0; k < m.rows(); ++k) m(k, i) = checked_add(m(k, i), checked_mul(c, m(k, j)));
}

}  // namespace

SmithForm smith_normal_form(const MatZ& a) {
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  SmithForm f;
  f.s = a;
  f.u = MatZ::Identity(m, m);
  f.uinv = MatZ::Identity(m, m);
  f.v = MatZ::Identity(n, n);
  f.vinv = MatZ::Identity(n, n);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    f.s.row(i).swap(f.s.row(j));
    f.u.row(i).swap(f.u.row(j));
    f.uinv.col(i).swap(f.uinv.col(j));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    f.s.col(i).swap(f.s.col(j));
    f.v.col(i).swap(f.v.col(j));
    f.vinv.row(i).swap(f.vinv.row(j));
  };
  auto negate_row = [&](int i) {
    f.s.row(i) *= -1;
    f.u.row(i) *= -1;
    f.uinv.col(i) *= -1;
  };
  auto add_row = [&](int i, int j, long long c) {  // row_i += c row_j
    row_axpy(f.s, i, j, c);
    row_axpy(f.u, i, j, c);
    col_axpy(f.uinv, j, i, -c);  // inverse: col_j -= c col_i
  };
  auto add_col = [&](int i, int j, long long c) {  // col_i += c col_j
    col_axpy(f.s, i, j, c);
    col_axpy(f.v, i, j, c);
    row_axpy(f.vinv, j, i, -c);
  };

  const int t_max = std::min(m, n);
  int t = 0;
  for (; t < t_max; ++t) {
    // Find the smallest nonzero |entry| in the trailing submatrix.
    int pi = -1, pj = -1;
    long long best = 0;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        long long v = std::llabs(f.s(i, j));
        if (v != 0 && (pi < 0 || v < best)) { pi = i; pj = j; best = v; }
      }
    if (pi < 0) break;  // all zero
    swap_rows(t, pi);
    swap_cols(t, pj);
    if (f.s(t, t) < 0) negate_row(t);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < m; ++i) {
        if (f.s(i, t) == 0) continue;
        long long q = f.s(i, t) / f.s(t, t);
        add_row(i, t, -q);
        if (f.s(i, t) != 0) {  // remainder smaller than pivot: swap up and redo
          swap_rows(t, i);
          if (f.s(t, t) < 0) negate_row(t);
          clean = false;
        }
      }
      for (int j = t + 1; j < n; ++j) {
        if (f.s(t, j) == 0) continue;
        long long q = f.s(t, j) / f.s(t, t);
        add_col(j, t, -q);
        if (f.s(t, j) != 0) {
          swap_cols(t, j);
          if (f.s(t, t) < 0) negate_row(t);
          clean = false;
        }
      }
      if (clean) {
        // Divisibility: pivot must divide the rest of the submatrix.
        for (int i = t + 1; i < m && clean; ++i)
          for (int j = t + 1; j < n && clean; ++j)
            if (f.s(i, j) % f.s(t, t) != 0) {
              add_row(t, i, 1);
              clean = false;
            }
      }
    }
  }

  f.diag.assign(t_max, 0);
  f.rank = 0;
  for (int i = 0; i < t_max; ++i) {
    f.diag[i] = f.s(i, i);
    if (f.diag[i] != 0) ++f.rank;
  }
  return f;
}

long long solve_cyclic(long long s, long long b, long long n) {
  s = ((s % n) + n) % n;
  b = ((b % n) + n) % n;
  if (s == 0) return b == 0 ? 0 : -1;
  long long g = gcd_ll(s, n);
  if (b % g != 0) return -1;
  long long n2 = n / g, s2 = (s / g) % n2, b2 = (b / g) % n2;
  // Inverse of s2 mod n2 by extended Euclid.
  long long r0 = n2, r1 = s2, x0 = 0, x1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long r2 = r0 - q * r1;
    long long x2 = x0 - q * x1;
    r0 = r1; r1 = r2; x0 = x1; x1 = x2;
  }
  long long inv = ((x0 % n2) + n2) % n2;
  return (b2 * inv) % n2;
}

}  // namespace latdual
