#ifndef KIRCHLIP_MATRIX_HPP
#define KIRCHLIP_MATRIX_HPP

#include <vector>

#include "kirchlip/ints.hpp"

namespace kirchlip {

struct IntMat {
  int rows = 0, cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Int(0)) {}

  Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  bool operator==(const IntMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline IntMat mul(const IntMat& x, const IntMat& y) {
  internal_check(x.cols == y.rows, "mul: shape mismatch");
  IntMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& v = x.at(i, k);
      if (v == 0) continue;
      for (int j = 0; j < y.cols; ++j) r.at(i, j) += v * y.at(k, j);
    }
  return r;
}

// Fraction-free Gaussian elimination; exact integer determinant.
inline Int det_bareiss(IntMat m) {
  internal_check(m.rows == m.cols, "det_bareiss: not square");
  int n = m.rows;
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(m.at(k, j), m.at(piv, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
        mpz_divexact(m.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

struct SmithResult {
  IntMat D, U, V;        // U * M * V = D, U and V unimodular
  std::vector<Int> diag;  // non-negative, each dividing the next
  int rank = 0;           // number of nonzero diagonal entries
};

namespace detail {

// Nearest-integer quotient keeps entries small under min-abs pivoting.
inline Int div_nearest(const Int& a, const Int& b) {
  Int q, r;
  // floor remainder carries the sign of b; stepping q once moves r by -b
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (2 * abs(r) > abs(b)) q += 1;
  return q;
}

}  // namespace detail

inline SmithResult smith_normal_form(const IntMat& m) {
  SmithResult res;
  IntMat A = m;
  IntMat U = IntMat::identity(m.rows);
  IntMat V = IntMat::identity(m.cols);

  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int c = 0; c < A.cols; ++c) std::swap(A.at(i, c), A.at(j, c));
    for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, i), A.at(r, j));
    for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
  };
  auto row_sub = [&](int i, int j, const Int& q) {  // row i -= q * row j
    if (q == 0) return;
    for (int c = 0; c < A.cols; ++c) A.at(i, c) -= q * A.at(j, c);
    for (int c = 0; c < U.cols; ++c) U.at(i, c) -= q * U.at(j, c);
  };
  auto col_sub = [&](int i, int j, const Int& q) {  // col i -= q * col j
    if (q == 0) return;
    for (int r = 0; r < A.rows; ++r) A.at(r, i) -= q * A.at(r, j);
    for (int r = 0; r < V.rows; ++r) V.at(r, i) -= q * V.at(r, j);
  };

  int bound = std::min(A.rows, A.cols);

  // Clears row t and column t off-diagonal, pivoting by minimum
  // absolute value (first such entry in row-major order).
  auto eliminate_at = [&](int t) -> bool {
    while (true) {
      int pi = -1, pj = -1;
      for (int i = t; i < A.rows; ++i)
        for (int j = t; j < A.cols; ++j)
          if (A.at(i, j) != 0 &&
              (pi < 0 || abs(A.at(i, j)) < abs(A.at(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) return false;  // submatrix is zero
      swap_rows(t, pi);
      swap_cols(t, pj);
      bool clean = true;
      for (int i = t + 1; i < A.rows; ++i)
        if (A.at(i, t) != 0) {
          row_sub(i, t, detail::div_nearest(A.at(i, t), A.at(t, t)));
          if (A.at(i, t) != 0) clean = false;
        }
      for (int j = t + 1; j < A.cols; ++j)
        if (A.at(t, j) != 0) {
          col_sub(j, t, detail::div_nearest(A.at(t, j), A.at(t, t)));
          if (A.at(t, j) != 0) clean = false;
        }
      if (clean) return true;
    }
  };

  int r = 0;
  while (r < bound && eliminate_at(r)) ++r;

  for (int i = 0; i < r; ++i)
    if (A.at(i, i) < 0) {
      for (int c = 0; c < A.cols; ++c) A.at(i, c) = -A.at(i, c);
      for (int c = 0; c < U.cols; ++c) U.at(i, c) = -U.at(i, c);
    }

  // Enforce the divisibility chain with 2x2 unimodular transforms on the
  // diagonal: diag(a,b) -> diag(g, ab/g) for g = gcd(a,b). Each fix strictly
  // shrinks d_i, so full passes reach a fixpoint.
  auto pair_fix = [&](int i) {
    Int a = A.at(i, i), b = A.at(i + 1, i + 1);
    ExtGcd e = ext_gcd(a, b);
    Int ag = a / e.g, bg = b / e.g;
    // Rows i, i+1 of U: left factor [[s, t], [-b/g, a/g]].
    for (int c = 0; c < U.cols; ++c) {
      Int u0 = U.at(i, c), u1 = U.at(i + 1, c);
      U.at(i, c) = e.s * u0 + e.t * u1;
      U.at(i + 1, c) = -bg * u0 + ag * u1;
    }
    // Columns i, i+1 of V: right factor [[1, -t*b/g], [1, s*a/g]].
    for (int rr = 0; rr < V.rows; ++rr) {
      Int v0 = V.at(rr, i), v1 = V.at(rr, i + 1);
      V.at(rr, i) = v0 + v1;
      V.at(rr, i + 1) = -e.t * bg * v0 + e.s * ag * v1;
    }
    A.at(i, i) = e.g;
    A.at(i + 1, i + 1) = ag * b;
  };

  bool again = true;
  while (again) {
    again = false;
    for (int i = 0; i + 1 < r; ++i)
      if (mod_floor(A.at(i + 1, i + 1), A.at(i, i)) != 0) {
        pair_fix(i);
        again = true;
      }
  }

  res.D = A;
  res.U = U;
  res.V = V;
  res.rank = r;
  for (int i = 0; i < bound; ++i) res.diag.push_back(A.at(i, i));
  internal_check(mul(mul(U, m), V) == A, "smith_normal_form: U*M*V != D");
  return res;
}

}  // namespace kirchlip

#endif
