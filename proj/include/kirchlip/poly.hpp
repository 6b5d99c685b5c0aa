#ifndef KIRCHLIP_POLY_HPP
#define KIRCHLIP_POLY_HPP

#include <string>
#include <vector>

#include "kirchlip/ints.hpp"
#include "kirchlip/matrix.hpp"

namespace kirchlip {

// Dense univariate polynomial over Z, coefficients ascending, no trailing
// zeros (zero polynomial = empty vector).
struct IntPoly {
  std::vector<Int> c;

  IntPoly() = default;
  explicit IntPoly(const Int& k) {
    if (k != 0) c.push_back(k);
  }
  explicit IntPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { trim(); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Int& lc() const {
    internal_check(!c.empty(), "lc of zero polynomial");
    return c.back();
  }
  Int coeff(int k) const {
    return (k >= 0 && k < static_cast<int>(c.size())) ? c[k] : Int(0);
  }

  static IntPoly x() { return IntPoly(std::vector<Int>{0, 1}); }
  static IntPoly monomial(int k, const Int& coeff) {
    if (coeff == 0) return IntPoly();
    std::vector<Int> v(k + 1, Int(0));
    v[k] = coeff;
    return IntPoly(std::move(v));
  }
  // prod (x - r) over the given roots
  static IntPoly from_roots(const std::vector<Int>& roots) {
    IntPoly p(Int(1));
    for (const Int& r : roots) p = p * IntPoly(std::vector<Int>{-r, 1});
    return p;
  }

  Int eval(const Int& x) const {
    Int v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }
  Rat eval(const Rat& x) const {
    Rat v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }

  friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> v(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
    return IntPoly(std::move(v));
  }
  friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> v(std::max(a.c.size(), b.c.size()), Int(0));
    for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] -= b.c[i];
    return IntPoly(std::move(v));
  }
  IntPoly operator-() const {
    IntPoly r = *this;
    for (Int& k : r.c) k = -k;
    return r;
  }
  friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<Int> v(a.c.size() + b.c.size() - 1, Int(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    return IntPoly(std::move(v));
  }
  friend IntPoly operator*(const Int& k, const IntPoly& a) {
    IntPoly r = a;
    for (Int& v : r.c) v *= k;
    r.trim();
    return r;
  }
  bool operator==(const IntPoly& o) const { return c == o.c; }

  // Quotient by (x - r); the division must be exact.
  IntPoly div_linear(const Int& r) const {
    if (is_zero()) return IntPoly();
    std::vector<Int> q(c.size() - 1, Int(0));
    Int carry = 0;
    for (int i = degree(); i >= 1; --i) {
      carry = carry * r + c[i];
      q[i - 1] = carry;
    }
    internal_check(carry * r + c[0] == 0, "div_linear: not divisible");
    return IntPoly(std::move(q));
  }

  IntPoly div_scalar(const Int& k) const {
    IntPoly r = *this;
    for (Int& v : r.c) {
      internal_check(mod_floor(v, abs(k)) == 0, "div_scalar: not divisible");
      Int q;
      mpz_divexact(q.get_mpz_t(), v.get_mpz_t(), k.get_mpz_t());
      v = q;
    }
    return r;
  }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (int k = degree(); k >= 0; --k) {
      if (c[k] == 0) continue;
      if (!s.empty()) s += c[k] > 0 ? " + " : " - ";
      else if (c[k] < 0) s += "-";
      Int av = abs(c[k]);
      bool show = av != 1 || k == 0;
      if (show) s += av.get_str();
      if (k >= 1) s += show ? "*x" : "x";
      if (k >= 2) s += "^" + std::to_string(k);
    }
    return s;
  }
};

// Dense univariate polynomial over Q; gmp rationals stay canonical.
struct RatPoly {
  std::vector<Rat> c;

  RatPoly() = default;
  explicit RatPoly(const Rat& k) {
    if (k != 0) c.push_back(k);
  }
  explicit RatPoly(std::vector<Rat> coeffs) : c(std::move(coeffs)) { trim(); }
  explicit RatPoly(const IntPoly& p) {
    for (const Int& k : p.c) c.emplace_back(k);
  }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Rat& lc() const {
    internal_check(!c.empty(), "lc of zero polynomial");
    return c.back();
  }

  bool is_integral() const {
    for (const Rat& q : c)
      if (!is_integer(q)) return false;
    return true;
  }
  IntPoly to_int() const {
    internal_check(is_integral(), "to_int on non-integral polynomial");
    std::vector<Int> v;
    v.reserve(c.size());
    for (const Rat& q : c) v.push_back(q.get_num());
    return IntPoly(std::move(v));
  }

  Rat eval(const Rat& x) const {
    Rat v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  }

  friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> v(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] += b.c[i];
    return RatPoly(std::move(v));
  }
  friend RatPoly operator-(const RatPoly& a, const RatPoly& b) {
    std::vector<Rat> v(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) v[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) v[i] -= b.c[i];
    return RatPoly(std::move(v));
  }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
    if (a.is_zero() || b.is_zero()) return RatPoly();
    std::vector<Rat> v(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
      for (size_t j = 0; j < b.c.size(); ++j) v[i + j] += a.c[i] * b.c[j];
    return RatPoly(std::move(v));
  }
  friend RatPoly operator*(const Rat& k, const RatPoly& a) {
    RatPoly r = a;
    for (Rat& v : r.c) v *= k;
    r.trim();
    return r;
  }
  bool operator==(const RatPoly& o) const { return c == o.c; }

  std::string str() const;
};

// Division with remainder over Q; b nonzero.
inline std::pair<RatPoly, RatPoly> divrem(const RatPoly& a, const RatPoly& b) {
  internal_check(!b.is_zero(), "divrem by zero polynomial");
  RatPoly r = a;
  std::vector<Rat> q(a.degree() >= b.degree() ? a.degree() - b.degree() + 1 : 0,
                     Rat(0));
  while (!r.is_zero() && r.degree() >= b.degree()) {
    int k = r.degree() - b.degree();
    Rat f = r.lc() / b.lc();
    q[k] = f;
    for (int i = 0; i <= b.degree(); ++i) r.c[k + i] -= f * b.c[i];
    r.trim();
  }
  return {RatPoly(std::move(q)), r};
}

inline std::string RatPoly::str() const {
  if (is_zero()) return "0";
  std::string s;
  for (int k = degree(); k >= 0; --k) {
    if (c[k] == 0) continue;
    if (!s.empty()) s += c[k] > 0 ? " + " : " - ";
    else if (c[k] < 0) s += "-";
    Rat av = abs(c[k]);
    bool show = av != 1 || k == 0;
    if (show) s += av.get_str();
    if (k >= 1) s += show ? "*x" : "x";
    if (k >= 2) s += "^" + std::to_string(k);
  }
  return s;
}

// Resultant with the convention res(p, q) = lc(q)^deg(p) * prod p(beta) over
// the roots beta of q; computed as a Sylvester determinant with the argument
// roles swapped. res(p*r, q) = res(p, q) * res(r, q).
inline Int resultant(const IntPoly& p, const IntPoly& q) {
  require(!p.is_zero() && !q.is_zero(), "resultant of zero polynomial");
  int m = q.degree(), n = p.degree();  // rows of q-coeffs: n, rows of p: m
  if (m == 0 && n == 0) return 1;
  if (n == 0) return pow_int(p.c[0], m);       // constant p
  if (m == 0) return pow_int(q.c[0], n);       // constant q: lc(q)^deg p
  IntMat s(m + n, m + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s.at(i, i + j) = q.c[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s.at(n + i, i + j) = p.c[n - j];
  return det_bareiss(s);
}

struct ResultantBezout {
  Int r;
  IntPoly a, b;  // a*p + b*q = r
};

// Integer Bezout cofactors for the resultant; requires gcd(p, q) = 1 over Q.
// The reduced rational solution scaled by r is the Cramer solution of the
// Sylvester system, hence integral.
inline ResultantBezout resultant_bezout(const IntPoly& p, const IntPoly& q) {
  Int r = resultant(p, q);
  require(r != 0, "resultant_bezout: polynomials share a root");
  if (p.degree() == 0 && q.degree() == 0) {
    ExtGcd e = ext_gcd(p.c[0], q.c[0]);
    require(e.g == 1, "resultant_bezout: constant polynomials not coprime");
    return {r, IntPoly(e.s), IntPoly(e.t)};
  }
  if (p.degree() == 0)
    return {r, IntPoly(r / p.c[0]), IntPoly()};  // p | r since r = p^deg q
  if (q.degree() == 0) return {r, IntPoly(), IntPoly(r / q.c[0])};

  RatPoly rp(p), rq(q);
  RatPoly s0(Rat(1)), s1(Rat(0)), t0(Rat(0)), t1(Rat(1));
  RatPoly a = rp, b = rq;
  while (!b.is_zero()) {
    auto [quo, rem] = divrem(a, b);
    a = b;
    b = rem;
    RatPoly s2 = s0 - quo * s1, t2 = t0 - quo * t1;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  internal_check(a.degree() == 0, "resultant_bezout: nonzero resultant but gcd not constant");
  Rat scale = Rat(r) / a.c[0];
  RatPoly A = scale * s0, B = scale * t0;
  // Reduce deg A below deg q; the complementary correction keeps the identity.
  if (A.degree() >= q.degree()) {
    auto [quo, rem] = divrem(A, rq);
    A = rem;
    B = B + quo * rp;
  }
  internal_check((A * rp + B * rq) == RatPoly(Rat(r)),
                 "resultant_bezout: Bezout identity failed");
  internal_check(A.is_integral() && B.is_integral(),
                 "resultant_bezout: cofactors not integral");
  return {r, A.to_int(), B.to_int()};
}

}  // namespace kirchlip

#endif
