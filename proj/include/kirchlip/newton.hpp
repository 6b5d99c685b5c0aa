#ifndef KIRCHLIP_NEWTON_HPP
#define KIRCHLIP_NEWTON_HPP

#include <algorithm>
#include <utility>
#include <vector>

#include "kirchlip/poly.hpp"
#include "kirchlip/window_fn.hpp"

namespace kirchlip::lip {

using PointList = std::vector<std::pair<Int, Int>>;

// table[k][i] = f[x_i, ..., x_{i+k}]
using DiffTable = std::vector<std::vector<Rat>>;

inline DiffTable divided_differences(const PointList& pts) {
  require(!pts.empty(), "divided differences of an empty point list");
  size_t n = pts.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      require(pts[i].first != pts[j].first,
              "divided differences: duplicate x-value");
  DiffTable t(n);
  t[0].reserve(n);
  for (const auto& p : pts) t[0].emplace_back(p.second);
  for (size_t k = 1; k < n; ++k) {
    t[k].resize(n - k);
    for (size_t i = 0; i + k < n; ++i)
      t[k][i] =
          (t[k - 1][i + 1] - t[k - 1][i]) / Rat(pts[i + k].first - pts[i].first);
  }
  return t;
}

// Newton coefficients relative to the listed order: a_k = f[x_1..x_{k+1}].
// Rows are produced one at a time; once a row is identically zero every
// later coefficient is zero, so large polynomial restrictions cost
// O(deg * n) instead of O(n^2).
inline std::vector<Rat> newton_coeffs(const PointList& pts) {
  require(!pts.empty(), "divided differences of an empty point list");
  size_t n = pts.size();
  {
    std::vector<Int> xs;
    xs.reserve(n);
    for (const auto& p : pts) xs.push_back(p.first);
    std::sort(xs.begin(), xs.end());
    for (size_t i = 0; i + 1 < n; ++i)
      require(xs[i] != xs[i + 1], "divided differences: duplicate x-value");
  }
  std::vector<Rat> row;
  row.reserve(n);
  for (const auto& p : pts) row.emplace_back(p.second);
  std::vector<Rat> a(n, Rat(0));
  a[0] = row[0];
  for (size_t k = 1; k < n; ++k) {
    bool zero = true;
    for (const Rat& q : row)
      if (q != 0) {
        zero = false;
        break;
      }
    if (zero) break;
    std::vector<Rat> next(n - k);
    for (size_t i = 0; i + k < n; ++i)
      next[i] =
          (row[i + 1] - row[i]) / Rat(pts[i + k].first - pts[i].first);
    row = std::move(next);
    a[k] = row[0];
  }
  return a;
}

inline RatPoly newton_to_poly(const std::vector<Int>& xs,
                              const std::vector<Rat>& coeffs) {
  internal_check(coeffs.size() <= xs.size() + 1,
                 "newton_to_poly: more coefficients than basis polynomials");
  RatPoly acc;
  RatPoly basis(Rat(1));
  for (size_t k = 0; k < coeffs.size(); ++k) {
    acc = acc + coeffs[k] * basis;
    if (k + 1 < coeffs.size())
      basis = basis * RatPoly(std::vector<Rat>{Rat(-xs[k]), Rat(1)});
  }
  return acc;
}

// Interpolation polynomial of degree < |pts|, exact over Q.
inline RatPoly interp_poly(const PointList& pts) {
  std::vector<Rat> a = newton_coeffs(pts);
  std::vector<Int> xs;
  xs.reserve(pts.size());
  for (const auto& p : pts) xs.push_back(p.first);
  return newton_to_poly(xs, a);
}

// Leading divided difference f[x_1..x_n] over the full list.
inline Rat top_divided_difference(const PointList& pts) {
  return divided_differences(pts).back()[0];
}

// Newton-basis coefficient vector of a function relative to an ordered
// enumeration x_1, x_2, ... of its domain.
struct ProductSum {
  std::vector<Int> enumeration;
  std::vector<Rat> coeffs;

  bool is_integral() const {
    for (const Rat& q : coeffs)
      if (!is_integer(q)) return false;
    return true;
  }

  std::vector<Int> int_coeffs() const {
    internal_check(is_integral(), "int_coeffs of a non-integral product-sum");
    std::vector<Int> v;
    v.reserve(coeffs.size());
    for (const Rat& q : coeffs) v.push_back(q.get_num());
    return v;
  }
};

inline ProductSum product_sum_encode(const std::vector<Int>& enumeration,
                                     const std::vector<Int>& values) {
  require(enumeration.size() == values.size(),
          "product-sum encode: enumeration and values differ in length");
  PointList pts;
  pts.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i)
    pts.emplace_back(enumeration[i], values[i]);
  ProductSum ps;
  ps.enumeration = enumeration;
  if (!pts.empty()) ps.coeffs = newton_coeffs(pts);
  return ps;
}

inline ProductSum product_sum_encode(const WindowFunction& f,
                                     const std::vector<Int>& enumeration) {
  require(enumeration == f.points(),
          "product-sum encode: enumeration does not match the window");
  std::vector<Int> vals;
  vals.reserve(enumeration.size());
  for (const Int& x : enumeration) vals.push_back(f.at(x));
  return product_sum_encode(enumeration, vals);
}

inline ProductSum product_sum_encode(const WindowFunction& f) {
  return product_sum_encode(f, f.points());
}

inline Rat product_sum_eval(const ProductSum& ps, const Int& x) {
  Rat acc = 0;
  Rat basis = 1;
  for (size_t k = 0; k < ps.coeffs.size(); ++k) {
    acc += ps.coeffs[k] * basis;
    basis *= Rat(x - ps.enumeration[k]);
  }
  return acc;
}

// Values on the enumeration; inverse of encode.
inline std::vector<Rat> product_sum_decode(const ProductSum& ps) {
  std::vector<Rat> vals;
  vals.reserve(ps.enumeration.size());
  for (const Int& x : ps.enumeration) vals.push_back(product_sum_eval(ps, x));
  return vals;
}

inline bool is_arith_progression(const std::vector<Int>& xs) {
  if (xs.size() < 2) return false;
  Int d = xs[1] - xs[0];
  for (size_t i = 2; i < xs.size(); ++i)
    if (xs[i] - xs[i - 1] != d) return false;
  return d > 0;
}

// D(f)(x) = (f(x+d) - f(x)) / d on an arithmetic enumeration; coefficient map
// a_k -> (k+1) a_{k+1}, with the enumeration shortened by its last point.
inline ProductSum d_derivative(const ProductSum& ps) {
  require(is_arith_progression(ps.enumeration),
          "d-derivative needs an arithmetic-progression enumeration");
  require(ps.coeffs.size() <= ps.enumeration.size(),
          "d-derivative: more coefficients than enumeration points");
  ProductSum out;
  out.enumeration.assign(ps.enumeration.begin(), ps.enumeration.end() - 1);
  for (size_t k = 0; k + 1 < ps.coeffs.size(); ++k)
    out.coeffs.push_back(Rat(k + 1) * ps.coeffs[k + 1]);
  return out;
}

}  // namespace kirchlip::lip

#endif
