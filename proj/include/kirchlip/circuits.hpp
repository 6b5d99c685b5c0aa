#ifndef KIRCHLIP_CIRCUITS_HPP
#define KIRCHLIP_CIRCUITS_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "kirchlip/newton.hpp"
#include "kirchlip/sets.hpp"
#include "kirchlip/window_fn.hpp"

namespace kirchlip::lip {

// The whole point list interpolates non-integrally while every one-point
// deletion interpolates integrally; elements are congruent modulo the
// denominator of the leading coefficient.
struct Circuit {
  std::vector<Int> points;
  Rat leading;
  Int denominator;

  static Circuit checked(const PointList& pv) {
    require(pv.size() >= 2, "circuit: needs at least two points");
    Circuit c;
    for (const auto& p : pv) c.points.push_back(p.first);
    c.leading = top_divided_difference(pv);
    require(!is_integer(c.leading), "circuit: leading coefficient is integral");
    c.denominator = c.leading.get_den();
    internal_check(c.denominator >= 2, "circuit: reduced denominator below 2");
    for (size_t i = 1; i < c.points.size(); ++i)
      internal_check(
          mod_floor(c.points[i] - c.points[0], c.denominator) == 0,
          "circuit: points not congruent modulo the denominator");
    for (size_t skip = 0; skip < pv.size(); ++skip) {
      PointList rest;
      for (size_t i = 0; i < pv.size(); ++i)
        if (i != skip) rest.push_back(pv[i]);
      if (rest.empty()) continue;
      for (const Rat& a : newton_coeffs(rest))
        internal_check(is_integer(a), "circuit: a proper subset is non-integral");
    }
    return c;
  }
};

namespace detail {

// Top divided differences over subsets of a fixed sorted point list, memoized
// by bitmask: f[S] = (f[S \ min] - f[S \ max]) / (max - min).
struct DiffMemo {
  const std::vector<Int>& xs;
  const std::vector<Int>& ys;
  std::unordered_map<std::uint64_t, Rat> table;

  DiffMemo(const std::vector<Int>& x, const std::vector<Int>& y)
      : xs(x), ys(y) {}

  const Rat& top(std::uint64_t mask) {
    auto it = table.find(mask);
    if (it != table.end()) return it->second;
    int lo = __builtin_ctzll(mask);
    int hi = 63 - __builtin_clzll(mask);
    Rat v;
    if (lo == hi) {
      v = Rat(ys[lo]);
    } else {
      const Rat& a = top(mask & ~(std::uint64_t{1} << lo));
      const Rat& b = top(mask & ~(std::uint64_t{1} << hi));
      v = (a - b) / Rat(xs[hi] - xs[lo]);
    }
    return table.emplace(mask, std::move(v)).first->second;
  }
};

}  // namespace detail

// Absent iff f agrees with an integer polynomial on its window. Present
// result is the minimal circuit: smallest size, then lexicographically least
// point list. Full-window Newton integrality decides the absent case; the
// subset scan only locates the witness, skipping subsets whose pairwise
// differences are coprime (such sets are never circuits).
inline std::optional<Circuit> find_circuit(const WindowFunction& f) {
  std::vector<Int> xs = f.points();
  size_t n = xs.size();
  if (n <= 1) return std::nullopt;
  std::vector<Int> ys;
  ys.reserve(n);
  for (const Int& x : xs) ys.push_back(f.at(x));

  PointList all;
  for (size_t i = 0; i < n; ++i) all.emplace_back(xs[i], ys[i]);
  bool window_lip = true;
  for (const Rat& a : newton_coeffs(all))
    if (!is_integer(a)) {
      window_lip = false;
      break;
    }
  if (window_lip) return std::nullopt;
  if (n > 64)
    throw ResourceError("find_circuit: witness scan exceeds 64 points");

  detail::DiffMemo memo(xs, ys);
  std::vector<int> idx;
  for (size_t size = 2; size <= n; ++size) {
    idx.resize(size);
    for (size_t i = 0; i < size; ++i) idx[i] = static_cast<int>(i);
    while (true) {
      Int g = 0;
      for (size_t i = 1; i < size; ++i) g = gcd(g, xs[idx[i]] - xs[idx[i - 1]]);
      if (g != 1) {
        std::uint64_t mask = 0;
        for (int i : idx) mask |= std::uint64_t{1} << i;
        const Rat& c = memo.top(mask);
        if (!is_integer(c)) {
          PointList pv;
          for (int i : idx) pv.emplace_back(xs[i], ys[i]);
          return Circuit::checked(pv);
        }
      }
      int k = static_cast<int>(size) - 1;
      while (k >= 0 && idx[k] == static_cast<int>(n - size + k)) --k;
      if (k < 0) break;
      ++idx[k];
      for (size_t i = k + 1; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  throw InternalError(
      "find_circuit: window non-integral but the subset scan found no circuit");
}

struct Improvement {
  int index = 0;  // 1-based, least i with a non-integral replacement set
  Circuit next;
};

// Lemma-driven replacement: some i <= m makes X u {e} minus {x_i}
// non-integral; returns the least such i and the minimal circuit inside the
// replacement set.
inline Improvement circuit_improve(const WindowFunction& f, const Circuit& X,
                                   int m, const Int& e) {
  int size = static_cast<int>(X.points.size());
  require(m >= 2 && m <= size, "circuit_improve: m out of range");
  require(f.has(e), "circuit_improve: e outside the function domain");
  for (const Int& x : X.points)
    require(x != e, "circuit_improve: e already in the circuit");
  Int g = 0;
  for (int i = 1; i < m; ++i) g = gcd(g, X.points[i] - X.points[0]);
  require(g != 0 && mod_floor(e - X.points[0], g) == 0,
          "circuit_improve: e outside the closure of the first m points");

  for (int i = 1; i <= m; ++i) {
    std::vector<Int> pts;
    for (int j = 0; j < size; ++j)
      if (j != i - 1) pts.push_back(X.points[j]);
    pts.push_back(e);
    std::sort(pts.begin(), pts.end());
    PointList pv;
    for (const Int& x : pts) pv.emplace_back(x, f.at(x));
    bool integral = true;
    for (const Rat& a : newton_coeffs(pv))
      if (!is_integer(a)) {
        integral = false;
        break;
      }
    if (integral) continue;
    auto sub = lip::WindowFunction::from_table(
        sets::SetExpression::finite(pts), pts.back(), pv);
    auto next = find_circuit(sub);
    internal_check(next.has_value(),
                   "circuit_improve: non-integral set without a circuit");
    return {i, *next};
  }
  throw InternalError("circuit_improve: no index works; contradicts the lemma");
}

struct ExchangeReport {
  RatPoly with_a, with_b;  // interpolations on X u {a} and X u {b}
  Rat c;                   // top coefficient over X u {a, b}
  RatPoly correction;      // c (a - b) prod (x - z)
  bool equal = false;
};

// f_{X u {a}} = f_{X u {b}} + c (a - b) prod_{z in X} (x - z), checked exactly.
inline ExchangeReport exchange_transport(const PointList& pv, const Int& a,
                                         const Int& b) {
  require(a != b, "exchange_transport: a and b coincide");
  bool seen_a = false, seen_b = false;
  PointList minus_a, minus_b;
  std::vector<Int> core;
  for (const auto& p : pv) {
    if (p.first == a) {
      seen_a = true;
      minus_b.push_back(p);
      continue;
    }
    if (p.first == b) {
      seen_b = true;
      minus_a.push_back(p);
      continue;
    }
    core.push_back(p.first);
    minus_a.push_back(p);
    minus_b.push_back(p);
  }
  require(seen_a && seen_b, "exchange_transport: a or b missing from the data");

  ExchangeReport rep;
  rep.c = top_divided_difference(pv);
  rep.with_a = interp_poly(minus_b);
  rep.with_b = interp_poly(minus_a);
  RatPoly prod(Rat(1));
  for (const Int& z : core)
    prod = prod * RatPoly(std::vector<Rat>{Rat(-z), Rat(1)});
  rep.correction = (rep.c * Rat(a - b)) * prod;
  rep.equal = rep.with_a == rep.with_b + rep.correction;
  internal_check(rep.equal, "exchange_transport: identity failed");
  return rep;
}

// Theorem-style point selection: least e in <old_points> /\ U /\ [1, bound]
// divisible by every pool prime that does not divide all pairwise differences
// of old_points. Absent result means the bounded search was inconclusive.
inline std::optional<Int> divisibility_point(const sets::SetExpression& U,
                                             const std::vector<Int>& old_points,
                                             const std::vector<Int>& prime_pool,
                                             const Int& bound) {
  require(old_points.size() >= 2, "divisibility_point: needs two old points");
  Int g = 0;
  for (size_t i = 1; i < old_points.size(); ++i)
    g = gcd(g, old_points[i] - old_points[0]);
  Int P = 1;
  for (const Int& p : prime_pool) {
    require(is_prime(p), "divisibility_point: pool entry not prime");
    if (mod_floor(g, p) != 0 && mod_floor(P, p) != 0) P *= p;
  }
  auto closure = sets::ac_closure(old_points);
  for (const Int& e : sets::enumerate_window(closure, bound)) {
    if (mod_floor(e, P) != 0) continue;
    if (!sets::contains(U, e)) continue;
    bool fresh = true;
    for (const Int& x : old_points)
      if (x == e) fresh = false;
    if (fresh) return e;
  }
  return std::nullopt;
}

}  // namespace kirchlip::lip

#endif
