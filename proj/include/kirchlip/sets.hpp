#ifndef KIRCHLIP_SETS_HPP
#define KIRCHLIP_SETS_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kirchlip/ints.hpp"

namespace kirchlip::sets {

// Full arithmetic progression over the positive integers: all x >= 1 with
// x = a (mod d), stored with 1 <= a <= d. d = 0 encodes a singleton {a}.
struct Progression {
  Int a, d;

  Progression() : a(1), d(0) {}
  Progression(Int a_, Int d_) : a(std::move(a_)), d(std::move(d_)) {
    require(d >= 0, "progression with negative difference");
    require(a >= 1 || d >= 1, "singleton progression needs a >= 1");
    if (d >= 1) a = mod_floor(a - 1, d) + 1;
    require(a >= 1, "progression with non-positive least element");
  }

  bool is_singleton() const { return d == 0; }

  bool contains(const Int& x) const {
    if (x < 1) return false;
    if (d == 0) return x == a;
    return mod_floor(x - a, d) == 0;
  }

  // Basic open sets: infinite full progressions with gcd(a, d) = 1 and d
  // square-free.
  bool is_basic() const {
    return d >= 1 && gcd(a, d) == 1 && is_squarefree(d);
  }

  Int element(const Int& i) const {  // i-th element, 1-based
    internal_check(i >= 1 && (d >= 1 || i == 1), "element index out of range");
    return a + (i - 1) * d;
  }

  bool operator==(const Progression& o) const { return a == o.a && d == o.d; }
  bool operator<(const Progression& o) const {
    return a != o.a ? a < o.a : d < o.d;
  }

  std::string str() const {
    if (d == 0) return "{" + a.get_str() + "}";
    return a.get_str() + "+" + d.get_str() + "N";
  }
};

// Symbolic set: progression, basic-minus-finite, finite list, or union.
struct SetExpression {
  enum class Kind { progression, almost, finite, united };

  Kind kind = Kind::finite;
  Progression prog;                 // progression / almost base
  std::vector<Int> excluded;        // almost
  std::vector<Int> points;          // finite
  std::vector<SetExpression> parts; // united

  static SetExpression progression(Progression p) {
    SetExpression s;
    s.kind = Kind::progression;
    s.prog = std::move(p);
    return s;
  }
  static SetExpression progression(const Int& a, const Int& d) {
    return progression(Progression(a, d));
  }
  static SetExpression almost(Progression base, std::vector<Int> excl) {
    require(base.is_basic(), "almost-basic set needs a basic base");
    std::sort(excl.begin(), excl.end());
    excl.erase(std::unique(excl.begin(), excl.end()), excl.end());
    for (const Int& e : excl)
      require(base.contains(e), "excluded point outside the base progression");
    if (excl.empty()) return progression(std::move(base));
    SetExpression s;
    s.kind = Kind::almost;
    s.prog = std::move(base);
    s.excluded = std::move(excl);
    return s;
  }
  static SetExpression finite(std::vector<Int> pts) {
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    for (const Int& p : pts) require(p >= 1, "finite set with non-positive point");
    SetExpression s;
    s.kind = Kind::finite;
    s.points = std::move(pts);
    return s;
  }
  static SetExpression union_of(std::vector<SetExpression> parts) {
    require(!parts.empty(), "union of no parts");
    if (parts.size() == 1) return parts[0];
    SetExpression s;
    s.kind = Kind::united;
    s.parts = std::move(parts);
    return s;
  }
};

inline bool contains(const SetExpression& s, const Int& x) {
  switch (s.kind) {
    case SetExpression::Kind::progression:
      return s.prog.contains(x);
    case SetExpression::Kind::almost:
      return s.prog.contains(x) &&
             !std::binary_search(s.excluded.begin(), s.excluded.end(), x);
    case SetExpression::Kind::finite:
      return std::binary_search(s.points.begin(), s.points.end(), x);
    case SetExpression::Kind::united:
      for (const auto& p : s.parts)
        if (contains(p, x)) return true;
      return false;
  }
  return false;
}

inline void enumerate_into(const SetExpression& s, const Int& n,
                           std::set<Int>& out) {
  switch (s.kind) {
    case SetExpression::Kind::progression:
    case SetExpression::Kind::almost:
      if (s.prog.d == 0) {
        if (s.prog.a <= n) out.insert(s.prog.a);
      } else {
        for (Int x = s.prog.a; x <= n; x += s.prog.d)
          if (s.kind == SetExpression::Kind::progression ||
              !std::binary_search(s.excluded.begin(), s.excluded.end(), x))
            out.insert(x);
      }
      break;
    case SetExpression::Kind::finite:
      for (const Int& p : s.points)
        if (p <= n) out.insert(p);
      break;
    case SetExpression::Kind::united:
      for (const auto& p : s.parts) enumerate_into(p, n, out);
      break;
  }
}

// All elements of s in [1, n], ascending.
inline std::vector<Int> enumerate_window(const SetExpression& s, const Int& n) {
  require(n >= 0, "enumerate_window: negative window");
  std::set<Int> acc;
  enumerate_into(s, n, acc);
  return std::vector<Int>(acc.begin(), acc.end());
}

// First n elements in increasing order; grows the window until enough appear.
// largest element of a bounded expression, or absent when infinite
inline std::optional<Int> max_point(const SetExpression& s) {
  switch (s.kind) {
    case SetExpression::Kind::progression:
      if (s.prog.d >= 1) return std::nullopt;
      return s.prog.a;
    case SetExpression::Kind::almost:
      return std::nullopt;
    case SetExpression::Kind::finite:
      if (s.points.empty()) return Int(0);
      return s.points.back();
    case SetExpression::Kind::united: {
      Int top(0);
      for (const auto& p : s.parts) {
        auto m = max_point(p);
        if (!m) return std::nullopt;
        top = std::max(top, *m);
      }
      return top;
    }
  }
  return std::nullopt;
}

inline std::vector<Int> first_elements(const SetExpression& s, int n) {
  require(n >= 0, "first_elements: negative count");
  if (n == 0) return {};
  if (s.kind == SetExpression::Kind::progression && s.prog.d >= 1) {
    std::vector<Int> out;
    for (int i = 1; i <= n; ++i) out.push_back(s.prog.element(i));
    return out;
  }
  if (auto top = max_point(s)) {
    auto xs = enumerate_window(s, *top);
    require(static_cast<int>(xs.size()) >= n,
            "first_elements: the set has fewer elements");
    xs.resize(n);
    return xs;
  }
  for (Int bound = 64 * n;; bound *= 4) {
    auto xs = enumerate_window(s, bound);
    if (static_cast<int>(xs.size()) >= n) {
      xs.resize(n);
      return xs;
    }
    if (bound > 100000000)
      throw ResourceError("first_elements: set appears too sparse");
  }
}

// Closure of a finite point set: the smallest full progression (or the point
// itself) containing it; d is the gcd of pairwise differences.
inline SetExpression ac_closure(std::vector<Int> pts) {
  require(!pts.empty(), "ac_closure: empty point set");
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  for (const Int& p : pts) require(p >= 1, "ac_closure: non-positive point");
  if (pts.size() == 1) return SetExpression::finite({pts[0]});
  Int d = 0;
  for (size_t i = 1; i < pts.size(); ++i) d = gcd(d, pts[i] - pts[0]);
  return SetExpression::progression(pts[0], d);
}

// Intersection of full progressions as a full progression, via CRT.
inline std::optional<Progression> intersect_progressions(
    const std::vector<Progression>& ps) {
  require(!ps.empty(), "intersect_progressions: empty list");
  CongruenceSystem sys;
  for (const auto& p : ps) {
    require(p.d >= 1, "intersect_progressions: singleton argument");
    sys.push_back({p.a, p.d});
  }
  auto sol = crt_solve(sys);
  if (!sol) return std::nullopt;
  return Progression(sol->residue == 0 ? sol->modulus : sol->residue,
                     sol->modulus);
}

inline bool is_almost_basic(const SetExpression& s) {
  switch (s.kind) {
    case SetExpression::Kind::progression:
      return s.prog.is_basic();
    case SetExpression::Kind::almost:
      return true;  // validated at construction
    default:
      return false;
  }
}

// Symbolic intersection; absent result means the intersection is empty.
inline std::optional<SetExpression> intersect(const SetExpression& s,
                                              const SetExpression& t);

namespace detail {

inline std::optional<SetExpression> intersect_filtered(
    const std::vector<Int>& pts, const SetExpression& other) {
  std::vector<Int> kept;
  for (const Int& p : pts)
    if (contains(other, p)) kept.push_back(p);
  if (kept.empty()) return std::nullopt;
  return SetExpression::finite(std::move(kept));
}

}  // namespace detail

inline std::optional<SetExpression> intersect(const SetExpression& s,
                                              const SetExpression& t) {
  using K = SetExpression::Kind;
  if (s.kind == K::united) {
    std::vector<SetExpression> parts;
    for (const auto& p : s.parts)
      if (auto r = intersect(p, t)) parts.push_back(*r);
    if (parts.empty()) return std::nullopt;
    return SetExpression::union_of(std::move(parts));
  }
  if (t.kind == K::united) return intersect(t, s);
  if (s.kind == K::finite) return detail::intersect_filtered(s.points, t);
  if (t.kind == K::finite) return detail::intersect_filtered(t.points, s);
  if (s.prog.is_singleton())
    return detail::intersect_filtered({s.prog.a}, t);
  if (t.prog.is_singleton())
    return detail::intersect_filtered({t.prog.a}, s);

  auto base = intersect_progressions({s.prog, t.prog});
  if (!base) return std::nullopt;
  std::vector<Int> excl;
  for (const Int& e : s.excluded)
    if (base->contains(e)) excl.push_back(e);
  for (const Int& e : t.excluded)
    if (base->contains(e)) excl.push_back(e);
  if (excl.empty()) return SetExpression::progression(*base);
  require(base->is_basic(),
          "intersect: exclusions over a non-basic base progression");
  return SetExpression::almost(*base, std::move(excl));
}

inline bool sets_intersect(const SetExpression& s, const SetExpression& t) {
  return intersect(s, t).has_value();
}

// True when s has infinitely many elements congruent to r mod m (any element,
// for finite s).
inline bool hits_residue(const SetExpression& s, const Int& r, const Int& m) {
  require(m >= 1, "hits_residue: non-positive modulus");
  switch (s.kind) {
    case SetExpression::Kind::progression:
    case SetExpression::Kind::almost:
      if (s.prog.d == 0) return mod_floor(s.prog.a - r, m) == 0;
      return mod_floor(s.prog.a - r, gcd(s.prog.d, m)) == 0;
    case SetExpression::Kind::finite:
      for (const Int& p : s.points)
        if (mod_floor(p - r, m) == 0) return true;
      return false;
    case SetExpression::Kind::united:
      for (const auto& p : s.parts)
        if (hits_residue(p, r, m)) return true;
      return false;
  }
  return false;
}

// Elements of s in [1, bound] congruent to n mod p^k; p prime, k >= 1.
inline std::vector<Int> proximity_solve(const SetExpression& s, const Int& n,
                                        const Int& p, int k, const Int& bound) {
  require(is_prime(p), "proximity_solve: modulus base not prime");
  require(k >= 1, "proximity_solve: exponent must be >= 1");
  Int m = pow_int(p, static_cast<unsigned long>(k));
  std::vector<Int> out;
  for (const Int& x : enumerate_window(s, bound))
    if (mod_floor(x - n, m) == 0) out.push_back(x);
  return out;
}

// Subset test for almost-basic pieces: base inside base, and the superset's
// punctures carried over.
inline bool almost_subset(const SetExpression& piece, const SetExpression& outer) {
  require(is_almost_basic(piece) && is_almost_basic(outer),
          "almost_subset: arguments must be almost-basic");
  const Progression& bp = piece.prog;
  const Progression& bo = outer.prog;
  if (mod_floor(bp.d, bo.d) != 0) return false;
  if (mod_floor(bp.a - bo.a, bo.d) != 0) return false;
  for (const Int& e : outer.excluded)
    if (bp.contains(e) &&
        !std::binary_search(piece.excluded.begin(), piece.excluded.end(), e))
      return false;
  return true;
}

// Stable structural key; union parts are sorted, so permuted unions match.
inline std::string canonical_key(const SetExpression& s) {
  switch (s.kind) {
    case SetExpression::Kind::progression:
      return "p(" + s.prog.a.get_str() + "," + s.prog.d.get_str() + ")";
    case SetExpression::Kind::almost: {
      std::string k = "a(" + s.prog.a.get_str() + "," + s.prog.d.get_str() + ";";
      for (const Int& e : s.excluded) k += e.get_str() + ",";
      return k + ")";
    }
    case SetExpression::Kind::finite: {
      std::string k = "f(";
      for (const Int& p : s.points) k += p.get_str() + ",";
      return k + ")";
    }
    case SetExpression::Kind::united: {
      std::vector<std::string> keys;
      for (const auto& p : s.parts) keys.push_back(canonical_key(p));
      std::sort(keys.begin(), keys.end());
      std::string k = "u(";
      for (const auto& x : keys) k += x + ";";
      return k + ")";
    }
  }
  return "";
}

inline bool set_equal(const SetExpression& s, const SetExpression& t) {
  return canonical_key(s) == canonical_key(t);
}

}  // namespace kirchlip::sets

#endif
