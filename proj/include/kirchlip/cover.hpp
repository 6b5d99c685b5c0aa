#ifndef KIRCHLIP_COVER_HPP
#define KIRCHLIP_COVER_HPP

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kirchlip/sets.hpp"

namespace kirchlip::kirch {

struct Cover {
  std::vector<sets::SetExpression> pieces;
  Int window = 0;
};

struct NestSpec {
  std::vector<int> straw;
  std::vector<int> core;
};

struct NestReport {
  bool is_nest = false;
  std::string reason;  // empty when is_nest
  std::vector<int> straw, core;
};

struct CoverClassification {
  int piece_count = 0;
  std::vector<std::pair<int, int>> nerve_edges;  // i < j, nonempty intersection
  bool all_almost_basic = false;
  bool nerve_complete = false;
  bool nerve_connected = false;
  bool star_like = false;
  bool tree_like = false;
  std::optional<NestReport> nest;
};

namespace detail {

// Condition 2 restated over finitely many primes: only primes dividing every
// core difference matter; for p coprime to some core difference that core
// piece hits all residues mod p. A straw piece whose difference is coprime to
// p repeats every residue; otherwise it repeats only its base residue.
inline NestReport evaluate_nest(const std::vector<sets::SetExpression>& pieces,
                                const NestSpec& spec) {
  NestReport rep;
  rep.straw = spec.straw;
  rep.core = spec.core;

  for (int j : spec.core)
    for (int i : spec.straw)
      if (!sets::sets_intersect(pieces[i], pieces[j])) {
        rep.reason = "straw piece " + std::to_string(i) +
                     " misses core piece " + std::to_string(j);
        return rep;
      }
  for (size_t s = 0; s < spec.core.size(); ++s)
    for (size_t t = s + 1; t < spec.core.size(); ++t)
      if (!sets::sets_intersect(pieces[spec.core[s]], pieces[spec.core[t]])) {
        rep.reason = "core pieces " + std::to_string(spec.core[s]) + " and " +
                     std::to_string(spec.core[t]) + " are disjoint";
        return rep;
      }

  if (spec.core.empty()) {
    if (spec.straw.empty()) {
      rep.is_nest = true;
    } else {
      rep.reason = "empty core cannot absorb straw residues";
    }
    return rep;
  }

  Int g = 0;
  for (int j : spec.core) g = gcd(g, pieces[j].prog.d);
  internal_check(g >= 1, "evaluate_nest: core difference gcd vanished");

  auto core_hits = [&](const Int& r, const Int& p) {
    for (int j : spec.core)
      if (sets::hits_residue(pieces[j], r, p)) return true;
    return false;
  };

  for (const auto& pp : trial_factor(g)) {
    const Int& p = pp.p;
    bool straw_all_residues = false;
    for (int i : spec.straw)
      if (mod_floor(pieces[i].prog.d, p) != 0) straw_all_residues = true;
    if (straw_all_residues) {
      for (Int r = 0; r < p; ++r)
        if (!core_hits(r, p)) {
          rep.reason = "residue " + r.get_str() + " mod " + p.get_str() +
                       " repeats in the straw but misses the core";
          return rep;
        }
    } else {
      for (int i : spec.straw) {
        Int r = mod_floor(pieces[i].prog.a, p);
        if (!core_hits(r, p)) {
          rep.reason = "residue " + r.get_str() + " mod " + p.get_str() +
                       " repeats in the straw but misses the core";
          return rep;
        }
      }
    }
  }

  rep.is_nest = true;
  return rep;
}

// Window re-check of the positive verdict against the literal condition:
// every prime divisor of a difference of window straw elements must see a
// core piece in the matching residue class.
inline void spot_check_nest(const std::vector<sets::SetExpression>& pieces,
                            const NestSpec& spec, const Int& window) {
  std::set<Int> straw_pts;
  for (int i : spec.straw) sets::enumerate_into(pieces[i], window, straw_pts);
  std::vector<Int> xs(straw_pts.begin(), straw_pts.end());
  auto core_hits = [&](const Int& r, const Int& p) {
    for (int j : spec.core)
      if (sets::hits_residue(pieces[j], r, p)) return true;
    return false;
  };
  for (size_t s = 0; s < xs.size(); ++s)
    for (size_t t = s + 1; t < xs.size(); ++t)
      for (const auto& pp : trial_factor(xs[t] - xs[s]))
        internal_check(core_hits(mod_floor(xs[s], pp.p), pp.p),
                       "spot_check_nest: window pair contradicts the verdict");
}

}  // namespace detail

inline CoverClassification classify_cover(
    const std::vector<sets::SetExpression>& pieces,
    const std::optional<NestSpec>& partition = std::nullopt) {
  require(!pieces.empty(), "classify_cover: empty cover");
  int n = static_cast<int>(pieces.size());

  CoverClassification out;
  out.piece_count = n;
  out.all_almost_basic = true;
  for (const auto& s : pieces)
    if (!sets::is_almost_basic(s)) out.all_almost_basic = false;

  std::vector<int> comp(n);
  for (int i = 0; i < n; ++i) comp[i] = i;
  std::function<int(int)> root = [&](int i) {
    while (comp[i] != i) i = comp[i] = comp[comp[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (sets::sets_intersect(pieces[i], pieces[j])) {
        out.nerve_edges.emplace_back(i, j);
        comp[root(i)] = root(j);
      }

  out.nerve_complete =
      static_cast<int>(out.nerve_edges.size()) == n * (n - 1) / 2;
  out.nerve_connected = true;
  for (int i = 0; i < n; ++i)
    if (root(i) != root(0)) out.nerve_connected = false;
  out.star_like = out.all_almost_basic && out.nerve_complete;
  out.tree_like = out.nerve_connected &&
                  static_cast<int>(out.nerve_edges.size()) == n - 1;

  if (partition) {
    require(out.all_almost_basic,
            "classify_cover: nest check needs almost-basic pieces");
    std::vector<int> seen(n, 0);
    for (int i : partition->straw) {
      require(i >= 0 && i < n, "classify_cover: straw index out of range");
      require(!seen[i]++, "classify_cover: piece listed twice");
    }
    for (int j : partition->core) {
      require(j >= 0 && j < n, "classify_cover: core index out of range");
      require(!seen[j]++, "classify_cover: piece listed twice");
    }
    for (int i = 0; i < n; ++i)
      require(seen[i] == 1, "classify_cover: partition misses a piece");
    out.nest = detail::evaluate_nest(pieces, *partition);
    if (out.nest->is_nest) detail::spot_check_nest(pieces, *partition, 500);
  }
  return out;
}

}  // namespace kirchlip::kirch

#endif
