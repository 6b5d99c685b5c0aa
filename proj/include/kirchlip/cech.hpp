#ifndef KIRCHLIP_CECH_HPP
#define KIRCHLIP_CECH_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "kirchlip/circuits.hpp"
#include "kirchlip/cover.hpp"
#include "kirchlip/matrix.hpp"
#include "kirchlip/newton.hpp"
#include "kirchlip/sets.hpp"
#include "kirchlip/splitter.hpp"
#include "kirchlip/window_fn.hpp"

namespace kirchlip::cech {

// Window slice of the Cech complex of a cover: one free summand per point of
// each nonempty (k+1)-fold intersection, coordinates in the Newton basis of
// that intersection's own window enumeration.
struct CechComplex {
  std::vector<sets::SetExpression> cover;
  Int window = 0;
  int max_degree = 0;

  std::vector<std::vector<std::vector<int>>> faces;  // per degree, lex order
  std::vector<std::vector<sets::SetExpression>> face_sets;
  std::vector<std::vector<std::vector<Int>>> face_points;
  std::vector<std::vector<int>> offsets;  // per degree, size faces + 1
  std::vector<IntMat> delta;              // delta[k] maps C^k to C^(k+1)

  int rank(int k) const {
    if (k < 0 || k > max_degree) return 0;
    return offsets[k].back();
  }

  int face_at(int k, const std::vector<int>& face) const {
    const auto& fs = faces[k];
    auto it = std::lower_bound(fs.begin(), fs.end(), face);
    if (it == fs.end() || *it != face) return -1;
    return static_cast<int>(it - fs.begin());
  }
};

namespace detail {

// Columns are the Newton basis polynomials of the source enumeration,
// re-encoded over a sub-enumeration. Restricting along a subset of the
// points keeps the coordinates integral.
inline IntMat restriction_matrix(const std::vector<Int>& src,
                                 const std::vector<Int>& dst) {
  IntMat r(static_cast<int>(dst.size()), static_cast<int>(src.size()));
  for (int j = 0; j < r.cols; ++j) {
    lip::PointList vals;
    for (const Int& x : dst) {
      Int v(1);
      for (int t = 0; t < j; ++t) v *= x - src[t];
      vals.emplace_back(x, v);
    }
    if (vals.empty()) continue;
    auto coeffs = lip::newton_coeffs(vals);
    for (int i = 0; i < r.rows; ++i) {
      internal_check(is_integer(coeffs[i]),
                     "cech: restriction left the Newton lattice");
      r.at(i, j) = coeffs[i].get_num();
    }
  }
  return r;
}

inline std::vector<Int> matvec(const IntMat& m, const std::vector<Int>& v) {
  internal_check(static_cast<int>(v.size()) == m.cols, "matvec: shape mismatch");
  std::vector<Int> out(m.rows, Int(0));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (m.at(i, j) != 0) out[i] += m.at(i, j) * v[j];
  return out;
}

inline std::optional<sets::SetExpression> face_meet(
    const std::vector<sets::SetExpression>& cover, const std::vector<int>& face) {
  std::optional<sets::SetExpression> cur = cover[face[0]];
  for (size_t t = 1; t < face.size() && cur; ++t)
    cur = sets::intersect(*cur, cover[face[t]]);
  return cur;
}

// Newton-form Horner over the face enumeration.
inline Int newton_eval(const std::vector<Int>& pts, const std::vector<Int>& coeffs,
                       size_t off, const Int& x) {
  Int acc = 0;
  for (size_t j = pts.size(); j-- > 0;) acc = acc * (x - pts[j]) + coeffs[off + j];
  return acc;
}

}  // namespace detail

inline CechComplex build_cech_complex(const std::vector<sets::SetExpression>& cover,
                                      const Int& window, int max_degree) {
  require(!cover.empty(), "cech: empty cover");
  require(max_degree >= 1, "cech: max_degree must be at least 1");
  int n = static_cast<int>(cover.size());
  for (int i = 0; i < n; ++i) {
    require(sets::is_almost_basic(cover[i]),
            "cech: cover pieces must be almost basic");
    require(!sets::enumerate_window(cover[i], window).empty(),
            "cech: degenerate window, piece " + std::to_string(i) +
                " has no points in it");
  }

  CechComplex cx;
  cx.cover = cover;
  cx.window = window;
  cx.max_degree = max_degree;
  cx.faces.resize(max_degree + 1);
  cx.face_sets.resize(max_degree + 1);
  cx.face_points.resize(max_degree + 1);
  cx.offsets.resize(max_degree + 1);

  for (int k = 0; k <= max_degree; ++k) {
    cx.offsets[k].push_back(0);
    if (k >= n) continue;
    std::vector<int> idx(k + 1);
    for (int i = 0; i <= k; ++i) idx[i] = i;
    while (true) {
      auto meet = detail::face_meet(cover, idx);
      if (meet) {
        cx.faces[k].push_back(idx);
        cx.face_sets[k].push_back(*meet);
        cx.face_points[k].push_back(sets::enumerate_window(*meet, window));
        cx.offsets[k].push_back(cx.offsets[k].back() +
                                static_cast<int>(cx.face_points[k].back().size()));
      }
      int t = k;
      while (t >= 0 && idx[t] == n - (k + 1) + t) --t;
      if (t < 0) break;
      ++idx[t];
      for (int s = t + 1; s <= k; ++s) idx[s] = idx[s - 1] + 1;
    }
  }

  for (int k = 0; k < max_degree; ++k) {
    IntMat d(cx.rank(k + 1), cx.rank(k));
    for (size_t gi = 0; gi < cx.faces[k + 1].size(); ++gi) {
      const auto& g = cx.faces[k + 1][gi];
      int row0 = cx.offsets[k + 1][gi];
      for (int t = 0; t <= k + 1; ++t) {
        std::vector<int> f = g;
        f.erase(f.begin() + t);
        int fi = cx.face_at(k, f);
        internal_check(fi >= 0, "cech: face lost a subface");
        IntMat r = detail::restriction_matrix(cx.face_points[k][fi],
                                              cx.face_points[k + 1][gi]);
        int col0 = cx.offsets[k][fi];
        for (int i = 0; i < r.rows; ++i)
          for (int j = 0; j < r.cols; ++j)
            if (t % 2 == 0)
              d.at(row0 + i, col0 + j) += r.at(i, j);
            else
              d.at(row0 + i, col0 + j) -= r.at(i, j);
      }
    }
    cx.delta.push_back(std::move(d));
  }

  for (int k = 0; k + 1 < max_degree; ++k) {
    IntMat dd = mul(cx.delta[k + 1], cx.delta[k]);
    for (const Int& v : dd.a)
      internal_check(v == 0, "cech: coboundary squared is nonzero");
  }
  return cx;
}

// Cochain as a sparse table of window functions; a missing component is zero.
struct CechCochain {
  int degree = 0;
  std::map<std::vector<int>, lip::WindowFunction> components;
};

inline std::vector<Int> cochain_coords(const CechComplex& cx, const CechCochain& c) {
  require(c.degree >= 0 && c.degree <= cx.max_degree,
          "cech: cochain degree outside the built range");
  std::vector<Int> out(cx.rank(c.degree), Int(0));
  for (const auto& [face, fn] : c.components) {
    int fi = cx.face_at(c.degree, face);
    require(fi >= 0, "cech: cochain component on an unknown face");
    const auto& pts = cx.face_points[c.degree][fi];
    if (pts.empty()) continue;
    lip::PointList vals;
    for (const Int& x : pts) vals.emplace_back(x, fn.at(x));
    auto coeffs = lip::newton_coeffs(vals);
    for (size_t j = 0; j < coeffs.size(); ++j) {
      require(is_integer(coeffs[j]),
              "cech: cochain data has a non-integral Newton coefficient");
      out[cx.offsets[c.degree][fi] + j] = coeffs[j].get_num();
    }
  }
  return out;
}

inline CechCochain coords_to_cochain(const CechComplex& cx, int degree,
                                     const std::vector<Int>& v) {
  internal_check(degree >= 0 && degree <= cx.max_degree &&
                     static_cast<int>(v.size()) == cx.rank(degree),
                 "cech: coordinate vector has the wrong length");
  CechCochain out;
  out.degree = degree;
  for (size_t fi = 0; fi < cx.faces[degree].size(); ++fi) {
    const auto& pts = cx.face_points[degree][fi];
    std::map<Int, Int> vals;
    for (const Int& x : pts)
      vals[x] = detail::newton_eval(pts, v, cx.offsets[degree][fi], x);
    out.components.emplace(cx.faces[degree][fi],
                           lip::WindowFunction(cx.face_sets[degree][fi],
                                               cx.window, std::move(vals)));
  }
  return out;
}

// Value-level coboundary, computed from the component tables directly.
inline CechCochain apply_delta(const CechComplex& cx, const CechCochain& c) {
  require(c.degree >= 0 && c.degree < cx.max_degree,
          "cech: no room above the cochain degree");
  int k = c.degree;
  CechCochain out;
  out.degree = k + 1;
  for (size_t gi = 0; gi < cx.faces[k + 1].size(); ++gi) {
    const auto& g = cx.faces[k + 1][gi];
    std::map<Int, Int> vals;
    for (const Int& x : cx.face_points[k + 1][gi]) {
      Int acc = 0;
      for (int t = 0; t <= k + 1; ++t) {
        std::vector<int> f = g;
        f.erase(f.begin() + t);
        auto it = c.components.find(f);
        if (it == c.components.end()) continue;
        if (t % 2 == 0)
          acc += it->second.at(x);
        else
          acc -= it->second.at(x);
      }
      vals[x] = acc;
    }
    out.components.emplace(g, lip::WindowFunction(cx.face_sets[k + 1][gi],
                                                  cx.window, std::move(vals)));
  }
  return out;
}

struct CohomologyReport {
  int degree = 0;
  int rank = 0;            // free rank of the window group
  std::vector<Int> torsion;  // invariant factors above 1
};

inline CohomologyReport cohomology_window(const CechComplex& cx, int k) {
  require(k >= 0 && k < cx.max_degree,
          "cohomology_window: degree has no outgoing coboundary");
  CohomologyReport rep;
  rep.degree = k;
  int r_up = smith_normal_form(cx.delta[k]).rank;
  int r_down = 0;
  if (k > 0) {
    auto s = smith_normal_form(cx.delta[k - 1]);
    r_down = s.rank;
    for (const Int& d : s.diag)
      if (d > 1) rep.torsion.push_back(d);
  }
  rep.rank = cx.rank(k) - r_up - r_down;
  internal_check(rep.rank >= 0, "cohomology_window: negative rank");
  return rep;
}

// Linear functional with values mod a modulus, given by signed point
// evaluations on pairwise intersections. A valid functional kills every
// coboundary coming from locally integral 0-cochains, so a nonzero value is
// an exact obstruction, independent of the window.
struct ObstructionFunctional {
  std::string name;
  std::vector<sets::SetExpression> cover;
  std::vector<std::pair<Int, int>> terms;  // point, sign
  Int modulus = 2;
};

inline bool functional_matches(const ObstructionFunctional& fn,
                               const std::vector<sets::SetExpression>& cover) {
  if (fn.cover.size() != cover.size()) return false;
  for (size_t i = 0; i < cover.size(); ++i)
    if (!sets::set_equal(fn.cover[i], cover[i])) return false;
  return true;
}

namespace detail {

inline std::vector<int> functional_faces(const CechComplex& cx,
                                         const ObstructionFunctional& fn) {
  require(cx.max_degree >= 1, "obstruction: complex has no 1-cochains");
  require(fn.modulus >= 2, "obstruction: modulus must be at least 2");
  std::vector<int> out;
  for (const auto& [x, s] : fn.terms) {
    require(s == 1 || s == -1, "obstruction: signs must be +1 or -1");
    require(x >= 1 && x <= cx.window, "obstruction: point outside the window");
    int hit = -1;
    for (size_t fi = 0; fi < cx.faces[1].size(); ++fi) {
      const auto& pts = cx.face_points[1][fi];
      if (std::binary_search(pts.begin(), pts.end(), x)) {
        require(hit < 0,
                "obstruction: point lies on more than one pair intersection");
        hit = static_cast<int>(fi);
      }
    }
    require(hit >= 0, "obstruction: point lies on no pair intersection");
    out.push_back(hit);
  }
  return out;
}

}  // namespace detail

// Grouping the terms by cover piece turns validity into finitely many
// congruences: an integer polynomial only needs checking on the monomials
// x^j for j up to (largest prime exponent of m) + carmichael(m), because
// x^(j+carmichael(m)) repeats x^j mod m from that point on.
inline void validate_functional(const CechComplex& cx,
                                const ObstructionFunctional& fn) {
  require(functional_matches(fn, cx.cover),
          "obstruction: functional was declared for a different cover");
  auto faces = detail::functional_faces(cx, fn);
  require(fn.modulus <= 1000000, "obstruction: modulus too large to validate");
  long top = carmichael(fn.modulus).get_si();
  long mu = 0;
  for (const auto& pp : trial_factor(fn.modulus)) mu = std::max(mu, static_cast<long>(pp.e));
  top += mu;
  for (int piece = 0; piece < static_cast<int>(cx.cover.size()); ++piece)
    for (long j = 0; j <= top; ++j) {
      Int acc = 0;
      for (size_t t = 0; t < fn.terms.size(); ++t) {
        const auto& face = cx.faces[1][faces[t]];
        if (face[0] != piece && face[1] != piece) continue;
        Int xj = pow_int(fn.terms[t].first, static_cast<unsigned long>(j));
        if (face[1] == piece) acc += fn.terms[t].second * xj;
        if (face[0] == piece) acc -= fn.terms[t].second * xj;
      }
      require(mod_floor(acc, fn.modulus) == 0,
              "obstruction: functional does not kill coboundaries on piece " +
                  std::to_string(piece));
    }
}

inline Int evaluate_functional(const CechComplex& cx,
                               const ObstructionFunctional& fn,
                               const CechCochain& z) {
  require(z.degree == 1, "obstruction: functionals act on 1-cochains");
  auto faces = detail::functional_faces(cx, fn);
  Int acc = 0;
  for (size_t t = 0; t < fn.terms.size(); ++t) {
    auto it = z.components.find(cx.faces[1][faces[t]]);
    if (it == z.components.end()) continue;
    acc += fn.terms[t].second * it->second.at(fn.terms[t].first);
  }
  return mod_floor(acc, fn.modulus);
}

inline Int parity_obstruction(const lip::WindowFunction& f) {
  return f.at(1) - f.at(7) - f.at(11) + f.at(17);
}

struct CoboundaryReport {
  bool is_coboundary = false;
  std::optional<CechCochain> witness;
  std::string certificate;  // "exact" or "window_relative" when negative
  std::string detail;
};

inline CoboundaryReport is_coboundary(
    const CechComplex& cx, const CechCochain& z,
    const std::vector<ObstructionFunctional>& catalog = {}) {
  require(z.degree >= 1, "is_coboundary: degree must be at least 1");
  require(z.degree < cx.max_degree,
          "is_coboundary: need one degree above to test closedness");
  auto zc = cochain_coords(cx, z);
  for (const Int& v : detail::matvec(cx.delta[z.degree], zc))
    require(v == 0, "is_coboundary: cochain is not closed");

  const IntMat& down = cx.delta[z.degree - 1];
  auto snf = smith_normal_form(down);
  auto w = detail::matvec(snf.U, zc);
  bool solvable = true;
  std::string why;
  std::vector<Int> y(down.cols, Int(0));
  for (int i = 0; i < static_cast<int>(w.size()); ++i) {
    if (i < snf.rank) {
      const Int& d = snf.D.at(i, i);
      if (mod_floor(w[i], d) != 0) {
        solvable = false;
        why = "invariant factor " + d.get_str() + " does not divide " +
              w[i].get_str();
        break;
      }
      y[i] = w[i] / d;
    } else if (w[i] != 0) {
      solvable = false;
      why = "component outside the image lattice";
      break;
    }
  }

  CoboundaryReport rep;
  if (solvable) {
    auto x = detail::matvec(snf.V, y);
    rep.is_coboundary = true;
    rep.witness = coords_to_cochain(cx, z.degree - 1, x);
    CechCochain back = apply_delta(cx, *rep.witness);
    for (size_t fi = 0; fi < cx.faces[z.degree].size(); ++fi) {
      const auto& face = cx.faces[z.degree][fi];
      auto zit = z.components.find(face);
      for (const Int& p : cx.face_points[z.degree][fi]) {
        Int want = zit == z.components.end() ? Int(0) : zit->second.at(p);
        internal_check(back.components.at(face).at(p) == want,
                       "is_coboundary: witness fails the direct check");
      }
    }
    return rep;
  }

  if (z.degree == 1)
    for (const auto& fn : catalog) {
      if (!functional_matches(fn, cx.cover)) continue;
      validate_functional(cx, fn);
      Int v = evaluate_functional(cx, fn, z);
      if (v != 0) {
        rep.certificate = "exact";
        rep.detail = fn.name + " = " + v.get_str() + " mod " +
                     fn.modulus.get_str();
        return rep;
      }
    }
  rep.certificate = "window_relative";
  rep.detail = why;
  return rep;
}

// Locally integral section: window functions whose pairwise differences on
// overlaps carry no circuit.
struct ZLSection {
  std::vector<lip::WindowFunction> pieces;

  static ZLSection checked(std::vector<lip::WindowFunction> pieces) {
    for (size_t i = 0; i < pieces.size(); ++i)
      for (size_t j = i + 1; j < pieces.size(); ++j) {
        auto v = sets::intersect(pieces[i].domain, pieces[j].domain);
        if (!v) continue;
        Int n = std::min(pieces[i].window, pieces[j].window);
        std::map<Int, Int> d;
        for (const Int& x : sets::enumerate_window(*v, n))
          d[x] = pieces[i].at(x) - pieces[j].at(x);
        lip::WindowFunction diff(*v, n, std::move(d));
        require(!lip::find_circuit(diff),
                "section: an overlap difference has a circuit");
      }
    ZLSection s;
    s.pieces = std::move(pieces);
    return s;
  }
};

struct ZLGlueResult {
  lip::WindowFunction glued;  // on the union, window = min input window
  lip::WindowFunction adj_u, adj_w;
  bool used_split = false;
};

// Glues two pieces by splitting their overlap difference into a part that
// extends over the first domain and one over the second, then shifting each
// piece by its part. The split window covers the overlap window because the
// stage count is raised until the schedule passes the overlap size.
inline ZLGlueResult zl_glue(const lip::WindowFunction& fu,
                            const lip::WindowFunction& fw) {
  Int n = std::min(fu.window, fw.window);
  auto meet = sets::intersect(fu.domain, fw.domain);
  sets::SetExpression both =
      sets::SetExpression::union_of({fu.domain, fw.domain});

  auto clip = [&](const lip::WindowFunction& f) {
    std::map<Int, Int> vals;
    for (const Int& x : sets::enumerate_window(f.domain, n)) vals[x] = f.at(x);
    return lip::WindowFunction(f.domain, n, std::move(vals));
  };

  auto fuse = [&](const lip::WindowFunction& a, const lip::WindowFunction& b) {
    std::map<Int, Int> vals;
    for (const Int& x : sets::enumerate_window(both, n))
      vals[x] = a.has(x) ? a.at(x) : b.at(x);
    return lip::WindowFunction(both, n, std::move(vals));
  };

  if (!meet) {
    ZLGlueResult out{fuse(clip(fu), clip(fw)), clip(fu), clip(fw), false};
    return out;
  }

  std::vector<Int> vpts = sets::enumerate_window(*meet, n);
  std::vector<Int> dvals;
  bool all_zero = true;
  for (const Int& x : vpts) {
    dvals.push_back(fu.at(x) - fw.at(x));
    if (dvals.back() != 0) all_zero = false;
  }
  if (!vpts.empty()) {
    std::map<Int, Int> dm;
    for (size_t i = 0; i < vpts.size(); ++i) dm[vpts[i]] = dvals[i];
    lip::WindowFunction diff(*meet, n, std::move(dm));
    require(!lip::find_circuit(diff),
            "zl_glue: overlap difference has a circuit");
  }
  if (vpts.empty() || all_zero)
    return {fuse(clip(fu), clip(fw)), clip(fu), clip(fw), false};

  int want = static_cast<int>(vpts.size());
  int stages = 0;
  std::vector<int> sched;
  do {
    ++stages;
    if (stages > splitter::kMaxStages)
      throw ResourceError("zl_glue: overlap needs more stages than the cap");
    sched = splitter::split_schedule(fu.domain, fw.domain, *meet, stages);
  } while (sched.back() < want);

  auto f = lip::product_sum_encode(vpts, dvals);
  auto split = splitter::split_stream(fu.domain, fw.domain, *meet, f, stages);
  internal_check(split.certificate.window >= n, "zl_glue: split window too small");

  std::map<Int, Int> au, aw;
  for (const Int& x : sets::enumerate_window(fu.domain, n))
    au[x] = fu.at(x) - split.g.at(x);
  for (const Int& x : sets::enumerate_window(fw.domain, n))
    aw[x] = fw.at(x) - split.h.at(x);
  lip::WindowFunction adj_u(fu.domain, n, std::move(au));
  lip::WindowFunction adj_w(fw.domain, n, std::move(aw));
  for (const Int& x : vpts)
    internal_check(adj_u.at(x) == adj_w.at(x),
                   "zl_glue: adjusted pieces disagree on the overlap");
  return {fuse(adj_u, adj_w), std::move(adj_u), std::move(adj_w), true};
}

// Refinement of a basic progression: piece i sits inside the base, contains
// the i-th element and, because its difference is at least that element,
// no earlier one.
inline std::vector<sets::SetExpression> make_refined_cover(
    const sets::SetExpression& u, int count) {
  require(u.kind == sets::SetExpression::Kind::progression && u.prog.is_basic(),
          "refined cover: base must be a basic progression");
  require(count >= 1, "refined cover: need at least one piece");
  std::vector<sets::SetExpression> out;
  for (const Int& x : sets::first_elements(u, count)) {
    Int d = u.prog.d;
    while (d < x || !is_squarefree(d) || gcd(d, x) != 1) d += u.prog.d;
    out.push_back(sets::SetExpression::progression(x, d));
  }
  return out;
}

struct NestStep {
  std::vector<int> straw, core;  // indices into the refined cover
  kirch::NestReport report;      // indices relative to straw + core order
};

namespace detail {

inline std::set<Int> primes_outside(const Int& n, const Int& avoid) {
  std::set<Int> out;
  for (const auto& pp : trial_factor(n))
    if (mod_floor(avoid, pp.p) != 0) out.insert(pp.p);
  return out;
}

}  // namespace detail

// Grows a chain of nests inside a refined cover. Each step adds one fresh
// piece to the straw and picks a two-piece core whose base points soak up
// every prime the straw differences use beyond the base difference; basic
// pieces keep those primes out of the core differences, which is what the
// nest conditions need.
inline std::vector<NestStep> build_nest_chain(
    const sets::SetExpression& u, const std::vector<sets::SetExpression>& cover,
    int steps) {
  require(sets::is_almost_basic(u), "nest chain: base must be almost basic");
  require(steps >= 0, "nest chain: negative step count");
  require(!cover.empty(), "nest chain: empty cover");
  int n = static_cast<int>(cover.size());
  std::vector<Int> upts = sets::first_elements(u, n);
  for (int i = 0; i < n; ++i) {
    require(sets::is_almost_basic(cover[i]),
            "nest chain: pieces must be almost basic");
    require(sets::almost_subset(cover[i], u),
            "nest chain: piece escapes the base set");
    require(sets::contains(cover[i], upts[i]),
            "nest chain: piece misses its own base point");
    for (int j = 0; j < i; ++j)
      require(!sets::contains(cover[i], upts[j]),
              "nest chain: piece captures an earlier base point");
  }
  const Int du = u.prog.d;

  std::vector<NestStep> out;
  if (steps == 0) return out;

  auto validated = [&](std::vector<int> straw, std::vector<int> core) {
    std::vector<sets::SetExpression> local;
    kirch::NestSpec spec;
    for (int i : straw) {
      spec.straw.push_back(static_cast<int>(local.size()));
      local.push_back(cover[i]);
    }
    for (int i : core) {
      spec.core.push_back(static_cast<int>(local.size()));
      local.push_back(cover[i]);
    }
    auto cls = kirch::classify_cover(local, spec);
    internal_check(cls.nest && cls.nest->is_nest,
                   "nest chain: constructed collection is not a nest");
    NestStep st;
    st.straw = std::move(straw);
    st.core = std::move(core);
    st.report = *cls.nest;
    return st;
  };

  auto find_multiple = [&](const std::set<Int>& primes,
                           const std::set<int>& taken) {
    Int m = 1;
    for (const Int& p : primes) m *= p;
    for (int i = 0; i < n; ++i)
      if (mod_floor(upts[i], m) == 0 && !taken.count(i)) return i;
    throw ResourceError(
        "nest chain: divisibility search exceeds the cover enumeration");
  };

  std::set<int> used = {0};
  out.push_back(validated({}, {0}));
  for (int t = 2; t <= steps; ++t) {
    int fresh = -1;
    for (int i = 0; i < n; ++i)
      if (!used.count(i)) {
        fresh = i;
        break;
      }
    if (fresh < 0)
      throw ResourceError(
          "nest chain: divisibility search exceeds the cover enumeration");
    used.insert(fresh);
    std::vector<int> straw(used.begin(), used.end());

    std::set<Int> p1;
    for (int i : straw)
      for (const Int& p : detail::primes_outside(cover[i].prog.d, du))
        p1.insert(p);
    int v1 = find_multiple(p1, used);
    used.insert(v1);

    std::set<Int> p2 = detail::primes_outside(upts[v1], du);
    for (const Int& p : detail::primes_outside(cover[v1].prog.d, du))
      p2.insert(p);
    int v2 = find_multiple(p2, used);
    used.insert(v2);

    out.push_back(validated(std::move(straw), {v1, v2}));
  }
  return out;
}

}  // namespace kirchlip::cech

#endif
