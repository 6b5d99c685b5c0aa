// Acceptance gate: eight end-to-end checks, one pass/fail line each.
// Every comparison is exact; the only tolerances are the wall-clock limits
// pinned next to each check.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kirchlip/kirchlip.hpp"
#include "oracle.hpp"

using namespace kirchlip;
using sets::SetExpression;
using lip::PointList;
using lip::WindowFunction;

namespace {

std::vector<SetExpression> residue_cover_15() {
  return {SetExpression::progression(1, 3), SetExpression::progression(2, 3),
          SetExpression::progression(1, 5), SetExpression::progression(2, 5),
          SetExpression::progression(3, 5), SetExpression::progression(4, 5)};
}

cech::ObstructionFunctional parity_functional() {
  cech::ObstructionFunctional fn;
  fn.name = "parity";
  fn.cover = residue_cover_15();
  fn.terms = {{Int(1), 1}, {Int(7), -1}, {Int(11), -1}, {Int(17), 1}};
  fn.modulus = 2;
  return fn;
}

cech::CechCochain random_zero_cochain(const cech::CechComplex& cx,
                                      std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-9, 9);
  cech::CechCochain g;
  g.degree = 0;
  for (size_t fi = 0; fi < cx.faces[0].size(); ++fi) {
    const auto& pts = cx.face_points[0][fi];
    std::vector<Int> coords(pts.size(), Int(0));
    for (size_t j = 0; j < std::min<size_t>(5, coords.size()); ++j)
      coords[j] = coef(rng);
    std::map<Int, Int> vals;
    for (const Int& x : pts)
      vals[x] = cech::detail::newton_eval(pts, coords, 0, x);
    g.components.emplace(cx.faces[0][fi],
                         WindowFunction(cx.face_sets[0][fi], cx.window,
                                        std::move(vals)));
  }
  return g;
}

cech::CechCochain indicator_cocycle(const cech::CechComplex& cx) {
  cech::CechCochain z;
  z.degree = 1;
  for (size_t fi = 0; fi < cx.faces[1].size(); ++fi) {
    std::map<Int, Int> vals;
    for (const Int& x : cx.face_points[1][fi])
      vals[x] = mod_floor(x, 15) == 1 ? 1 : 0;
    z.components.emplace(cx.faces[1][fi],
                         WindowFunction(cx.face_sets[1][fi], cx.window,
                                        std::move(vals)));
  }
  return z;
}

bool newton_integral(const PointList& pv) {
  for (const Rat& a : lip::newton_coeffs(pv))
    if (!is_integer(a)) return false;
  return true;
}

std::string check_interpolation() {
  PointList pts{{Int(1), Int(0)}, {Int(2), Int(1)}, {Int(4), Int(0)}};
  RatPoly p = lip::interp_poly(pts);
  std::vector<Rat> want{Rat(-2), make_rat(5, 2), make_rat(-1, 2)};
  if (p.c != want) return "interpolation coefficients are off";
  if (lip::top_divided_difference(pts) != make_rat(-1, 2))
    return "leading divided difference is not -1/2";
  return "";
}

std::string check_parity_obstruction() {
  auto cover = residue_cover_15();
  auto cx = cech::build_cech_complex(cover, Int(30), 2);

  auto uni = SetExpression::union_of(cover);
  std::map<Int, Int> vals;
  for (const Int& x : sets::enumerate_window(uni, Int(30)))
    vals[x] = mod_floor(x, 15) == 1 ? 1 : 0;
  WindowFunction ind(uni, Int(30), std::move(vals));
  if (cech::parity_obstruction(ind) != 1)
    return "indicator functional value is not 1";

  auto fn = parity_functional();
  std::mt19937_64 rng(11);
  for (int t = 0; t < 500; ++t) {
    auto z = cech::apply_delta(cx, random_zero_cochain(cx, rng));
    if (cech::evaluate_functional(cx, fn, z) != 0)
      return "a random coboundary has odd functional value";
  }

  auto rep = cech::is_coboundary(cx, indicator_cocycle(cx), {fn});
  if (rep.is_coboundary) return "the indicator cocycle solved as a coboundary";
  if (rep.certificate != "exact")
    return "negative certificate is only window-relative";
  return "";
}

std::string check_counterexample() {
  auto run = cexgen::generate_counterexample(40, Int(40));
  if (run.q.at(2) != 1 || run.q.at(4) != 0) return "anchor values moved";
  for (const auto& st : run.trace)
    if (!cexgen::invariant_holds(st))
      return "a trace state breaks the two-power identity";

  auto cert = cexgen::certify_counterexample(run.q);
  if (!cert.circuit) return "no circuit on the assembled function";
  if (cert.circuit->points != std::vector<Int>{Int(2), Int(4)})
    return "circuit is not {2, 4}";
  if (cert.circuit->leading != make_rat(-1, 2))
    return "circuit coefficient is not -1/2";
  if (cert.pieces.size() != 3) return "cover does not have three pieces";
  for (const auto& [piece, ok] : cert.pieces)
    if (!ok) return "a cover piece is not locally integral";
  return "";
}

std::string check_splitter() {
  auto u = SetExpression::progression(1, 2);
  auto w = SetExpression::progression(1, 3);
  auto v = SetExpression::progression(1, 6);
  auto plan = splitter::make_split_plan(u, w, v, 8);
  std::vector<Int> u_pts = sets::first_elements(u, 8);
  std::vector<Int> w_pts = sets::first_elements(w, 8);

  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coef(-9, 9);
  for (int trial = 0; trial < 50; ++trial) {
    lip::ProductSum f;
    f.enumeration = sets::first_elements(v, 8);
    for (int i = 0; i < 8; ++i) f.coeffs.emplace_back(coef(rng));

    splitter::SplitterState st(plan, f);
    std::vector<std::vector<Int>> gsnap, hsnap;
    for (int n = 1; n <= 8; ++n) {
      st.step();
      std::vector<Int> gs, hs;
      for (int i = 0; i < n; ++i) {
        gs.push_back(st.g_at(u_pts[i]));
        hs.push_back(st.h_at(w_pts[i]));
      }
      gsnap.push_back(std::move(gs));
      hsnap.push_back(std::move(hs));
    }

    auto r = st.result();
    if (!r.certificate.difference_ok) return "certificate rejects f = g - h";
    if (!r.certificate.g_lip || !r.certificate.h_lip)
      return "a split output carries a circuit";
    for (const Int& x : sets::enumerate_window(v, r.certificate.window))
      if (lip::product_sum_eval(f, x) != Rat(r.g.at(x) - r.h.at(x)))
        return "f differs from g - h on the window";
    for (int n = 1; n <= 8; ++n)
      for (int i = 0; i < n; ++i)
        if (gsnap[n - 1][i] != r.g.at(u_pts[i]) ||
            hsnap[n - 1][i] != r.h.at(w_pts[i]))
          return "a frozen prefix moved under stage extension";
  }
  return "";
}

std::string check_star_cohomology() {
  std::mt19937_64 rng(23);
  std::vector<Int> ds = {2, 3, 5, 7, 6, 10, 14, 15, 21, 35};
  std::uniform_int_distribution<int> npick(3, 4);
  std::uniform_int_distribution<size_t> dpick(0, ds.size() - 1);
  int built = 0;
  while (built < 10) {
    int np = npick(rng);
    std::vector<SetExpression> pieces;
    for (int i = 0; i < np; ++i) {
      Int d = ds[dpick(rng)];
      Int hi = d < 24 ? d : Int(24);
      std::uniform_int_distribution<long> apick(1, hi.get_si());
      Int a = apick(rng);
      while (gcd(a, d) != 1) a = apick(rng);
      pieces.push_back(SetExpression::progression(a, d));
    }
    if (!kirch::classify_cover(pieces).star_like) continue;
    ++built;
    auto cx = cech::build_cech_complex(pieces, Int(24), 3);
    auto h1 = cech::cohomology_window(cx, 1);
    auto h2 = cech::cohomology_window(cx, 2);
    if (h1.rank != 0 || !h1.torsion.empty())
      return "a star cover has nontrivial degree-one cohomology";
    if (h2.rank != 0 || !h2.torsion.empty())
      return "a star cover has nontrivial degree-two cohomology";
  }

  // small complexes where the minor and elimination oracles are affordable
  std::uniform_int_distribution<long> spick(0, 2);
  std::uniform_int_distribution<long> wpick(5, 8);
  const long small_ds[3] = {2, 3, 5};
  int checked = 0;
  while (checked < 6) {
    Int d1(small_ds[spick(rng)]), d2(small_ds[spick(rng)]);
    std::uniform_int_distribution<long> a1p(1, d1.get_si());
    std::uniform_int_distribution<long> a2p(1, d2.get_si());
    Int a1(a1p(rng)), a2(a2p(rng));
    if (gcd(a1, d1) != 1 || gcd(a2, d2) != 1) continue;
    auto cx = cech::build_cech_complex({SetExpression::progression(a1, d1),
                                        SetExpression::progression(a2, d2)},
                                       Int(wpick(rng)), 2);
    if (cx.rank(0) + cx.rank(1) + cx.rank(2) > 8 || cx.rank(1) == 0) continue;
    ++checked;
    for (int k = 0; k < cx.max_degree; ++k) {
      const IntMat& m = cx.delta[k];
      if (m.rows == 0 || m.cols == 0) continue;
      auto snf = smith_normal_form(m);
      if (snf.rank != oracle::rat_rank(m))
        return "smith rank differs from rational elimination";
      std::vector<Int> diag;
      for (int i = 0; i < snf.rank; ++i) diag.push_back(snf.D.at(i, i));
      if (diag != oracle::minor_invariants(m))
        return "invariant factors differ from the minor oracle";
      if (!(mul(snf.U, mul(m, snf.V)) == snf.D))
        return "smith transform identity fails";
    }
  }
  return "";
}

std::string check_circuit_equivalence() {
  std::mt19937_64 rng(29);
  std::uniform_int_distribution<int> npts(2, 10), xpick(1, 40), val(-9, 9),
      mode(0, 2), pc(-3, 3);
  for (int t = 0; t < 200; ++t) {
    int n = npts(rng);
    std::set<Int> xs;
    while (static_cast<int>(xs.size()) < n) xs.insert(Int(xpick(rng)));
    std::vector<Int> pcs(5);
    for (Int& c : pcs) c = pc(rng);
    IntPoly p{std::vector<Int>(pcs)};
    int m = mode(rng);
    PointList pv;
    for (const Int& x : xs) {
      Int y = m == 0 ? Int(val(rng)) : p.eval(x);
      if (m == 2 && x == *xs.rbegin()) y += 1;
      pv.emplace_back(x, y);
    }
    auto f = WindowFunction::from_table(
        SetExpression::finite(std::vector<Int>(xs.begin(), xs.end())),
        *xs.rbegin(), pv);
    bool no_circuit = !lip::find_circuit(f).has_value();
    bool subsets = oracle::all_subsets_integral(pv);
    bool poly_integral = true;
    for (const Rat& q : lip::interp_poly(pv).c)
      if (!is_integer(q)) poly_integral = false;
    if (no_circuit != subsets || subsets != poly_integral)
      return "the three integrality tests disagree";
  }
  return "";
}

std::string check_set_algebra() {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> dpick(1, 60);
  const Int bound(10000);
  for (int t = 0; t < 1000; ++t) {
    Int d1(dpick(rng)), d2(dpick(rng));
    std::uniform_int_distribution<long> a1p(1, d1.get_si());
    std::uniform_int_distribution<long> a2p(1, d2.get_si());
    sets::Progression p(Int(a1p(rng)), d1), q(Int(a2p(rng)), d2);

    auto res = sets::intersect_progressions({p, q});
    std::vector<Int> scan;
    for (Int x = p.a; x <= bound; x += p.d)
      if (q.contains(x)) scan.push_back(x);
    std::vector<Int> got;
    if (res)
      for (Int x = res->a; x <= bound; x += res->d) got.push_back(x);
    if (scan != got) return "intersection disagrees with enumeration";
    if (!res && oracle::crt_scan(p.a, p.d, q.a, q.d))
      return "reported empty but a common residue exists";
  }
  return "";
}

std::string check_circuit_improvement() {
  std::mt19937_64 rng(37);
  std::uniform_int_distribution<int> spick(2, 4), dpick(0, 5), apick(1, 12),
      bpick(-5, 5), vpick(-9, 9), epick(2, 4);
  const long dchoices[6] = {2, 3, 4, 5, 6, 10};
  for (int done = 0; done < 100; ++done) {
    int s = spick(rng);
    Int d(dchoices[dpick(rng)]);
    Int p = mod_floor(d, 2) == 0 ? Int(2) : mod_floor(d, 3) == 0 ? Int(3)
                                                                 : Int(5);
    Int a(apick(rng));

    std::vector<Int> xs(s);
    for (int i = 0; i < s; ++i) xs[i] = a + Int(i) * d;
    std::vector<Int> betas(s - 1);
    for (Int& b : betas) b = bpick(rng);
    Int w = p == 2 ? Int(1) : Int(1 + static_cast<long>(rng() % (p.get_si() - 1)));

    // integer Newton head plus a top coefficient w/p; the proper subsets
    // stay integral because p divides every point gap
    PointList circuit_pv;
    for (int i = 0; i < s; ++i) {
      Int acc(0), prod(1);
      for (int k = 0; k < s - 1; ++k) {
        if (k > 0) prod *= xs[i] - xs[k - 1];
        acc += betas[k] * prod;
      }
      if (i == s - 1) {
        Int top(1);
        for (int j = 0; j < s - 1; ++j) top *= xs[s - 1] - xs[j];
        acc += w * top / p;
      }
      circuit_pv.emplace_back(xs[i], acc);
    }

    int extra = epick(rng);
    std::vector<std::pair<Int, Int>> rows(circuit_pv.begin(), circuit_pv.end());
    std::vector<Int> candidates;
    for (int i = 0; i < extra; ++i) {
      Int e = a + Int(s + i) * d;
      rows.emplace_back(e, Int(vpick(rng)));
      candidates.push_back(e);
    }
    if (a - d >= 1) {
      rows.emplace_back(a - d, Int(vpick(rng)));
      candidates.push_back(a - d);
    }
    std::vector<Int> domain;
    for (const auto& r : rows) domain.push_back(r.first);
    std::sort(domain.begin(), domain.end());
    auto f = WindowFunction::from_table(SetExpression::finite(domain),
                                        domain.back(), rows);

    auto X = lip::Circuit::checked(circuit_pv);
    int m = 2 + static_cast<int>(rng() % (s - 1 == 0 ? 1 : s - 1));
    Int e = candidates[rng() % candidates.size()];

    auto imp = lip::circuit_improve(f, X, m, e);
    int least = 0;
    for (int i = 1; i <= m && least == 0; ++i) {
      PointList repl;
      for (int j = 0; j < s; ++j)
        if (j != i - 1) repl.emplace_back(xs[j], f.at(xs[j]));
      repl.emplace_back(e, f.at(e));
      std::sort(repl.begin(), repl.end());
      if (!newton_integral(repl)) least = i;
    }
    if (least == 0) return "brute scan found no non-integral replacement";
    if (least != imp.index) return "improvement index differs from the scan";

    if (is_integer(imp.next.leading) || imp.next.denominator < 2)
      return "replacement circuit has an integral coefficient";
    if (imp.next.denominator != imp.next.leading.get_den())
      return "replacement denominator does not match its coefficient";
    for (const Int& x : imp.next.points)
      if (mod_floor(x - imp.next.points[0], imp.next.denominator) != 0)
        return "replacement circuit not congruent modulo its denominator";
  }
  return "";
}

}  // namespace

int main() {
  struct Check {
    const char* label;
    double limit;
    std::function<std::string()> body;
  };
  const std::vector<Check> checks = {
      {"interpolation golden value", 1.0, check_interpolation},
      {"residue cover parity obstruction", 10.0, check_parity_obstruction},
      {"counterexample pipeline", 60.0, check_counterexample},
      {"splitting suite", 30.0, check_splitter},
      {"window cohomology of star covers", 60.0, check_star_cohomology},
      {"integrality oracle equivalence", 10.0, check_circuit_equivalence},
      {"set algebra against enumeration", 5.0, check_set_algebra},
      {"circuit improvement", 10.0, check_circuit_improvement},
  };

  int failures = 0;
  for (size_t i = 0; i < checks.size(); ++i) {
    std::string problem;
    auto t0 = std::chrono::steady_clock::now();
    try {
      problem = checks[i].body();
    } catch (const std::exception& ex) {
      problem = std::string("exception: ") + ex.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();
    if (problem.empty() && dt > checks[i].limit) problem = "over time limit";
    std::printf("[%zu/%zu] %s  %-36s %7.3fs  (limit %gs)%s%s\n", i + 1,
                checks.size(), problem.empty() ? "PASS" : "FAIL",
                checks[i].label, dt, checks[i].limit,
                problem.empty() ? "" : "  ", problem.c_str());
    if (!problem.empty()) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu acceptance checks failed\n", failures,
                checks.size());
    return 1;
  }
  std::printf("all %zu acceptance checks passed\n", checks.size());
  return 0;
}
