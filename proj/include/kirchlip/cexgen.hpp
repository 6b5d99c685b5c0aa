#ifndef KIRCHLIP_CEXGEN_HPP
#define KIRCHLIP_CEXGEN_HPP

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "kirchlip/circuits.hpp"
#include "kirchlip/poly.hpp"
#include "kirchlip/sets.hpp"
#include "kirchlip/window_fn.hpp"

namespace kirchlip::cexgen {

enum class Move { core, straw_u, straw_w };

// The target set is X = N minus the multiples of 6, cut into the odd part V
// and the even parts U (4 mod 6) and W (2 mod 6). Parity is the load-bearing
// requirement: U- and W-points even and V-points odd keep every evaluation
// of a U- or W-split at a V-point odd, so 2 stays invertible exactly where
// the updates divide by it.
struct PairConfig {
  sets::Progression u{4, 6}, v{1, 2}, w{2, 6};

  static PairConfig checked(sets::Progression u, sets::Progression v,
                            sets::Progression w) {
    require(u.d >= 1 && v.d >= 1 && w.d >= 1,
            "pair config: progressions must be infinite");
    require(mod_floor(u.a, 2) == 0 && mod_floor(u.d, 2) == 0 &&
                mod_floor(w.a, 2) == 0 && mod_floor(w.d, 2) == 0,
            "pair config: U- and W-points must all be even");
    require(mod_floor(v.a, 2) == 1 && mod_floor(v.d, 2) == 0,
            "pair config: V-points must all be odd");
    PairConfig cfg;
    cfg.u = std::move(u);
    cfg.v = std::move(v);
    cfg.w = std::move(w);
    return cfg;
  }
};

// f - g = p [V_m] with 2^k p = mu [U_i] - tau [W_j], as an exact polynomial
// identity. f carries the U-side of the glued function, g the W-side.
struct PairState {
  PairConfig cfg;
  int i = 1, j = 1, m = 1, k = 1;
  IntPoly f, g, mu, tau;
};

namespace detail {

inline Int least_abs_mod(const Int& x, const Int& m) {
  Int mm = m < 0 ? Int(-m) : m;
  internal_check(mm >= 1, "least_abs_mod: zero modulus");
  Int r = mod_floor(x, mm);
  if (2 * r >= mm) r -= mm;
  return r;
}

inline IntPoly split_poly(const sets::Progression& p, int n) {
  std::vector<Int> roots;
  for (int t = 1; t <= n; ++t) roots.push_back(p.element(t));
  return IntPoly::from_roots(roots);
}

}  // namespace detail

inline bool invariant_holds(const PairState& st) {
  IntPoly lhs = (st.f - st.g) * IntPoly(pow_int(2, st.k));
  IntPoly rhs = (st.mu * detail::split_poly(st.cfg.u, st.i) -
                 st.tau * detail::split_poly(st.cfg.w, st.j)) *
                detail::split_poly(st.cfg.v, st.m);
  return lhs == rhs;
}

// Seed pair: f = 0 and g = x - v_1 disagree by -[V_1], and
// 2 (f - g) = (1 [U_1] - 1 [W_1]) [V_1] exactly when u_1 - w_1 = 2.
inline PairState initial_pair(PairConfig cfg = PairConfig()) {
  require(cfg.u.element(1) - cfg.w.element(1) == 2,
          "initial pair: seed needs u_1 = w_1 + 2");
  PairState st;
  st.cfg = std::move(cfg);
  st.f = IntPoly{};
  st.g = IntPoly::from_roots({st.cfg.v.element(1)});
  st.mu = IntPoly(Int(1));
  st.tau = IntPoly(Int(1));
  internal_check(invariant_holds(st), "initial pair: seed identity failed");
  return st;
}

// One growth step. core consumes the next V-point and keeps k; straw moves
// consume the next U- or W-point and raise k by the 2-order of the resultant
// of the extended split against the opposite one.
inline PairState extend_pair(const PairState& st, Move mode) {
  internal_check(invariant_holds(st), "extend_pair: invariant broken on entry");
  PairState out = st;
  Int twok = pow_int(2, static_cast<unsigned long>(st.k));
  IntPoly ui = detail::split_poly(st.cfg.u, st.i);
  IntPoly wj = detail::split_poly(st.cfg.w, st.j);
  IntPoly vm = detail::split_poly(st.cfg.v, st.m);

  if (mode == Move::core) {
    Int c = st.cfg.v.element(st.m + 1);
    Int uc = ui.eval(c), wc = wj.eval(c);
    internal_check(mod_floor(uc, 2) == 1 && mod_floor(wc, 2) == 1,
                   "extend_pair: split values at a V-point must be odd");
    IntPoly p = st.f - st.g;
    for (int t = 1; t <= st.m; ++t) p = p.div_linear(st.cfg.v.element(t));
    Int pc = p.eval(c);
    auto eg = ext_gcd(uc, wc);
    const Int& d = eg.g;
    internal_check(mod_floor(pc, d) == 0, "extend_pair: gcd misses the value");
    Int a = -eg.s * (pc / d);
    Int b = eg.t * (pc / d);

    Int muc = st.mu.eval(c);
    Int ep_num = (muc + twok * a) * d;
    internal_check(ep_num % wc == 0, "extend_pair: proportionality failed");
    Int ep = ep_num / wc;
    Int e = d == 1 ? Int(0)
                   : detail::least_abs_mod(-ep * inv_mod(twok, d), d);
    a += e * (wc / d);
    b += e * (uc / d);
    Int a_red = detail::least_abs_mod(a, wc);
    b += ((a_red - a) / wc) * uc;
    a = a_red;

    Int lam_num = muc + twok * a;
    internal_check(lam_num % wc == 0, "extend_pair: lambda is not integral");
    Int lam = lam_num / wc;
    internal_check(st.tau.eval(c) + twok * b == lam * uc,
                   "extend_pair: cofactor values out of proportion");

    IntPoly a_mu = (st.mu - IntPoly(muc)).div_linear(c);
    IntPoly a_tau = (st.tau - IntPoly(st.tau.eval(c))).div_linear(c);
    IntPoly e_u = (ui - IntPoly(uc)).div_linear(c);
    IntPoly e_w = (wj - IntPoly(wc)).div_linear(c);
    out.mu = a_mu - IntPoly(lam) * e_w;
    out.tau = a_tau - IntPoly(lam) * e_u;
    out.f = st.f + IntPoly(a) * ui * vm;
    out.g = st.g + IntPoly(b) * vm * wj;
    out.m = st.m + 1;
  } else if (mode == Move::straw_u) {
    Int c = st.cfg.u.element(st.i + 1);
    IntPoly u_next = ui * IntPoly::from_roots({c});
    auto rb = resultant_bezout(u_next, wj);
    internal_check(rb.r != 0, "extend_pair: straw resultant vanished");
    int sigma = ord_at(rb.r, 2);
    Int twos = pow_int(2, static_cast<unsigned long>(sigma));
    Int dp = rb.r / twos;
    Int ad = dp < 0 ? Int(-dp) : dp;
    Int muc = st.mu.eval(c);
    Int a = ad == 1 ? Int(0)
                    : detail::least_abs_mod(-muc * inv_mod(twok, ad), ad);
    Int lam_num = muc + twok * a;
    internal_check(lam_num % dp == 0, "extend_pair: lambda is not integral");
    Int lam = lam_num / dp;
    IntPoly am = (st.mu + IntPoly(twok * a) - IntPoly(lam_num)).div_linear(c);
    out.mu = IntPoly(twos) * am + IntPoly(lam) * (ui * rb.a);
    out.tau = IntPoly(twos) * st.tau - IntPoly(lam) * (ui * rb.b);
    out.f = st.f + IntPoly(a) * ui * vm;
    out.i = st.i + 1;
    out.k = st.k + sigma;
  } else {
    Int c = st.cfg.w.element(st.j + 1);
    IntPoly w_next = wj * IntPoly::from_roots({c});
    auto rb = resultant_bezout(w_next, ui);
    internal_check(rb.r != 0, "extend_pair: straw resultant vanished");
    int sigma = ord_at(rb.r, 2);
    Int twos = pow_int(2, static_cast<unsigned long>(sigma));
    Int dp = rb.r / twos;
    Int ad = dp < 0 ? Int(-dp) : dp;
    Int tc = st.tau.eval(c);
    Int b = ad == 1 ? Int(0)
                    : detail::least_abs_mod(-tc * inv_mod(twok, ad), ad);
    Int lam_num = tc + twok * b;
    internal_check(lam_num % dp == 0, "extend_pair: lambda is not integral");
    Int lam = lam_num / dp;
    IntPoly at = (st.tau + IntPoly(twok * b) - IntPoly(lam_num)).div_linear(c);
    out.tau = IntPoly(twos) * at + IntPoly(lam) * (wj * rb.a);
    out.mu = IntPoly(twos) * st.mu - IntPoly(lam) * (wj * rb.b);
    out.g = st.g + IntPoly(b) * vm * wj;
    out.j = st.j + 1;
    out.k = st.k + sigma;
  }
  internal_check(invariant_holds(out), "extend_pair: update broke the invariant");
  return out;
}

inline std::vector<Move> default_schedule() {
  return {Move::core, Move::core, Move::straw_u, Move::straw_w};
}

inline sets::SetExpression cex_domain() {
  return sets::SetExpression::union_of(
      {sets::SetExpression::progression(1, 3),
       sets::SetExpression::progression(1, 2),
       sets::SetExpression::progression(2, 3)});
}

// The three open pieces the glued function is locally integral on.
inline std::vector<sets::SetExpression> cex_cover() {
  auto v = sets::SetExpression::progression(1, 2);
  return {v,
          sets::SetExpression::union_of(
              {sets::SetExpression::progression(4, 6), v}),
          sets::SetExpression::union_of(
              {v, sets::SetExpression::progression(2, 6)})};
}

struct CexRun {
  std::vector<PairState> trace;  // seed first, one entry per step after
  lip::WindowFunction q;
};

inline CexRun generate_counterexample(int steps, const std::vector<Move>& schedule,
                                      const Int& window) {
  require(steps >= 1, "cex: need at least one step");
  require(!schedule.empty(), "cex: empty schedule");
  require(window >= 4, "cex: window must reach the point 4");

  PairConfig cfg;
  int grow[3] = {0, 0, 0};
  for (int t = 0; t < steps; ++t)
    ++grow[static_cast<int>(schedule[t % schedule.size()])];
  auto window_count = [&](const sets::Progression& p) {
    return static_cast<int>(
        sets::enumerate_window(sets::SetExpression::progression(p), window)
            .size());
  };
  require(1 + grow[static_cast<int>(Move::core)] >= window_count(cfg.v) &&
              1 + grow[static_cast<int>(Move::straw_u)] >= window_count(cfg.u) &&
              1 + grow[static_cast<int>(Move::straw_w)] >= window_count(cfg.w),
          "cex: schedule does not consume the window");

  std::vector<PairState> trace;
  trace.push_back(initial_pair(cfg));
  for (int t = 0; t < steps; ++t)
    trace.push_back(extend_pair(trace.back(), schedule[t % schedule.size()]));

  const PairState& fin = trace.back();
  std::map<Int, Int> vals;
  for (const Int& x : sets::enumerate_window(cex_domain(), window))
    vals[x] = mod_floor(x, 6) == 2 ? fin.g.eval(x) : fin.f.eval(x);
  lip::WindowFunction q(cex_domain(), window, std::move(vals));
  internal_check(q.at(2) == 1 && q.at(4) == 0, "cex: anchor values moved");
  return {std::move(trace), std::move(q)};
}

inline CexRun generate_counterexample(int steps, const Int& window) {
  return generate_counterexample(steps, default_schedule(), window);
}

struct CexCertificate {
  std::optional<lip::Circuit> circuit;
  std::vector<std::pair<sets::SetExpression, bool>> pieces;  // locally integral?
};

inline CexCertificate certify_counterexample(const lip::WindowFunction& q) {
  require(q.has(2) && q.has(4), "certify: window must contain 2 and 4");
  CexCertificate cert;
  cert.circuit = lip::find_circuit(q);
  for (const auto& piece : cex_cover()) {
    auto r = q.restricted(piece);
    cert.pieces.emplace_back(piece, !lip::find_circuit(r));
  }
  return cert;
}

inline size_t max_coeff_bits(const PairState& st) {
  size_t bits = 0;
  for (const IntPoly* p : {&st.f, &st.g, &st.mu, &st.tau})
    for (const Int& c : p->c)
      bits = std::max(bits, mpz_sizeinbase(c.get_mpz_t(), 2));
  return bits;
}

}  // namespace kirchlip::cexgen

#endif
