#ifndef KIRCHLIP_SPLITTER_HPP
#define KIRCHLIP_SPLITTER_HPP

#include <algorithm>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "kirchlip/circuits.hpp"
#include "kirchlip/newton.hpp"
#include "kirchlip/poly.hpp"
#include "kirchlip/sets.hpp"
#include "kirchlip/window_fn.hpp"

namespace kirchlip::splitter {

inline constexpr int kMaxStages = 12;
inline constexpr int kScheduleBound = 2000;
inline constexpr long kProximityBound = 100000000;

// [V_m] = sigma [V_m'] + mu [U_n] + tau [W_n], checked on construction.
struct CofactorTriple {
  IntPoly sigma, mu, tau;

  static CofactorTriple checked(IntPoly sigma, IntPoly mu, IntPoly tau,
                                const IntPoly& vm_poly,
                                const IntPoly& vnext_poly,
                                const IntPoly& u_poly, const IntPoly& w_poly) {
    IntPoly rhs = sigma * vnext_poly + mu * u_poly + tau * w_poly;
    internal_check(vm_poly == rhs,
                   "cofactor triple: membership identity failed");
    return {std::move(sigma), std::move(mu), std::move(tau)};
  }

  static CofactorTriple checked(IntPoly sigma, IntPoly mu, IntPoly tau,
                                const std::vector<Int>& vm, const Int& v_next,
                                const std::vector<Int>& u_pts,
                                const std::vector<Int>& w_pts) {
    std::vector<Int> vnext = vm;
    vnext.push_back(v_next);
    return checked(std::move(sigma), std::move(mu), std::move(tau),
                   IntPoly::from_roots(vm), IntPoly::from_roots(vnext),
                   IntPoly::from_roots(u_pts), IntPoly::from_roots(w_pts));
  }
};

namespace detail {

inline std::vector<Int> without(const std::vector<Int>& all,
                                const std::vector<Int>& sub) {
  std::vector<Int> out;
  std::set_difference(all.begin(), all.end(), sub.begin(), sub.end(),
                      std::back_inserter(out));
  return out;
}

inline std::vector<Int> merged(std::vector<Int> a, const std::vector<Int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  return a;
}

// 1-based position of x in the increasing enumeration of s.
inline int index_in(const sets::SetExpression& s, const Int& x) {
  std::vector<Int> w = sets::enumerate_window(s, x);
  require(!w.empty() && w.back() == x, "index_in: not an element");
  return static_cast<int>(w.size());
}

// Divides out known linear factors; exact because the roots are present.
inline IntPoly poly_without(IntPoly p, const std::vector<Int>& roots) {
  for (const Int& r : roots) p = p.div_linear(r);
  return p;
}

// Everything about one stage that does not depend on m: the split of the
// point sets along V, the Bezout data for the resultant, and per prime of R
// the chosen proximity points. required_m is the least m for which all
// listed points lie in V_m. Proximity points are chosen greedily, minimal in
// V's enumeration, distinct across primes, never in U_n or W_n; primes
// ascend and within a prime the points of U_n \ V ascend, so the choice is
// deterministic and independent of m.
struct StagePlan {
  std::vector<Int> a_pts, u_in, b_pts, w_in;
  bool both = false;
  ResultantBezout bez;
  struct PrimeData {
    Int p;
    int e = 0;
    Int pe, cofactor;
    std::vector<Int> first, second, prox;
  };
  std::vector<PrimeData> primes;
  std::vector<std::pair<Int, int>> needed;  // (point, index in V)
  int required_m = 1;
};

inline StagePlan prepare_stage(const std::vector<Int>& u_pts,
                               const std::vector<Int>& w_pts,
                               const sets::SetExpression& v) {
  require(std::is_sorted(u_pts.begin(), u_pts.end()) &&
              std::adjacent_find(u_pts.begin(), u_pts.end()) == u_pts.end(),
          "membership_witness: U points must be sorted and distinct");
  require(std::is_sorted(w_pts.begin(), w_pts.end()) &&
              std::adjacent_find(w_pts.begin(), w_pts.end()) == w_pts.end(),
          "membership_witness: W points must be sorted and distinct");
  StagePlan plan;
  for (const Int& u : u_pts)
    (sets::contains(v, u) ? plan.u_in : plan.a_pts).push_back(u);
  for (const Int& w : w_pts)
    (sets::contains(v, w) ? plan.w_in : plan.b_pts).push_back(w);
  auto need = [&](const Int& x) {
    int idx = index_in(v, x);
    plan.needed.emplace_back(x, idx);
    plan.required_m = std::max(plan.required_m, idx);
  };
  for (const Int& u : plan.u_in) need(u);
  for (const Int& w : plan.w_in) need(w);
  if (plan.a_pts.empty() || plan.b_pts.empty()) return plan;

  plan.both = true;
  plan.bez = resultant_bezout(IntPoly::from_roots(plan.a_pts),
                              IntPoly::from_roots(plan.b_pts));
  std::set<Int> used;
  for (const auto& pp : trial_factor(abs(plan.bez.r))) {
    StagePlan::PrimeData pd;
    pd.p = pp.p;
    pd.e = pp.e;
    pd.pe = pow_int(pp.p, static_cast<unsigned long>(pp.e));
    pd.cofactor = plan.bez.r / pd.pe;
    internal_check(pd.cofactor * pd.pe == plan.bez.r,
                   "membership_witness: ord_p misfactored");
    for (const Int& u : plan.a_pts)
      (sets::hits_residue(v, u, pd.p) ? pd.first : pd.second).push_back(u);
    for (const Int& u : pd.first) {
      Int chosen = -1;
      for (Int bound(1024);; bound *= 8) {
        for (const Int& cand : sets::proximity_solve(v, u, pd.p, pd.e, bound)) {
          if (used.count(cand)) continue;
          if (std::binary_search(u_pts.begin(), u_pts.end(), cand)) continue;
          if (std::binary_search(w_pts.begin(), w_pts.end(), cand)) continue;
          chosen = cand;
          break;
        }
        if (chosen >= 0) break;
        if (bound > kProximityBound)
          throw ResourceError(
              "membership_witness: proximity point for " + u.get_str() +
              " mod " + pd.pe.get_str() + " not found within the bound");
      }
      pd.prox.push_back(chosen);
      used.insert(chosen);
      need(chosen);
    }
    plan.primes.push_back(std::move(pd));
  }
  return plan;
}

}  // namespace detail

// Expresses [V_m] through [V_{m+1}], [U_n], [W_n]. Points of U and W inside V
// must already lie in V_m, as must the proximity points; otherwise m is too
// small. When both difference sets are nonempty the construction runs the
// resultant-and-primes argument: a Bezout pair for [U_n \ V], [W_n \ V] gives
// the multiple R [V_m]; for each p | R a polynomial f_p with p not dividing
// f_p(v_{m+1}) gives the multiple f_p [V_m]; an integer combination equal to 1
// at v_{m+1} folds them into [V_m] itself, at the cost of one [V_{m+1}] term.
inline CofactorTriple membership_witness(const std::vector<Int>& u_pts,
                                         const std::vector<Int>& w_pts,
                                         const sets::SetExpression& v, int m) {
  require(m >= 1, "membership_witness: m must be positive");
  detail::StagePlan plan = detail::prepare_stage(u_pts, w_pts, v);
  for (const auto& [x, idx] : plan.needed)
    require(idx <= m, "membership_witness: m too small, point " + x.get_str() +
                          " lies beyond V_m");

  std::vector<Int> velems = sets::first_elements(v, m + 1);
  Int pivot = velems.back();
  std::vector<Int> vm(velems.begin(), velems.end() - 1);
  IntPoly vm_poly = IntPoly::from_roots(vm);
  IntPoly u_poly = IntPoly::from_roots(u_pts);
  IntPoly w_poly = IntPoly::from_roots(w_pts);
  IntPoly vnext_poly = vm_poly * IntPoly::from_roots({pivot});

  if (plan.a_pts.empty())
    return CofactorTriple::checked(IntPoly(),
                                   detail::poly_without(vm_poly, plan.u_in),
                                   IntPoly(), vm_poly, vnext_poly, u_poly,
                                   w_poly);
  if (plan.b_pts.empty())
    return CofactorTriple::checked(IntPoly(), IntPoly(),
                                   detail::poly_without(vm_poly, plan.w_in),
                                   vm_poly, vnext_poly, u_poly, w_poly);

  const Int& R = plan.bez.r;
  IntPoly mu_r = plan.bez.a * detail::poly_without(vm_poly, plan.u_in);
  IntPoly tau_r = plan.bez.b * detail::poly_without(vm_poly, plan.w_in);

  struct PrimePiece {
    IntPoly poly, mu, tau;
  };
  std::vector<PrimePiece> pieces;
  for (const auto& pd : plan.primes) {
    IntPoly f0 = IntPoly::from_roots(pd.second);
    PrimePiece piece;
    piece.poly = pd.cofactor * f0;
    internal_check(mod_floor(piece.poly.eval(pivot), pd.p) != 0,
                   "membership_witness: f_p vanishes mod p at the pivot");
    IntPoly q_p = (IntPoly::from_roots(pd.prox) - IntPoly::from_roots(pd.first))
                      .div_scalar(pd.pe);
    IntPoly rest_u =
        detail::poly_without(vm_poly, detail::merged(pd.prox, plan.u_in));
    IntPoly rest_w =
        detail::poly_without(vm_poly, detail::merged(pd.prox, plan.w_in));
    piece.mu = pd.cofactor * rest_u + plan.bez.a * f0 * q_p * rest_u;
    piece.tau = plan.bez.b * f0 * q_p * rest_w;
    internal_check(piece.poly * vm_poly ==
                       piece.mu * u_poly + piece.tau * w_poly,
                   "membership_witness: prime piece identity failed");
    pieces.push_back(std::move(piece));
  }

  Int alpha;
  std::vector<Int> beta(pieces.size());
  if (pieces.empty()) {
    internal_check(abs(R) == 1, "membership_witness: unit resultant expected");
    alpha = R;
  } else {
    Int g = R;
    alpha = 1;
    for (size_t i = 0; i < pieces.size(); ++i) {
      ExtGcd e = ext_gcd(g, pieces[i].poly.eval(pivot));
      alpha *= e.s;
      for (size_t j = 0; j < i; ++j) beta[j] *= e.s;
      beta[i] = e.t;
      g = e.g;
    }
    internal_check(g == 1, "membership_witness: pivot values not coprime");
  }

  IntPoly one_comb(alpha * R);
  IntPoly mu = alpha * mu_r;
  IntPoly tau = alpha * tau_r;
  for (size_t i = 0; i < pieces.size(); ++i) {
    one_comb = one_comb + beta[i] * pieces[i].poly;
    mu = mu + beta[i] * pieces[i].mu;
    tau = tau + beta[i] * pieces[i].tau;
  }
  internal_check(one_comb.eval(pivot) == 1,
                 "membership_witness: combination misses 1 at the pivot");
  IntPoly sigma = -((one_comb - IntPoly(Int(1))).div_linear(pivot));
  return CofactorTriple::checked(std::move(sigma), std::move(mu),
                                 std::move(tau), vm_poly, vnext_poly, u_poly,
                                 w_poly);
}

// Sufficient m per stage, strictly increasing. The stage data lists every
// point the witness needs inside V_m, so the least workable m is the largest
// index among them; the witness construction then re-verifies sufficiency.
// Success persists for larger m: V_m only grows and the pivot coprimality is
// m-independent.
inline std::vector<int> split_schedule(const sets::SetExpression& u,
                                       const sets::SetExpression& w,
                                       const sets::SetExpression& v,
                                       int n_max) {
  require(n_max >= 0, "split_schedule: negative stage count");
  std::vector<int> out;
  int prev = 0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<Int> u_pts = sets::first_elements(u, n);
    std::vector<Int> w_pts = sets::first_elements(w, n);
    int m =
        std::max(detail::prepare_stage(u_pts, w_pts, v).required_m, prev + 1);
    if (m > kScheduleBound)
      throw ResourceError("split_schedule: no workable m within bound");
    membership_witness(u_pts, w_pts, v, m);
    out.push_back(m);
    prev = m;
  }
  return out;
}

// Stage-indexed rewriting data shared by every stream over the same triple
// (U, W, V): the schedule m_1 .. m_K plus the closing level m_K + 1, and per
// stage the folded triple [V_{m_n}] = sigma [V_{m_{n+1}}] + mu [U_n] +
// tau [W_n]. The fold walks m upward one witness at a time and stops early
// once sigma vanishes, since later witnesses then contribute nothing.
struct SplitPlan {
  sets::SetExpression u, w, v;
  int stages = 0;
  std::vector<int> schedule;  // m_1 .. m_K, m_K + 1
  std::vector<CofactorTriple> folds;
  std::vector<Int> vpoints;  // v_1 .. v_{m_K + 1}
  Int window = 0;
};

inline std::shared_ptr<const SplitPlan> make_split_plan(
    sets::SetExpression u, sets::SetExpression w, sets::SetExpression v,
    int stages, int max_stages = kMaxStages) {
  require(stages >= 0, "split plan: negative stage count");
  if (stages > max_stages) throw ResourceError("split plan: stage cap exceeded");
  {
    auto meet = sets::intersect(u, w);
    require(meet && sets::set_equal(*meet, v),
            "splitter: V must equal the intersection of U and W");
    const std::vector<sets::SetExpression> parts =
        v.kind == sets::SetExpression::Kind::united
            ? v.parts
            : std::vector<sets::SetExpression>{v};
    for (const auto& part : parts)
      require(sets::is_almost_basic(part), "splitter: V must be an open set");
  }
  auto plan = std::make_shared<SplitPlan>();
  plan->u = std::move(u);
  plan->w = std::move(w);
  plan->v = std::move(v);
  plan->stages = stages;

  int prev = 0;
  for (int n = 1; n <= std::max(stages, 1); ++n) {
    std::vector<Int> u_pts = sets::first_elements(plan->u, n);
    std::vector<Int> w_pts = sets::first_elements(plan->w, n);
    int m = std::max(detail::prepare_stage(u_pts, w_pts, plan->v).required_m,
                     prev + 1);
    if (m > kScheduleBound)
      throw ResourceError("split_schedule: no workable m within bound");
    plan->schedule.push_back(m);
    prev = m;
    if (stages == 0) break;
  }
  if (stages > 0) plan->schedule.push_back(plan->schedule.back() + 1);

  plan->vpoints = sets::first_elements(plan->v, plan->schedule.back());
  plan->window = plan->vpoints.back();

  for (int n = 1; n <= stages; ++n) {
    std::vector<Int> u_pts = sets::first_elements(plan->u, n);
    std::vector<Int> w_pts = sets::first_elements(plan->w, n);
    int m_lo = plan->schedule[n - 1];
    int m_hi = plan->schedule[n];
    CofactorTriple fold = membership_witness(u_pts, w_pts, plan->v, m_lo);
    for (int m = m_lo + 1; m < m_hi && !fold.sigma.is_zero(); ++m) {
      CofactorTriple next = membership_witness(u_pts, w_pts, plan->v, m);
      fold.mu = fold.mu + fold.sigma * next.mu;
      fold.tau = fold.tau + fold.sigma * next.tau;
      fold.sigma = fold.sigma * next.sigma;
    }
    std::vector<Int> vm(plan->vpoints.begin(), plan->vpoints.begin() + m_lo);
    std::vector<Int> vnext(plan->vpoints.begin(), plan->vpoints.begin() + m_hi);
    plan->folds.push_back(CofactorTriple::checked(
        std::move(fold.sigma), std::move(fold.mu), std::move(fold.tau),
        IntPoly::from_roots(vm), IntPoly::from_roots(vnext),
        IntPoly::from_roots(u_pts), IntPoly::from_roots(w_pts)));
  }
  return plan;
}

struct SplitCertificate {
  bool difference_ok = false;  // f = g - h on V's window
  bool g_lip = false;          // find_circuit absent on U's window
  bool h_lip = false;
  Int window = 0;
};

struct SplitResult {
  lip::WindowFunction g, h;
  SplitCertificate certificate;
};

// Streaming rewriter for f = g - h. Stage n folds the coefficients with
// index in [m_n, m_{n+1}) together with the pending remainder into one
// rewriting of [V_{m_n}]; the [U_n]- and [W_n]-multiples land in g and h and
// never change the first n outputs again, the [V_{m_{n+1}}]-multiple stays
// pending. Coefficients below m_1 are already integer polynomials and go
// straight into g.
class SplitterState {
 public:
  SplitterState(std::shared_ptr<const SplitPlan> plan, lip::ProductSum f)
      : plan_(std::move(plan)), f_(std::move(f)) {
    require(f_.is_integral(),
            "splitter: product-sum coefficients not integral");
    require(f_.coeffs.size() <= f_.enumeration.size(),
            "splitter: more coefficients than enumeration points");
    std::vector<Int> vprefix = sets::first_elements(
        plan_->v, static_cast<int>(f_.enumeration.size()));
    require(f_.enumeration == vprefix,
            "splitter: enumeration must list V in increasing order");
    int m1 = plan_->schedule.front();
    IntPoly head;
    for (int k = std::min<int>(m1, coeff_count()) - 1; k >= 0; --k)
      head = head * IntPoly::from_roots({plan_->vpoints[k]}) + IntPoly(coeff(k));
    if (!head.is_zero()) {
      g_poly_ = head;
      g_parts_.emplace_back(std::move(head), IntPoly(Int(1)));
    }
  }

  SplitterState(const sets::SetExpression& u, const sets::SetExpression& w,
                const sets::SetExpression& v, lip::ProductSum f, int stages,
                int max_stages = kMaxStages)
      : SplitterState(make_split_plan(u, w, v, stages, max_stages),
                      std::move(f)) {}

  int stage() const { return stage_; }
  const SplitPlan& plan() const { return *plan_; }
  const IntPoly& pending() const { return pending_; }
  const std::vector<std::pair<IntPoly, IntPoly>>& g_parts() const {
    return g_parts_;
  }
  const std::vector<std::pair<IntPoly, IntPoly>>& h_parts() const {
    return h_parts_;
  }

  // Consumed schedule prefix m_1 .. m_{stage+1}.
  std::vector<int> schedule() const {
    return {plan_->schedule.begin(), plan_->schedule.begin() + stage_ + 1};
  }

  Int g_at(const Int& x) const { return g_poly_.eval(x); }
  Int h_at(const Int& x) const { return h_poly_.eval(x); }

  // Runs one stage; afterwards g and h are final on the first stage() points
  // of U and W.
  void step() {
    if (stage_ >= plan_->stages)
      throw ResourceError("splitter: stage cap exceeded");
    int n = stage_ + 1;
    int m_lo = plan_->schedule[n - 1];
    int m_hi = plan_->schedule[n];
    IntPoly group;  // sum of a_k [V_k \ V_{m_lo}] over k in [m_lo, m_hi)
    for (int k = m_hi - 1; k >= m_lo; --k) {
      if (!group.is_zero())
        group = group * IntPoly::from_roots({plan_->vpoints[k]});
      if (k < coeff_count()) group = group + IntPoly(coeff(k));
    }
    IntPoly q = pending_ + group;
    if (!q.is_zero()) {
      const CofactorTriple& fold = plan_->folds[n - 1];
      IntPoly gc = q * fold.mu;
      IntPoly hc = -(q * fold.tau);
      IntPoly u_poly = IntPoly::from_roots(sets::first_elements(plan_->u, n));
      IntPoly w_poly = IntPoly::from_roots(sets::first_elements(plan_->w, n));
      g_poly_ = g_poly_ + gc * u_poly;
      h_poly_ = h_poly_ + hc * w_poly;
      g_parts_.emplace_back(std::move(gc), std::move(u_poly));
      h_parts_.emplace_back(std::move(hc), std::move(w_poly));
      pending_ = q * fold.sigma;
    }
    stage_ = n;
  }

  SplitResult result() const {
    Int window = plan_->vpoints[plan_->schedule[stage_] - 1];
    SplitResult out{
        lip::WindowFunction::from_poly(plan_->u, window, g_poly_),
        lip::WindowFunction::from_poly(plan_->w, window, h_poly_),
        {}};
    out.certificate.window = window;
    out.certificate.difference_ok = true;
    for (const Int& x : sets::enumerate_window(plan_->v, window)) {
      Rat fx = lip::product_sum_eval(f_, x);
      if (fx != Rat(out.g.at(x) - out.h.at(x)))
        out.certificate.difference_ok = false;
    }
    out.certificate.g_lip = !lip::find_circuit(out.g).has_value();
    out.certificate.h_lip = !lip::find_circuit(out.h).has_value();
    internal_check(out.certificate.difference_ok,
                   "splitter: f and g - h disagree on the window");
    internal_check(out.certificate.g_lip && out.certificate.h_lip,
                   "splitter: output fails the circuit check");
    return out;
  }

 private:
  int coeff_count() const { return static_cast<int>(f_.coeffs.size()); }
  Int coeff(int k) const { return f_.coeffs[k].get_num(); }

  std::shared_ptr<const SplitPlan> plan_;
  lip::ProductSum f_;
  int stage_ = 0;
  IntPoly g_poly_, h_poly_;
  std::vector<std::pair<IntPoly, IntPoly>> g_parts_, h_parts_;
  IntPoly pending_;  // cofactor of [V_{m_{stage+1}}]
};

inline SplitResult split_stream(const sets::SetExpression& u,
                                const sets::SetExpression& w,
                                const sets::SetExpression& v,
                                const lip::ProductSum& f, int stages,
                                int max_stages = kMaxStages) {
  SplitterState st(u, w, v, f, stages, max_stages);
  for (int i = 0; i < stages; ++i) st.step();
  return st.result();
}

}  // namespace kirchlip::splitter

#endif
