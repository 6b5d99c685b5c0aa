#ifndef KIRCHLIP_INTS_HPP
#define KIRCHLIP_INTS_HPP

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kirchlip {

using Int = mpz_class;
using Rat = mpq_class;

// User-facing precondition violations (CLI exit code 2).
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Configured resource limits exceeded (CLI exit code 3).
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Violated type invariant; signals an implementation bug, not a user condition.
struct InternalError : std::logic_error {
  explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw InputError(msg);
}

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

inline Rat make_rat(const Int& num, const Int& den) {
  require(den != 0, "rational with zero denominator");
  Rat q(num, den);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Int rat_floor(const Rat& q) {
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  return r;
}

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int l;
  mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return l;
}

// Least non-negative residue, valid for any sign of a; m > 0.
inline Int mod_floor(const Int& a, const Int& m) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

struct ExtGcd {
  Int g, s, t;  // g = s*a + t*b, g >= 0
};

inline ExtGcd ext_gcd(const Int& a, const Int& b) {
  ExtGcd r;
  mpz_gcdext(r.g.get_mpz_t(), r.s.get_mpz_t(), r.t.get_mpz_t(), a.get_mpz_t(),
             b.get_mpz_t());
  return r;
}

inline Int inv_mod(const Int& a, const Int& m) {
  Int r;
  int ok = mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  internal_check(ok != 0, "inv_mod: element not invertible");
  return r;
}

// One congruence x = residue (mod modulus), modulus > 0.
struct Congruence {
  Int residue, modulus;
};

using CongruenceSystem = std::vector<Congruence>;

// Simultaneous solution (r, M) with M = lcm of moduli and 0 <= r < M,
// or absent when two congruences conflict. Moduli need not be coprime.
inline std::optional<Congruence> crt_solve(const CongruenceSystem& sys) {
  require(!sys.empty(), "crt_solve: empty system");
  Int r = 0, m = 1;
  for (const auto& c : sys) {
    require(c.modulus > 0, "crt_solve: non-positive modulus");
    Int r2 = mod_floor(c.residue, c.modulus);
    ExtGcd e = ext_gcd(m, c.modulus);
    Int diff = r2 - r;
    if (mod_floor(diff, e.g) != 0) return std::nullopt;
    Int l = m / e.g * c.modulus;
    // r + m * ((diff/g) * s mod (modulus/g)) hits both congruences.
    Int step = mod_floor(diff / e.g * e.s, c.modulus / e.g);
    r = mod_floor(r + m * step, l);
    m = l;
  }
  return Congruence{r, m};
}

// Prime factor with multiplicity, primes ascending.
struct PrimePower {
  Int p;
  int e;
};

inline constexpr long kTrialFactorBound = 1000000;

// Factors n >= 1 by trial division; primes above bound^2 cannot be certified
// and raise ResourceError.
inline std::vector<PrimePower> trial_factor(Int n, long bound = kTrialFactorBound) {
  require(n >= 1, "trial_factor: argument must be >= 1");
  std::vector<PrimePower> out;
  auto strip = [&](const Int& p) {
    int e = 0;
    while (mod_floor(n, p) == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  strip(2);
  for (Int p = 3; p <= bound && p * p <= n; p += 2) strip(p);
  if (n > 1) {
    if (n > Int(bound) * Int(bound))
      throw ResourceError("trial_factor: cofactor " + n.get_str() +
                          " exceeds trial division bound");
    out.push_back({n, 1});  // no factor <= bound and n <= bound^2, so prime
  }
  return out;
}

inline bool is_squarefree(const Int& d) {
  for (const auto& pp : trial_factor(d)) {
    if (pp.e > 1) return false;
  }
  return true;
}

inline bool is_prime(const Int& p) {
  if (p < 2) return false;
  auto f = trial_factor(p);
  return f.size() == 1 && f[0].e == 1;
}

inline Int pow_int(const Int& base, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline int ord_at(Int n, const Int& p) {
  internal_check(n != 0, "ord_at: zero argument");
  int e = 0;
  while (mod_floor(n, p) == 0) {
    n /= p;
    ++e;
  }
  return e;
}

// Carmichael function; x^(mu + lambda) = x^mu (mod m) for all integers x when
// mu is the largest prime exponent in m.
inline Int carmichael(const Int& m) {
  require(m >= 1, "carmichael: argument must be >= 1");
  Int lam = 1;
  for (const auto& pp : trial_factor(m)) {
    Int piece;
    if (pp.p == 2 && pp.e >= 3)
      piece = pow_int(2, pp.e - 2);
    else
      piece = pow_int(pp.p, pp.e - 1) * (pp.p - 1);
    lam = lcm(lam, piece);
  }
  return lam;
}

}  // namespace kirchlip

#endif
