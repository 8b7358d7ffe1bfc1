#pragma once

// Exact arithmetic in the cyclotomic chain ring O_{s,N} = Z[zeta_{p^s}]/(p^N).
//
// Elements are dense coefficient vectors of length e_s = phi(p^s) reduced
// modulo the cyclotomic polynomial Phi_{p^s}(x) = Phi_p(x^{p^{s-1}}) and
// modulo p^N.  The ring is a chain ring: every nonzero element is a unit
// times a power of the uniformizer pi = zeta_{p^s} - 1, and the pi-adic
// valuation of a nonzero element lies in [0, N*e_s).
//
// Lossy operations (division by non-units of the ring applied to data that
// is only known mod p^N) report how many p-levels of precision the result
// can be trusted to.  Constants (pi, zeta powers, eps = zeta_p - 1,
// factorials) lift canonically to any precision, so divisions between
// constants are loss-free.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclopd {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i64 = std::int64_t;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s >= m || s < a) s -= m;
  return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// p-adic valuation of a positive integer factorial, nu_p(n!).
inline i64 factorial_p_valuation(i64 n, i64 p) {
  i64 v = 0;
  while (n) {
    n /= p;
    v += n;
  }
  return v;
}

/// Base-p digit sum.
inline i64 digit_sum(i64 n, i64 p) {
  i64 s = 0;
  while (n) {
    s += n % p;
    n /= p;
  }
  return s;
}

/// Parameters of O_{s,N} = Z[zeta_{p^s}]/(p^N).
struct RingSpec {
  i64 p = 3;   // odd prime
  int s = 1;   // cyclotomic level
  int N = 1;   // p-adic precision
  i64 e = 2;   // phi(p^s), cached
  u64 mod = 3; // p^N, cached

  RingSpec() = default;

  bool operator==(const RingSpec& o) const { return p == o.p && s == o.s && N == o.N; }
  bool operator!=(const RingSpec& o) const { return !(*this == o); }

  /// p^{s-1}: the pi-valuation of eps = zeta_p - 1 at level s.
  i64 eps_val() const {
    i64 r = 1;
    for (int i = 1; i < s; ++i) r *= p;
    return r;
  }

  /// N * e_s: valuations live in [0, max_val]; max_val encodes "zero".
  i64 max_val() const { return (i64)N * e; }

  RingSpec with_precision(int N2) const;
};

inline RingSpec make_ring(i64 p, int s, int N) {
  if (p < 3 || !is_prime_u64((u64)p))
    throw std::invalid_argument("make_ring: p must be an odd prime >= 3");
  if (s < 1) throw std::invalid_argument("make_ring: level s must be >= 1");
  if (N < 1) throw std::invalid_argument("make_ring: precision N must be >= 1");
  RingSpec r;
  r.p = p;
  r.s = s;
  r.N = N;
  r.e = 1;
  for (int i = 1; i < s; ++i) r.e *= p;
  r.e *= (p - 1);
  u64 m = 1;
  for (int i = 0; i < N; ++i) {
    if (m > (u64(1) << 62) / (u64)p)
      throw std::overflow_error("make_ring: p^N exceeds native coefficient range");
    m *= (u64)p;
  }
  r.mod = m;
  return r;
}

inline RingSpec RingSpec::with_precision(int N2) const { return make_ring(p, s, N2); }

/// Element of O_{s,N}; coefficients of x^0..x^{e-1} modulo Phi_{p^s}, p^N.
struct CycloElem {
  RingSpec ring;
  std::vector<u64> c;

  CycloElem() = default;
  explicit CycloElem(const RingSpec& r) : ring(r), c((size_t)r.e, 0) {}

  bool is_zero() const {
    for (u64 v : c)
      if (v) return false;
    return true;
  }

  bool operator==(const CycloElem& o) const { return ring == o.ring && c == o.c; }
  bool operator!=(const CycloElem& o) const { return !(*this == o); }
};

inline void require_same_ring(const RingSpec& a, const RingSpec& b, const char* where) {
  if (a != b) throw std::invalid_argument(std::string(where) + ": mismatched RingSpec");
}

inline CycloElem zero(const RingSpec& r) { return CycloElem(r); }

inline CycloElem from_int(const RingSpec& r, i64 v) {
  CycloElem z(r);
  i64 m = (i64)r.mod;
  i64 vv = v % m;
  if (vv < 0) vv += m;
  z.c[0] = (u64)vv;
  return z;
}

inline CycloElem one(const RingSpec& r) { return from_int(r, 1); }

/// zeta_{p^s} as a ring element (the class of x).
inline CycloElem zeta(const RingSpec& r) {
  CycloElem z(r);
  z.c[1 % r.e] = 1; // e >= 2 always (p >= 3)
  return z;
}

// Reduce a raw convolution buffer (length up to 2e-1) modulo Phi_{p^s}.
// Uses x^e = -(1 + x^q + x^{2q} + ... + x^{(p-2)q}) with q = p^{s-1}.
inline void reduce_buffer(const RingSpec& r, std::vector<u64>& buf) {
  const i64 e = r.e, q = r.eps_val();
  const u64 m = r.mod;
  for (i64 k = (i64)buf.size() - 1; k >= e; --k) {
    u64 v = buf[(size_t)k];
    if (!v) continue;
    buf[(size_t)k] = 0;
    for (i64 j = 0; j <= r.p - 2; ++j) {
      size_t idx = (size_t)(k - e + j * q);
      buf[idx] = submod(buf[idx], v, m);
    }
  }
  buf.resize((size_t)e);
}

/// x^k reduced into the ring, k >= 0.
inline CycloElem zeta_pow(const RingSpec& r, i64 k) {
  i64 ps = r.e / (r.p - 1) * r.p; // p^s
  k %= ps;
  if (k < 0) k += ps;
  std::vector<u64> buf((size_t)k + 1, 0);
  buf[(size_t)k] = 1;
  if (k >= r.e) reduce_buffer(r, buf);
  buf.resize((size_t)r.e);
  CycloElem z(r);
  z.c = std::move(buf);
  return z;
}

/// eps = zeta_p - 1 = x^{p^{s-1}} - 1.
inline CycloElem epsilon(const RingSpec& r) {
  CycloElem z = zeta_pow(r, r.eps_val());
  z.c[0] = submod(z.c[0], 1, r.mod);
  return z;
}

/// pi = zeta_{p^s} - 1, the uniformizer.
inline CycloElem uniformizer(const RingSpec& r) {
  CycloElem z = zeta(r);
  z.c[0] = submod(z.c[0], 1, r.mod);
  return z;
}

inline CycloElem operator+(const CycloElem& a, const CycloElem& b) {
  require_same_ring(a.ring, b.ring, "add");
  CycloElem z(a.ring);
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = addmod(a.c[i], b.c[i], a.ring.mod);
  return z;
}

inline CycloElem operator-(const CycloElem& a, const CycloElem& b) {
  require_same_ring(a.ring, b.ring, "sub");
  CycloElem z(a.ring);
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = submod(a.c[i], b.c[i], a.ring.mod);
  return z;
}

inline CycloElem operator-(const CycloElem& a) {
  CycloElem z(a.ring);
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = a.c[i] ? a.ring.mod - a.c[i] : 0;
  return z;
}

namespace detail {
// Test-only fault injection hook; see selftest --inject-fault.
inline i64& fault_countdown() {
  static i64 v = -1;
  return v;
}
} // namespace detail

inline CycloElem operator*(const CycloElem& a, const CycloElem& b) {
  require_same_ring(a.ring, b.ring, "mul");
  const i64 e = a.ring.e;
  const u64 m = a.ring.mod;
  std::vector<u64> buf((size_t)(2 * e - 1), 0);
  for (i64 i = 0; i < e; ++i) {
    if (!a.c[(size_t)i]) continue;
    for (i64 j = 0; j < e; ++j) {
      if (!b.c[(size_t)j]) continue;
      size_t k = (size_t)(i + j);
      buf[k] = (u64)(((u128)buf[k] + (u128)a.c[(size_t)i] * b.c[(size_t)j]) % m);
    }
  }
  reduce_buffer(a.ring, buf);
  CycloElem z(a.ring);
  z.c = std::move(buf);
  if (detail::fault_countdown() >= 0 && detail::fault_countdown()-- == 0 && !z.is_zero())
    z.c[0] = addmod(z.c[0], 1, m); // injected arithmetic fault
  return z;
}

inline CycloElem scalar_mul(i64 k, const CycloElem& a) { return from_int(a.ring, k) * a; }

inline CycloElem pow(const CycloElem& a, i64 n) {
  if (n < 0) throw std::invalid_argument("pow: negative exponent");
  CycloElem r = one(a.ring), b = a;
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

/// pi-adic valuation; `steps == ring.max_val()` encodes "at least N*e_s" (zero).
struct PiValuation {
  i64 steps = 0;
  i64 cap = 0; // N*e_s of the ring the valuation was taken in
  bool is_lower_bound() const { return steps >= cap; }
};

// Coefficients of a(1+t) as a polynomial in t (degree < e); the pi-adic
// coordinates of the element.  Substitution x -> 1+t is the binomial
// transform c_k = sum_i C(i,k) a_i.
inline std::vector<u64> pi_basis_coeffs(const CycloElem& a) {
  const i64 e = a.ring.e;
  const u64 m = a.ring.mod;
  // Pascal triangle row by row, C(i,k) for i < e.
  std::vector<u64> out((size_t)e, 0);
  std::vector<u64> row(1, 1); // C(0,*)
  for (i64 i = 0; i < e; ++i) {
    if (a.c[(size_t)i])
      for (i64 k = 0; k <= i; ++k)
        out[(size_t)k] = addmod(out[(size_t)k], mulmod(a.c[(size_t)i], row[(size_t)k], m), m);
    // next row
    row.push_back(0);
    for (i64 k = i + 1; k >= 1; --k) row[(size_t)k] = addmod(row[(size_t)k], row[(size_t)k - 1], m);
  }
  return out;
}

inline PiValuation pi_valuation(const CycloElem& a) {
  const RingSpec& r = a.ring;
  PiValuation v;
  v.cap = r.max_val();
  v.steps = v.cap;
  std::vector<u64> t = pi_basis_coeffs(a);
  for (i64 k = 0; k < r.e; ++k) {
    u64 ck = t[(size_t)k];
    if (!ck) continue;
    i64 vp = 0;
    while (ck % (u64)r.p == 0) {
      ck /= (u64)r.p;
      ++vp;
    }
    v.steps = std::min(v.steps, vp * r.e + k);
  }
  return v;
}

inline i64 val_steps(const CycloElem& a) { return pi_valuation(a).steps; }

/// Canonical lift to precision N2 >= N (coefficients reinterpreted mod p^{N2}).
inline CycloElem lift(const CycloElem& a, int N2) {
  if (N2 < a.ring.N) throw std::invalid_argument("lift: target precision below current");
  CycloElem z(a.ring.with_precision(N2));
  z.c = a.c;
  return z;
}

/// Reduction to precision N2 <= N.
inline CycloElem reduce(const CycloElem& a, int N2) {
  if (N2 > a.ring.N) throw std::invalid_argument("reduce: target precision above current");
  CycloElem z(a.ring.with_precision(N2));
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = a.c[i] % z.ring.mod;
  return z;
}

/// Coefficientwise exact division by p^k; requires val(a) >= k*e_s.
/// The result of dividing data known mod p^N is reliable mod p^{N-k}.
inline CycloElem divide_by_p_power(const CycloElem& a, int k) {
  u64 pk = 1;
  for (int i = 0; i < k; ++i) pk *= (u64)a.ring.p;
  CycloElem z(a.ring);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] % pk != 0)
      throw std::domain_error("divide_by_p_power: coefficient not divisible");
    z.c[i] = a.c[i] / pk;
  }
  return z;
}

/// Multiplicative inverse of a unit (val = 0), via Newton iteration seeded
/// from the residue a(1) mod p.
inline CycloElem unit_inverse(const CycloElem& a) {
  const RingSpec& r = a.ring;
  u64 a1 = 0;
  for (u64 v : a.c) a1 = addmod(a1, v, r.mod);
  if (a1 % (u64)r.p == 0) throw std::domain_error("unit_inverse: not a unit");
  // Seed correct mod pi, then Newton v <- v(2 - a v) squares the error.
  u64 inv1 = powmod(a1 % (u64)r.p, (u64)(r.p - 2), (u64)r.p);
  CycloElem v = from_int(r, (i64)inv1);
  CycloElem two = from_int(r, 2);
  int steps = 1;
  for (i64 reach = 1; reach < r.max_val(); reach *= 2) ++steps;
  for (int i = 0; i <= steps; ++i) v = v * (two - a * v);
  if (!(a * v == one(r))) throw std::domain_error("unit_inverse: iteration failed");
  return v;
}

/// Exact division result: q with b*q == a exactly in O_{s,N}.  q is one
/// representative of the quotient; it is determined mod p^{N - guard}.
struct DivResult {
  CycloElem q;
  int guard = 0; // p-levels of precision the quotient loses vs. its inputs
};

namespace detail {

// w_k = pi^{k*e}/p^k, a unit, computed exactly at precision N of `r`.
inline CycloElem pi_epower_over_p(const RingSpec& r, int k) {
  if (k == 0) return one(r);
  RingSpec boosted = r.with_precision(r.N + k);
  CycloElem pk = pow(uniformizer(boosted), (i64)k * boosted.e);
  return reduce(divide_by_p_power(pk, k), r.N);
}

} // namespace detail

/// Divide a by pi^v; requires val(a) >= v.  Loses ceil(v/e) p-levels of
/// precision relative to the precision a is known at.  The identity
/// pi^v * result == a holds exactly at the output precision.
inline DivResult divide_by_pi_power(const CycloElem& a, i64 v) {
  const RingSpec& r = a.ring;
  if (v == 0) return {a, 0};
  if (v < 0 || v > r.max_val()) throw std::invalid_argument("divide_by_pi_power: bad exponent");
  if (val_steps(a) < v) throw std::domain_error("divide_by_pi_power: valuation obstruction");
  int q = (int)(v / r.e);
  i64 rr = v % r.e;
  int g = q + (rr ? 1 : 0);
  // Work at N+g so the returned value is exact mod p^N.
  RingSpec br = r.with_precision(r.N + g);
  CycloElem x = lift(a, br.N);
  if (rr) x = x * pow(uniformizer(br), br.e - rr);
  int steps = q + (rr ? 1 : 0);
  CycloElem w = detail::pi_epower_over_p(br, steps);
  x = x * unit_inverse(w);
  x = divide_by_p_power(x, steps); // exact mod p^{N+g-steps} = p^N
  return {reduce(x, r.N), g};
}

/// exact_div(a, b): q with b*q == a, computed by boosting precision by
/// ceil(val(b)/e_s).  Throws if b = 0 or val(b) > val(a).
inline DivResult exact_div(const CycloElem& a, const CycloElem& b) {
  require_same_ring(a.ring, b.ring, "exact_div");
  i64 vb = val_steps(b);
  if (vb >= b.ring.max_val()) throw std::domain_error("exact_div: division by zero");
  if (val_steps(a) < vb) throw std::domain_error("exact_div: valuation obstruction");
  DivResult ub = divide_by_pi_power(b, vb); // unit part of b (exact: constants trick)
  DivResult qa = divide_by_pi_power(a, vb);
  CycloElem q = qa.q * unit_inverse(ub.q);
  if (!(b * q == a)) throw std::domain_error("exact_div: b does not divide a at the lifted level");
  return {q, qa.guard};
}

/// eps^{[n]} = (zeta_p - 1)^n / n!, exact in O_{s,N} (loss-free: all inputs
/// are constants).  Its pi-valuation is digit_sum_p(n) * p^{s-1}.
inline CycloElem divided_power_epsilon(const RingSpec& r, i64 n) {
  if (n < 0) throw std::invalid_argument("divided_power_epsilon: n >= 0 required");
  if (n == 0) return one(r);
  int g = (int)factorial_p_valuation(n, r.p);
  RingSpec br = r.with_precision(r.N + g);
  CycloElem en = pow(epsilon(br), n);
  // unit part of n!: product of k/p^{nu_p(k)}
  u64 u = 1;
  for (i64 k = 2; k <= n; ++k) {
    i64 kk = k;
    while (kk % r.p == 0) kk /= r.p;
    u = mulmod(u, (u64)kk % br.mod, br.mod);
  }
  CycloElem q = divide_by_p_power(en, g);
  q = q * unit_inverse(from_int(br, (i64)u));
  return reduce(q, r.N);
}

/// General exact divided power a^n/n! for data a with val(a) >= e_s/(p-1)
/// (so the result is integral); loss-free only when a is a canonical-lift
/// constant, which is how the library uses it (a = eps, rho, pi powers).
inline CycloElem divided_power(const CycloElem& a, i64 n) {
  const RingSpec& r = a.ring;
  if (n < 0) throw std::invalid_argument("divided_power: n >= 0 required");
  if (n == 0) return one(r);
  int g = (int)factorial_p_valuation(n, r.p);
  RingSpec br = r.with_precision(r.N + g);
  CycloElem an = pow(lift(a, br.N), n);
  u64 u = 1;
  for (i64 k = 2; k <= n; ++k) {
    i64 kk = k;
    while (kk % r.p == 0) kk /= r.p;
    u = mulmod(u, (u64)kk % br.mod, br.mod);
  }
  CycloElem q = divide_by_p_power(an, g);
  q = q * unit_inverse(from_int(br, (i64)u));
  return reduce(q, r.N);
}

/// zeta^alpha for alpha = q/p^m in [0,1) with gcd(q,p)=1 (m >= 1), inside a
/// ring of level s >= m: zeta_{p^m}^q = x^{q * p^{s-m}}.
inline CycloElem zeta_alpha(const RingSpec& r, i64 q, int m) {
  if (m == 0 || q == 0) return one(r);
  if (m < 0 || m > r.s) throw std::invalid_argument("zeta_alpha: denominator level exceeds ring level");
  if (q % r.p == 0) throw std::invalid_argument("zeta_alpha: numerator divisible by p");
  i64 shift = 1;
  for (int i = 0; i < r.s - m; ++i) shift *= r.p;
  return zeta_pow(r, q * shift);
}

/// zeta_power(p, q/p^m, N): the element zeta_{p^m}^q in the level-max(m,1)
/// ring at precision N.  alpha = 0 returns 1 at level 1.
inline CycloElem zeta_power(i64 p, i64 q, int m, int N) {
  if (q == 0 || m == 0) return one(make_ring(p, 1, N));
  if (q < 0 || q >= [&] { i64 t = 1; for (int i = 0; i < m; ++i) t *= p; return t; }())
    throw std::invalid_argument("zeta_power: alpha must lie in [0,1)");
  if (q % p == 0) throw std::invalid_argument("zeta_power: denominator not reduced (p | q)");
  RingSpec r = make_ring(p, m, N);
  return zeta_alpha(r, q, m);
}

} // namespace cyclopd
