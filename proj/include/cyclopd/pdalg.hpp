#pragma once

// Truncated divided-power polynomial algebras A[rho Y_1, ..., rho Y_d]_pd
// with basis rho^{|n|} Y^{[n]} for |n| <= D, carrying
//   - the Gamma-action gamma_i : Y_j -> Y_j + delta_ij (zeta_p - 1),
//     optionally twisted by a weight zeta^{alpha_i} (degree-nonincreasing,
//     so the truncation is a genuine subrepresentation),
//   - the Higgs field Theta = sum_i d/dY_i (x) dlog T_i / t,
//   - the comparison map iota to the plain truncated polynomial algebra,
//     (rho Y_i)^{[n]} -> (zeta_p - 1)^{[n]} (rho Y_i)^n,
//   - the Faltings model on the basis (e, rho y_1, ..., rho y_d), and
//   - the PD-envelope construction of the period model: the free PD algebra
//     on (e, rho y_i) modulo the pd-ideal (e - (zeta_p - 1)).

#include <map>

#include "chainlin.hpp"

namespace cyclopd {

/// Multi-indices n in N^d with |n| <= D, in graded-lex order.
struct MultiIndexTable {
  int d = 1;
  int D = 0;
  std::vector<std::vector<int>> idx;       // position -> multi-index
  std::map<std::vector<int>, int> pos_map; // multi-index -> position

  MultiIndexTable() = default;
  MultiIndexTable(int d_, int D_) : d(d_), D(D_) {
    std::vector<int> cur((size_t)d, 0);
    for (int total = 0; total <= D; ++total) emit(cur, 0, total);
    for (size_t i = 0; i < idx.size(); ++i) pos_map[idx[i]] = (int)i;
  }

  int size() const { return (int)idx.size(); }
  int total_degree(int pos) const {
    int s = 0;
    for (int v : idx[(size_t)pos]) s += v;
    return s;
  }
  /// Position of n, or -1 when out of the truncation window.
  int position(const std::vector<int>& n) const {
    auto it = pos_map.find(n);
    return it == pos_map.end() ? -1 : it->second;
  }
  int shifted(int pos, int i, int delta) const {
    std::vector<int> n = idx[(size_t)pos];
    n[(size_t)i] += delta;
    if (n[(size_t)i] < 0) return -1;
    return position(n);
  }

private:
  void emit(std::vector<int>& cur, int at, int remaining) {
    if (at == d - 1) {
      cur[(size_t)at] = remaining;
      idx.push_back(cur);
      return;
    }
    for (int v = remaining; v >= 0; --v) { // graded-lex within each total degree
      cur[(size_t)at] = v;
      emit(cur, at + 1, remaining - v);
    }
    cur[(size_t)at] = 0;
  }
};

inline i64 binom_i64(i64 n, i64 k) {
  if (k < 0 || k > n) return 0;
  i64 r = 1;
  for (i64 t = 1; t <= k; ++t) r = r * (n - k + t) / t;
  return r;
}

/// A weight alpha = q / p^m in [0,1), gcd(q,p) = 1 unless q = 0.
struct Weight {
  i64 q = 0;
  int m = 0;
  bool is_zero() const { return q == 0; }
  bool operator==(const Weight& o) const { return q == o.q && m == o.m; }
};

inline CycloElem zeta_of(const RingSpec& r, const Weight& w) {
  return w.is_zero() ? one(r) : zeta_alpha(r, w.q, w.m);
}

/// val(zeta^alpha - 1); the ring cap for alpha = 0.
inline i64 weight_val(const RingSpec& r, const Weight& w) {
  if (w.is_zero()) return r.max_val();
  return val_steps(zeta_of(r, w) - one(r));
}

struct PDAlgebraSpec {
  RingSpec ring;
  int d = 1;
  int D = 1;
  CycloElem rho;
  MultiIndexTable table;

  PDAlgebraSpec() = default;
  PDAlgebraSpec(const RingSpec& r, int d_, int D_, const CycloElem& rho_)
      : ring(r), d(d_), D(D_), rho(rho_), table(d_, D_) {
    if (d < 1 || D < 1) throw std::invalid_argument("PDAlgebraSpec: d, D >= 1 required");
    require_same_ring(r, rho.ring, "PDAlgebraSpec");
    // nu_p(rho) >= 1/(p-1), i.e. val >= e_s/(p-1) = p^{s-1}
    if (val_steps(rho) < r.eps_val())
      throw std::invalid_argument("PDAlgebraSpec: rho must satisfy nu_p(rho) >= 1/(p-1)");
  }

  bool operator==(const PDAlgebraSpec& o) const {
    return ring == o.ring && d == o.d && D == o.D && rho == o.rho;
  }

  /// w_k = rho^k * eps^{[k]} = (rho e)^{[k]} with e = zeta_p - 1; the
  /// substitution coefficients of gamma.  Exact (constants).
  CycloElem gamma_shift_coeff(i64 k) const {
    return pow(rho, k) * divided_power_epsilon(ring, k);
  }
};

/// Default rho = zeta_p - 1, the paper's unramified choice.
inline PDAlgebraSpec make_pd_spec(const RingSpec& r, int d, int D) {
  return PDAlgebraSpec(r, d, D, epsilon(r));
}

/// Element of the truncated PD algebra, coefficients over the index table
/// relative to the basis rho^{|n|} Y^{[n]}.
struct PDElem {
  const PDAlgebraSpec* spec = nullptr;
  std::vector<CycloElem> c;

  PDElem() = default;
  explicit PDElem(const PDAlgebraSpec& s)
      : spec(&s), c((size_t)s.table.size(), CycloElem(s.ring)) {}

  bool is_zero() const {
    for (const auto& v : c)
      if (!v.is_zero()) return false;
    return true;
  }
  bool operator==(const PDElem& o) const { return *spec == *o.spec && c == o.c; }
};

inline PDElem pd_zero(const PDAlgebraSpec& s) { return PDElem(s); }

inline PDElem pd_one(const PDAlgebraSpec& s) {
  PDElem z(s);
  z.c[0] = one(s.ring); // position 0 is the zero multi-index
  return z;
}

inline PDElem pd_basis(const PDAlgebraSpec& s, const std::vector<int>& n) {
  int pos = s.table.position(n);
  if (pos < 0) throw std::invalid_argument("pd_basis: index outside truncation");
  PDElem z(s);
  z.c[(size_t)pos] = one(s.ring);
  return z;
}

inline PDElem operator+(const PDElem& a, const PDElem& b) {
  if (!(*a.spec == *b.spec)) throw std::invalid_argument("pd add: spec mismatch");
  PDElem z(*a.spec);
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = a.c[i] + b.c[i];
  return z;
}

inline PDElem operator-(const PDElem& a, const PDElem& b) {
  if (!(*a.spec == *b.spec)) throw std::invalid_argument("pd sub: spec mismatch");
  PDElem z(*a.spec);
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = a.c[i] - b.c[i];
  return z;
}

inline PDElem operator*(const CycloElem& s, const PDElem& a) {
  PDElem z(*a.spec);
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] = s * a.c[i];
  return z;
}

inline PDElem scalar_mul(i64 k, const PDElem& a) { return from_int(a.spec->ring, k) * a; }

/// PD multiplication: rho^{|m|}Y^{[m]} * rho^{|n|}Y^{[n]}
///   = prod_i C(m_i + n_i, n_i) * rho^{|m+n|} Y^{[m+n]}, truncated past D.
inline PDElem pd_mul(const PDElem& a, const PDElem& b) {
  if (!(*a.spec == *b.spec)) throw std::invalid_argument("pd_mul: spec mismatch");
  const PDAlgebraSpec& s = *a.spec;
  const MultiIndexTable& T = s.table;
  PDElem z(s);
  for (int pa = 0; pa < T.size(); ++pa) {
    if (a.c[(size_t)pa].is_zero()) continue;
    int da = T.total_degree(pa);
    for (int pb = 0; pb < T.size(); ++pb) {
      if (b.c[(size_t)pb].is_zero()) continue;
      if (da + T.total_degree(pb) > s.D) continue;
      std::vector<int> sum = T.idx[(size_t)pa];
      i64 coeff = 1;
      for (int i = 0; i < s.d; ++i) {
        int mi = sum[(size_t)i], ni = T.idx[(size_t)pb][(size_t)i];
        coeff *= binom_i64(mi + ni, ni);
        sum[(size_t)i] = mi + ni;
      }
      int pz = T.position(sum);
      z.c[(size_t)pz] =
          z.c[(size_t)pz] + scalar_mul(coeff, a.c[(size_t)pa] * b.c[(size_t)pb]);
    }
  }
  return z;
}

/// gamma_i with weight twist zeta^{alpha}: coefficientwise
///   out_n = zeta^{alpha} * sum_{k >= 0} a_{n + k 1_i} * rho^k eps^{[k]}.
/// Exactly degree-nonincreasing; no truncation loss.
inline PDElem gamma_act(const PDAlgebraSpec& s, int i, const PDElem& u, const Weight& alpha) {
  if (i < 0 || i >= s.d) throw std::invalid_argument("gamma_act: index out of range");
  const MultiIndexTable& T = s.table;
  CycloElem tw = zeta_of(s.ring, alpha);
  std::vector<CycloElem> w;
  for (i64 k = 0; k <= s.D; ++k) w.push_back(s.gamma_shift_coeff(k));
  PDElem z(*u.spec);
  for (int pn = 0; pn < T.size(); ++pn) {
    CycloElem acc(s.ring);
    int src = pn;
    i64 k = 0;
    while (src >= 0) {
      if (!u.c[(size_t)src].is_zero()) acc = acc + u.c[(size_t)src] * w[(size_t)k];
      src = T.shifted(src, i, 1);
      ++k;
    }
    z.c[(size_t)pn] = tw * acc;
  }
  return z;
}

/// Components of the Higgs field: i-th component of Theta(rho^{|n|}Y^{[n]})
/// is rho * rho^{|n-1_i|} Y^{[n-1_i]}.
inline std::vector<PDElem> higgs_theta(const PDElem& u) {
  const PDAlgebraSpec& s = *u.spec;
  const MultiIndexTable& T = s.table;
  std::vector<PDElem> out;
  for (int i = 0; i < s.d; ++i) {
    PDElem z(s);
    for (int pm = 0; pm < T.size(); ++pm) {
      int src = T.shifted(pm, i, 1);
      if (src >= 0 && !u.c[(size_t)src].is_zero()) z.c[(size_t)pm] = s.rho * u.c[(size_t)src];
    }
    out.push_back(std::move(z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Comparison with the plain truncated polynomial algebra
// ---------------------------------------------------------------------------

/// Element of A[rho Y]/(degree > D) relative to the basis (rho Y)^n.
struct TruncPolyElem {
  const PDAlgebraSpec* spec = nullptr;
  std::vector<CycloElem> c;

  explicit TruncPolyElem(const PDAlgebraSpec& s)
      : spec(&s), c((size_t)s.table.size(), CycloElem(s.ring)) {}
  bool operator==(const TruncPolyElem& o) const { return *spec == *o.spec && c == o.c; }
};

/// iota: coefficientwise multiplication by prod_i eps^{[n_i]}.
inline TruncPolyElem comparison_iota(const PDElem& u) {
  const PDAlgebraSpec& s = *u.spec;
  TruncPolyElem z(s);
  for (int p = 0; p < s.table.size(); ++p) {
    if (u.c[(size_t)p].is_zero()) continue;
    CycloElem f = one(s.ring);
    for (int i = 0; i < s.d; ++i)
      f = f * divided_power_epsilon(s.ring, s.table.idx[(size_t)p][(size_t)i]);
    z.c[(size_t)p] = f * u.c[(size_t)p];
  }
  return z;
}

inline TruncPolyElem poly_mul(const TruncPolyElem& a, const TruncPolyElem& b) {
  const PDAlgebraSpec& s = *a.spec;
  const MultiIndexTable& T = s.table;
  TruncPolyElem z(s);
  for (int pa = 0; pa < T.size(); ++pa) {
    if (a.c[(size_t)pa].is_zero()) continue;
    int da = T.total_degree(pa);
    for (int pb = 0; pb < T.size(); ++pb) {
      if (b.c[(size_t)pb].is_zero()) continue;
      if (da + T.total_degree(pb) > s.D) continue;
      std::vector<int> sum = T.idx[(size_t)pa];
      for (int i = 0; i < s.d; ++i) sum[(size_t)i] += T.idx[(size_t)pb][(size_t)i];
      int pz = T.position(sum);
      z.c[(size_t)pz] = z.c[(size_t)pz] + a.c[(size_t)pa] * b.c[(size_t)pb];
    }
  }
  return z;
}

/// The polynomial-side derivation: i-th component sends (rho Y)^n to
/// n_i * rho * (rho Y)^{n - 1_i}.
inline std::vector<TruncPolyElem> poly_higgs_theta(const TruncPolyElem& u) {
  const PDAlgebraSpec& s = *u.spec;
  const MultiIndexTable& T = s.table;
  std::vector<TruncPolyElem> out;
  for (int i = 0; i < s.d; ++i) {
    TruncPolyElem z(s);
    for (int pm = 0; pm < T.size(); ++pm) {
      int src = T.shifted(pm, i, 1);
      if (src < 0 || u.c[(size_t)src].is_zero()) continue;
      i64 mult = T.idx[(size_t)src][(size_t)i]; // n_i of the source
      z.c[(size_t)pm] = scalar_mul(mult, s.rho * u.c[(size_t)src]);
    }
    out.push_back(std::move(z));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Faltings model
// ---------------------------------------------------------------------------

/// Coordinates over the basis (e, rho y_1, ..., rho y_d).
struct FaltingsModelElem {
  RingSpec ring;
  int d = 1;
  std::vector<CycloElem> c; // length d+1; c[0] is the e-coordinate

  FaltingsModelElem(const RingSpec& r, int d_)
      : ring(r), d(d_), c((size_t)d_ + 1, CycloElem(r)) {}
  bool operator==(const FaltingsModelElem& o) const { return c == o.c; }
};

/// gamma_i fixes e and sends rho y_j to rho y_j + rho delta_ij e.
inline FaltingsModelElem faltings_gamma(int i, const FaltingsModelElem& w, const CycloElem& rho) {
  if (i < 0 || i >= w.d) throw std::invalid_argument("faltings_gamma: index out of range");
  FaltingsModelElem z = w;
  z.c[0] = z.c[0] + rho * w.c[(size_t)i + 1];
  return z;
}

inline ChainMatrix faltings_gamma_matrix(const RingSpec& r, int d, int i, const CycloElem& rho) {
  ChainMatrix m = identity_matrix(r, d + 1);
  m.at(0, i + 1) = rho;
  return m;
}

// ---------------------------------------------------------------------------
// Period model via the PD envelope on (e, rho y_1, ..., rho y_d)
// ---------------------------------------------------------------------------

/// Free PD algebra on the Faltings basis, truncated at total degree D:
/// basis e^{[k]} * prod (rho y_i)^{[n_i]} with k + |n| <= D.  gamma_i acts
/// by the substitution rho y_i -> rho y_i + rho e (degree-preserving), and
/// the envelope Higgs field differentiates along the y_i.
struct PeriodEnvelope {
  PDAlgebraSpec quotient;   // the d-variable PD algebra the envelope models
  MultiIndexTable table;    // (d+1)-variable indices (k, n_1..n_d)
  int d = 1;
  int D = 1;

  PeriodEnvelope(const RingSpec& r, int d_, int D_, const CycloElem& rho)
      : quotient(r, d_, D_, rho), table(d_ + 1, D_), d(d_), D(D_) {}

  int size() const { return table.size(); }

  /// gamma_i on a coefficient vector over the envelope basis.
  std::vector<CycloElem> gamma(int i, const std::vector<CycloElem>& u) const {
    const RingSpec& r = quotient.ring;
    std::vector<CycloElem> z((size_t)table.size(), CycloElem(r));
    for (int pt = 0; pt < table.size(); ++pt) {
      if (u[(size_t)pt].is_zero()) continue;
      // basis (k, n): gamma_i -> sum_{j<=n_i} rho^{n_i-j} C(k + n_i - j, n_i - j)
      //               basis(k + n_i - j, n with n_i -> j)
      std::vector<int> kn = table.idx[(size_t)pt];
      int k = kn[0], ni = kn[(size_t)i + 1];
      for (int j = 0; j <= ni; ++j) {
        int shift = ni - j;
        std::vector<int> dst = kn;
        dst[0] = k + shift;
        dst[(size_t)i + 1] = j;
        int pd = table.position(dst);
        CycloElem coeff =
            scalar_mul(binom_i64(k + shift, shift), pow(quotient.rho, shift));
        z[(size_t)pd] = z[(size_t)pd] + coeff * u[(size_t)pt];
      }
    }
    return z;
  }

  /// i-th Higgs component on the envelope: (k, n) -> rho * (k, n - 1_i).
  std::vector<CycloElem> theta(int i, const std::vector<CycloElem>& u) const {
    const RingSpec& r = quotient.ring;
    std::vector<CycloElem> z((size_t)table.size(), CycloElem(r));
    for (int pm = 0; pm < table.size(); ++pm) {
      int src = table.shifted(pm, i + 1, 1);
      if (src >= 0 && !u[(size_t)src].is_zero())
        z[(size_t)pm] = quotient.rho * u[(size_t)src];
    }
    return z;
  }

  /// Quotient by the pd-ideal (e - (zeta_p - 1)): substitute e^{[k]} ->
  /// eps^{[k]}.  Lands in the d-variable PD algebra.
  PDElem quotient_map(const std::vector<CycloElem>& u) const {
    PDElem z(quotient);
    for (int pt = 0; pt < table.size(); ++pt) {
      if (u[(size_t)pt].is_zero()) continue;
      const std::vector<int>& kn = table.idx[(size_t)pt];
      std::vector<int> n(kn.begin() + 1, kn.end());
      int pq = quotient.table.position(n);
      CycloElem f = divided_power_epsilon(quotient.ring, kn[0]);
      z.c[(size_t)pq] = z.c[(size_t)pq] + f * u[(size_t)pt];
    }
    return z;
  }

  std::vector<CycloElem> basis_vec(const std::vector<int>& kn) const {
    int p = table.position(kn);
    if (p < 0) throw std::invalid_argument("envelope basis: out of window");
    std::vector<CycloElem> z((size_t)table.size(), CycloElem(quotient.ring));
    z[(size_t)p] = one(quotient.ring);
    return z;
  }
};

/// build_period_model: construct the envelope and hand back the d-variable
/// PD algebra it induces.  The coincidence of the induced Gamma-action and
/// Higgs field with the direct construction is what the tests verify.
inline PeriodEnvelope build_period_model(const RingSpec& r, int d, int D, const CycloElem& rho) {
  return PeriodEnvelope(r, d, D, rho);
}

} // namespace cyclopd
