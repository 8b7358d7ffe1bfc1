#pragma once

// Exact linear and homological algebra over O_{s,N}: Smith normal form with
// two-sided-invertible transforms, bounded complexes of free modules, Koszul
// complexes of commuting endomorphisms, cohomology presented by invariant
// factors plus cocycle representatives, and the decalage functor at the
// level of cohomology (H^n -> H^n / H^n[f]).

#include <cassert>
#include <functional>
#include <optional>

#include "cyclo.hpp"

namespace cyclopd {

struct ChainMatrix {
  RingSpec ring;
  int rows = 0, cols = 0;
  std::vector<CycloElem> a; // row-major

  ChainMatrix() = default;
  ChainMatrix(const RingSpec& r, int m, int n)
      : ring(r), rows(m), cols(n), a((size_t)m * (size_t)n, CycloElem(r)) {}

  CycloElem& at(int i, int j) { return a[(size_t)i * (size_t)cols + (size_t)j]; }
  const CycloElem& at(int i, int j) const { return a[(size_t)i * (size_t)cols + (size_t)j]; }

  bool operator==(const ChainMatrix& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

inline ChainMatrix identity_matrix(const RingSpec& r, int n) {
  ChainMatrix m(r, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = one(r);
  return m;
}

inline ChainMatrix operator+(const ChainMatrix& x, const ChainMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat add: shape");
  ChainMatrix z(x.ring, x.rows, x.cols);
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = x.a[i] + y.a[i];
  return z;
}

inline ChainMatrix operator-(const ChainMatrix& x, const ChainMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols) throw std::invalid_argument("mat sub: shape");
  ChainMatrix z(x.ring, x.rows, x.cols);
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = x.a[i] - y.a[i];
  return z;
}

inline ChainMatrix operator-(const ChainMatrix& x) {
  ChainMatrix z(x.ring, x.rows, x.cols);
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = -x.a[i];
  return z;
}

inline ChainMatrix operator*(const ChainMatrix& x, const ChainMatrix& y) {
  if (x.cols != y.rows) throw std::invalid_argument("mat mul: shape");
  ChainMatrix z(x.ring, x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const CycloElem& xik = x.at(i, k);
      if (xik.is_zero()) continue;
      for (int j = 0; j < y.cols; ++j) {
        if (y.at(k, j).is_zero()) continue;
        z.at(i, j) = z.at(i, j) + xik * y.at(k, j);
      }
    }
  return z;
}

inline ChainMatrix operator*(const CycloElem& c, const ChainMatrix& x) {
  ChainMatrix z(x.ring, x.rows, x.cols);
  for (size_t i = 0; i < z.a.size(); ++i) z.a[i] = c * x.a[i];
  return z;
}

inline std::vector<CycloElem> operator*(const ChainMatrix& x, const std::vector<CycloElem>& v) {
  if ((int)v.size() != x.cols) throw std::invalid_argument("mat-vec: shape");
  std::vector<CycloElem> z((size_t)x.rows, CycloElem(x.ring));
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j)
      if (!x.at(i, j).is_zero() && !v[(size_t)j].is_zero())
        z[(size_t)i] = z[(size_t)i] + x.at(i, j) * v[(size_t)j];
  return z;
}

inline ChainMatrix transpose(const ChainMatrix& x) {
  ChainMatrix z(x.ring, x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) z.at(j, i) = x.at(i, j);
  return z;
}

inline bool is_zero(const ChainMatrix& x) {
  for (const auto& v : x.a)
    if (!v.is_zero()) return false;
  return true;
}

inline bool commute(const ChainMatrix& x, const ChainMatrix& y) {
  return x * y == y * x;
}

inline ChainMatrix mat_pow(const ChainMatrix& x, i64 n) {
  ChainMatrix r = identity_matrix(x.ring, x.rows), b = x;
  while (n) {
    if (n & 1) r = r * b;
    b = b * b;
    n >>= 1;
  }
  return r;
}

/// Minimum pi-valuation over all entries (max_val for the zero matrix).
inline i64 min_entry_val(const ChainMatrix& x) {
  i64 v = x.ring.max_val();
  for (const auto& c : x.a) v = std::min(v, val_steps(c));
  return v;
}

inline i64 max_entry_val_nonzero(const ChainMatrix& x) {
  i64 v = 0;
  for (const auto& c : x.a)
    if (!c.is_zero()) v = std::max(v, val_steps(c));
  return v;
}

/// Kronecker product (used for tensor models).
inline ChainMatrix kronecker(const ChainMatrix& x, const ChainMatrix& y) {
  ChainMatrix z(x.ring, x.rows * y.rows, x.cols * y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) {
      if (x.at(i, j).is_zero()) continue;
      for (int k = 0; k < y.rows; ++k)
        for (int l = 0; l < y.cols; ++l)
          z.at(i * y.rows + k, j * y.cols + l) = x.at(i, j) * y.at(k, l);
    }
  return z;
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// U * M * V = D with U, V explicitly two-sided invertible and D diagonal
/// with entries pi^{k_1} | pi^{k_2} | ...  Exponent max_val stands for a
/// zero diagonal entry.  Pivoting: minimal pi-valuation, ties row-major.
struct SmithResult {
  ChainMatrix U, Uinv, V, Vinv, D;
  std::vector<i64> exps; // min(rows,cols) exponents, ascending
};

inline SmithResult smith_normal_form(const ChainMatrix& M0) {
  const RingSpec& r = M0.ring;
  const i64 cap = r.max_val();
  ChainMatrix M = M0;
  int m = M.rows, n = M.cols;
  SmithResult res{identity_matrix(r, m), identity_matrix(r, m), identity_matrix(r, n),
                  identity_matrix(r, n), ChainMatrix(r, m, n), {}};
  auto swap_rows = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < n; ++k) std::swap(M.at(i, k), M.at(j, k));
    for (int k = 0; k < m; ++k) std::swap(res.U.at(i, k), res.U.at(j, k));
    for (int k = 0; k < m; ++k) std::swap(res.Uinv.at(k, i), res.Uinv.at(k, j));
  };
  auto swap_cols = [&](int i, int j) {
    if (i == j) return;
    for (int k = 0; k < m; ++k) std::swap(M.at(k, i), M.at(k, j));
    for (int k = 0; k < n; ++k) std::swap(res.V.at(k, i), res.V.at(k, j));
    for (int k = 0; k < n; ++k) std::swap(res.Vinv.at(i, k), res.Vinv.at(j, k));
  };
  // row_i -= q * row_k  (U <- L U, Uinv <- Uinv L^{-1})
  auto row_sub = [&](int i, int k, const CycloElem& q) {
    if (q.is_zero()) return;
    for (int t = 0; t < n; ++t) M.at(i, t) = M.at(i, t) - q * M.at(k, t);
    for (int t = 0; t < m; ++t) res.U.at(i, t) = res.U.at(i, t) - q * res.U.at(k, t);
    for (int t = 0; t < m; ++t) res.Uinv.at(t, k) = res.Uinv.at(t, k) + q * res.Uinv.at(t, i);
  };
  // col_j -= q * col_k  (V <- V R, Vinv <- R^{-1} Vinv)
  auto col_sub = [&](int j, int k, const CycloElem& q) {
    if (q.is_zero()) return;
    for (int t = 0; t < m; ++t) M.at(t, j) = M.at(t, j) - q * M.at(t, k);
    for (int t = 0; t < n; ++t) res.V.at(t, j) = res.V.at(t, j) - q * res.V.at(t, k);
    for (int t = 0; t < n; ++t) res.Vinv.at(k, t) = res.Vinv.at(k, t) + q * res.Vinv.at(j, t);
  };
  auto scale_row = [&](int i, const CycloElem& u, const CycloElem& uinv) {
    for (int t = 0; t < n; ++t) M.at(i, t) = u * M.at(i, t);
    for (int t = 0; t < m; ++t) res.U.at(i, t) = u * res.U.at(i, t);
    for (int t = 0; t < m; ++t) res.Uinv.at(t, i) = res.Uinv.at(t, i) * uinv;
  };

  int steps = std::min(m, n);
  for (int k = 0; k < steps; ++k) {
    // minimal-valuation pivot, row-major tie break
    i64 best = cap;
    int bi = -1, bj = -1;
    for (int i = k; i < m; ++i)
      for (int j = k; j < n; ++j) {
        i64 v = val_steps(M.at(i, j));
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0 || best >= cap) {
      for (int t = k; t < steps; ++t) res.exps.push_back(cap);
      break;
    }
    swap_rows(k, bi);
    swap_cols(k, bj);
    // normalize pivot to pi^v exactly
    CycloElem u = divide_by_pi_power(M.at(k, k), best).q; // unit
    CycloElem uinv = unit_inverse(u);
    scale_row(k, uinv, u);
    CycloElem piv = pow(uniformizer(r), best);
    M.at(k, k) = piv; // canonical representative (equal up to ann already)
    // clear column then row; quotients are exact by minimality of the pivot
    for (int i = 0; i < m; ++i) {
      if (i == k || M.at(i, k).is_zero()) continue;
      row_sub(i, k, divide_by_pi_power(M.at(i, k), best).q);
      M.at(i, k) = CycloElem(r);
    }
    for (int j = 0; j < n; ++j) {
      if (j == k || M.at(k, j).is_zero()) continue;
      col_sub(j, k, divide_by_pi_power(M.at(k, j), best).q);
      M.at(k, j) = CycloElem(r);
    }
    res.exps.push_back(best);
  }
  res.D = M;
  return res;
}

/// Inverse of an invertible matrix (all SNF exponents zero).
inline ChainMatrix mat_inverse(const ChainMatrix& M) {
  SmithResult s = smith_normal_form(M);
  for (i64 k : s.exps)
    if (k != 0) throw std::domain_error("mat_inverse: matrix is not invertible");
  // U M V = I  =>  M^{ -1 } = V U
  return s.V * s.U;
}

// ---------------------------------------------------------------------------
// Complexes
// ---------------------------------------------------------------------------

/// Bounded complex of free modules, degrees lo..hi, with d^{n+1} d^n = 0.
struct FreeComplex {
  RingSpec ring;
  int lo = 0;
  std::vector<int> ranks;    // rank in degree lo+i
  std::vector<ChainMatrix> d; // d[i]: degree lo+i -> lo+i+1 (ranks[i+1] x ranks[i])

  int hi() const { return lo + (int)ranks.size() - 1; }
  int rank_at(int n) const {
    int i = n - lo;
    return (i < 0 || i >= (int)ranks.size()) ? 0 : ranks[(size_t)i];
  }
  const ChainMatrix* diff_at(int n) const { // d^n, null when out of range or target empty
    int i = n - lo;
    if (i < 0 || i + 1 >= (int)ranks.size()) return nullptr;
    return &d[(size_t)i];
  }
};

inline void verify_complex(const FreeComplex& C) {
  for (size_t i = 0; i + 1 < C.d.size(); ++i)
    if (!is_zero(C.d[i + 1] * C.d[i])) throw std::invalid_argument("complex: d^2 != 0");
}

/// Koszul complex K(V; phi_1..phi_d) of commuting endomorphisms of O^rank:
/// degree i has rank * C(d,i) generators indexed by i-subsets, and
/// d(v_S) = sum_{j not in S} sign(j,S) phi_j(v)_{S+j}.
inline FreeComplex koszul_complex(const RingSpec& ring, int rank,
                                  const std::vector<ChainMatrix>& phi) {
  const int d = (int)phi.size();
  for (const auto& m : phi)
    if (m.rows != rank || m.cols != rank) throw std::invalid_argument("koszul: operator shape");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (!commute(phi[(size_t)i], phi[(size_t)j]))
        throw std::invalid_argument("koszul: operators do not commute");

  // subsets of {0..d-1} by popcount, each level in increasing bitmask order
  std::vector<std::vector<unsigned>> level((size_t)d + 1);
  for (unsigned mask = 0; mask < (1u << d); ++mask)
    level[(size_t)__builtin_popcount(mask)].push_back(mask);
  std::vector<std::vector<int>> pos((size_t)d + 1, std::vector<int>(1u << d, -1));
  for (int i = 0; i <= d; ++i)
    for (size_t t = 0; t < level[(size_t)i].size(); ++t) pos[(size_t)i][level[(size_t)i][t]] = (int)t;

  FreeComplex C;
  C.ring = ring;
  C.lo = 0;
  for (int i = 0; i <= d; ++i) C.ranks.push_back(rank * (int)level[(size_t)i].size());
  for (int i = 0; i < d; ++i) {
    ChainMatrix D(ring, C.ranks[(size_t)i + 1], C.ranks[(size_t)i]);
    for (size_t t = 0; t < level[(size_t)i].size(); ++t) {
      unsigned S = level[(size_t)i][t];
      for (int j = 0; j < d; ++j) {
        if (S & (1u << j)) continue;
        unsigned T = S | (1u << j);
        int sgn = __builtin_popcount(S & ((1u << j) - 1)) % 2 ? -1 : 1;
        int tt = pos[(size_t)i + 1][T];
        for (int rr = 0; rr < rank; ++rr)
          for (int cc = 0; cc < rank; ++cc) {
            const CycloElem& v = phi[(size_t)j].at(rr, cc);
            if (v.is_zero()) continue;
            CycloElem& dst = D.at(tt * rank + rr, (int)t * rank + cc);
            dst = sgn > 0 ? dst + v : dst - v;
          }
      }
    }
    C.d.push_back(std::move(D));
  }
  verify_complex(C);
  return C;
}

// ---------------------------------------------------------------------------
// Cohomology presentations
// ---------------------------------------------------------------------------

/// ker d^n / im d^{n-1} presented by invariant factors (ascending exponents
/// k_i in (0, N*e_s], module = direct sum of O/(pi^{k_i})) together with
/// cocycle representatives in the ambient free module of degree n.
struct ModulePresentation {
  RingSpec ring;
  int ambient_rank = 0;
  std::vector<i64> factors;                    // ascending, in (0, max_val]
  std::vector<std::vector<CycloElem>> reps;    // one per factor
  i64 reliable_precision = 0;                  // pi-steps, <= N*e_s

  i64 free_rank_at(i64 threshold) const {
    i64 c = 0;
    for (i64 k : factors)
      if (k >= threshold) ++c;
    return c;
  }
};

namespace detail {

struct KernelBasis {
  // kernel of d^n as { pi^{cap-c_i} * (V col i) }, annihilator exponent c_i
  std::vector<std::vector<CycloElem>> gens;
  std::vector<i64> ann; // c_i
  ChainMatrix Vinv;     // to express kernel members in the V-coordinates
  std::vector<i64> exps; // SNF exponents of d^n, padded to source rank
};

inline KernelBasis kernel_of(const ChainMatrix& M) {
  const RingSpec& r = M.ring;
  const i64 cap = r.max_val();
  KernelBasis K;
  if (M.rows == 0) {
    // everything is in the kernel
    K.Vinv = identity_matrix(r, M.cols);
    for (int j = 0; j < M.cols; ++j) {
      std::vector<CycloElem> g((size_t)M.cols, CycloElem(r));
      g[(size_t)j] = one(r);
      K.gens.push_back(std::move(g));
      K.ann.push_back(cap);
      K.exps.push_back(cap);
    }
    return K;
  }
  SmithResult s = smith_normal_form(M);
  K.Vinv = s.Vinv;
  K.exps = s.exps;
  K.exps.resize((size_t)M.cols, cap); // columns beyond min(m,n) are zero columns
  for (int j = 0; j < M.cols; ++j) {
    i64 c = K.exps[(size_t)j];
    if (c <= 0) continue; // unit pivot: no kernel contribution
    CycloElem scale = pow(uniformizer(r), cap - c);
    std::vector<CycloElem> g((size_t)M.cols, CycloElem(r));
    for (int i = 0; i < M.cols; ++i) g[(size_t)i] = scale * s.V.at(i, j);
    K.gens.push_back(std::move(g));
    K.ann.push_back(c);
  }
  return K;
}

} // namespace detail

/// Cohomology of C in degree n.  Requires d^2 = 0 (verified).
inline ModulePresentation cohomology(const FreeComplex& C, int n) {
  const RingSpec& r = C.ring;
  const i64 cap = r.max_val();
  ModulePresentation H;
  H.ring = r;
  H.ambient_rank = C.rank_at(n);
  H.reliable_precision = cap;
  if (H.ambient_rank == 0) return H;

  const ChainMatrix* dn = C.diff_at(n);
  detail::KernelBasis K;
  if (dn)
    K = detail::kernel_of(*dn);
  else {
    ChainMatrix z(r, 0, H.ambient_rank);
    K = detail::kernel_of(z);
  }
  const int m = (int)K.gens.size();
  if (m == 0) return H;

  // incoming image generators, expressed in kernel coordinates
  std::vector<std::vector<CycloElem>> img_coords;
  const ChainMatrix* dprev = C.diff_at(n - 1);
  if (dprev && dprev->cols > 0) {
    for (int j = 0; j < dprev->cols; ++j) {
      std::vector<CycloElem> w((size_t)H.ambient_rank, CycloElem(r));
      for (int i = 0; i < H.ambient_rank; ++i) w[(size_t)i] = dprev->at(i, j);
      // y = Vinv * w; coordinate c_t = y_t / pi^{cap - ann_t}
      std::vector<CycloElem> y = K.Vinv * w;
      std::vector<CycloElem> coord((size_t)m, CycloElem(r));
      int t = 0;
      for (int col = 0; col < (int)K.exps.size(); ++col) {
        i64 c = K.exps[(size_t)col];
        if (c <= 0) continue;
        coord[(size_t)t] = divide_by_pi_power(y[(size_t)col], cap - c).q;
        ++t;
      }
      img_coords.push_back(std::move(coord));
    }
  }

  // relation matrix [diag(pi^{ann_i}) | image coords]
  ChainMatrix Rel(r, m, m + (int)img_coords.size());
  for (int i = 0; i < m; ++i)
    Rel.at(i, i) = K.ann[(size_t)i] >= cap ? CycloElem(r) : pow(uniformizer(r), K.ann[(size_t)i]);
  for (size_t j = 0; j < img_coords.size(); ++j)
    for (int i = 0; i < m; ++i) Rel.at(i, m + (int)j) = img_coords[j][(size_t)i];

  SmithResult s = smith_normal_form(Rel);
  std::vector<i64> exps = s.exps;
  exps.resize((size_t)m, cap);
  for (int i = 0; i < m; ++i) {
    i64 f = exps[(size_t)i];
    if (f <= 0) continue;
    H.factors.push_back(f);
    // representative: sum_t gens[t] * Uinv[t][i]
    std::vector<CycloElem> rep((size_t)H.ambient_rank, CycloElem(r));
    for (int t = 0; t < m; ++t) {
      const CycloElem& c = s.Uinv.at(t, i);
      if (c.is_zero()) continue;
      for (int q = 0; q < H.ambient_rank; ++q)
        rep[(size_t)q] = rep[(size_t)q] + c * K.gens[(size_t)t][(size_t)q];
    }
    H.reps.push_back(std::move(rep));
  }
  // ascending
  std::vector<size_t> idx(H.factors.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t x, size_t y) { return H.factors[x] < H.factors[y]; });
  ModulePresentation out = H;
  for (size_t i = 0; i < idx.size(); ++i) {
    out.factors[i] = H.factors[idx[i]];
    out.reps[i] = H.reps[idx[i]];
  }
  return out;
}

/// H^n(C) / H^n(C)[f]: invariant factor k -> max(k - val(f), 0); the
/// reliable precision drops by ceil(val(f)/e_s) p-levels.
inline ModulePresentation decalage_cohomology(const FreeComplex& C, const CycloElem& f, int n) {
  if (f.is_zero()) throw std::invalid_argument("decalage: f must be nonzero");
  ModulePresentation H = cohomology(C, n);
  i64 w = val_steps(f);
  ModulePresentation out;
  out.ring = H.ring;
  out.ambient_rank = H.ambient_rank;
  out.reliable_precision =
      H.reliable_precision - ((w + H.ring.e - 1) / H.ring.e) * H.ring.e;
  for (size_t i = 0; i < H.factors.size(); ++i) {
    i64 k = H.factors[i] - w;
    if (k <= 0) continue;
    out.factors.push_back(k);
    std::vector<CycloElem> rep = H.reps[i];
    for (auto& c : rep) c = f * c;
    out.reps.push_back(std::move(rep));
  }
  return out;
}

/// Quotient of an existing presentation by its f-torsion (same rule).
inline ModulePresentation decalage_presentation(const ModulePresentation& H, const CycloElem& f) {
  i64 w = val_steps(f);
  ModulePresentation out;
  out.ring = H.ring;
  out.ambient_rank = H.ambient_rank;
  out.reliable_precision =
      H.reliable_precision - ((w + H.ring.e - 1) / H.ring.e) * H.ring.e;
  for (size_t i = 0; i < H.factors.size(); ++i) {
    i64 k = H.factors[i] - w;
    if (k <= 0) continue;
    out.factors.push_back(k);
    std::vector<CycloElem> rep = H.reps[i];
    for (auto& c : rep) c = f * c;
    out.reps.push_back(std::move(rep));
  }
  return out;
}

/// K(V; lambda^{-1} phi_1, ..., lambda^{-1} phi_d): the Koszul-rescale model
/// of the decalage.  Requires lambda to divide every entry of every phi_i.
/// The quotient matrices are only determined modulo p^{N - ceil(val/e)}, so
/// the returned complex lives over the ring at that reduced precision; that
/// is where the rescaled operators provably commute again.
struct RescaledKoszul {
  FreeComplex complex;   // over the reduced-precision ring
  int guard_p_levels = 0;
};

inline RescaledKoszul eta_koszul_rescale(const RingSpec& ring, int rank,
                                         const std::vector<ChainMatrix>& phi,
                                         const CycloElem& lambda) {
  if (lambda.is_zero()) throw std::invalid_argument("eta_koszul_rescale: lambda = 0");
  i64 w = val_steps(lambda);
  int guard = (int)((w + ring.e - 1) / ring.e);
  if (ring.N - guard < 1)
    throw std::domain_error("eta_koszul_rescale: precision exhausted by the rescale");
  RingSpec rr = ring.with_precision(ring.N - guard);
  std::vector<ChainMatrix> scaled;
  for (const auto& m : phi) {
    ChainMatrix z(rr, m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) {
      if (m.a[i].is_zero()) continue;
      z.a[i] = reduce(exact_div(m.a[i], lambda).q, rr.N);
    }
    scaled.push_back(std::move(z));
  }
  return {koszul_complex(rr, rank, scaled), guard};
}

/// Membership of a vector in the submodule spanned by given generators:
/// returns coordinates if solvable (U M V = D solve), nullopt otherwise.
inline std::optional<std::vector<CycloElem>> solve_in_span(
    const ChainMatrix& gens /* columns */, const std::vector<CycloElem>& target) {
  const RingSpec& r = gens.ring;
  const i64 cap = r.max_val();
  if ((int)target.size() != gens.rows) throw std::invalid_argument("solve_in_span: shape");
  SmithResult s = smith_normal_form(gens);
  // M x = t  <=>  D (Vinv x) = U t ; D = diag(pi^{k_i})
  std::vector<CycloElem> rhs = s.U * target;
  std::vector<CycloElem> y((size_t)gens.cols, CycloElem(r));
  std::vector<i64> exps = s.exps;
  exps.resize((size_t)std::max(gens.rows, gens.cols), cap);
  for (int i = 0; i < gens.rows; ++i) {
    i64 k = i < (int)s.exps.size() ? s.exps[(size_t)i] : cap;
    const CycloElem& b = rhs[(size_t)i];
    if (i >= gens.cols || k >= cap) {
      if (i < (int)rhs.size() && !b.is_zero()) {
        if (i >= gens.cols) return std::nullopt;
        // zero diagonal: solvable only if rhs zero
        if (!b.is_zero()) return std::nullopt;
      }
      continue;
    }
    if (val_steps(b) < k) return std::nullopt;
    y[(size_t)i] = divide_by_pi_power(b, k).q;
  }
  return s.V * y;
}

} // namespace cyclopd
