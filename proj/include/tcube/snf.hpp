#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "tcube/dense.hpp"
#include "tcube/error.hpp"

namespace tcube {

// Smith normal form over the integers: u * a * v = d with u, v unimodular and
// d diagonal, nonnegative, each entry dividing the next.
//
// Entry growth is the whole difficulty. Three measures keep it bounded: the
// pivot is re-selected globally (minimum magnitude) before every clearing
// sweep, clearing uses minimal-remainder division, and the still-active rows
// and columns of the workspace and multipliers are size-reduced against each
// other between sweeps. Intermediates run in __int128 behind a 2^62 guard;
// inputs that still exceed it raise OverflowError rather than returning
// anything wrong.
struct SmithResult {
  int rows = 0;
  int cols = 0;
  int rank = 0;
  std::vector<std::vector<long long>> u;  // rows x rows
  std::vector<std::vector<long long>> d;  // rows x cols
  std::vector<std::vector<long long>> v;  // cols x cols
};

namespace detail {

using i128 = __int128;

inline i128 iabs_i128(i128 x) { return x < 0 ? -x : x; }

// quotient with minimal-magnitude remainder: |a - q * b| <= |b| / 2
inline i128 rounded_div_i128(i128 a, i128 b) {
  i128 q = a / b;
  const i128 rem = a - q * b;
  if (iabs_i128(rem) * 2 > iabs_i128(b)) q += ((a < 0) == (b < 0)) ? 1 : -1;
  return q;
}

// elimination workspace: d is driven to diagonal form while u and v
// accumulate the row and column operations
struct SmithWork {
  int r = 0, c = 0;
  std::vector<std::vector<i128>> d, u, v;

  static i128 checked(i128 x) {
    constexpr i128 lim = static_cast<i128>(1) << 62;
    if (x >= lim || x <= -lim) throw OverflowError("smith_normal_form: entry overflow");
    return x;
  }

  void swap_rows(int i1, int i2) { std::swap(d[i1], d[i2]); std::swap(u[i1], u[i2]); }
  void swap_cols(int j1, int j2) {
    for (int i = 0; i < r; ++i) std::swap(d[i][j1], d[i][j2]);
    for (int i = 0; i < c; ++i) std::swap(v[i][j1], v[i][j2]);
  }
  void row_axpy(int dst, int src, i128 q) {  // row dst -= q * row src
    for (int j = 0; j < c; ++j) d[dst][j] = checked(d[dst][j] - q * d[src][j]);
    for (int j = 0; j < r; ++j) u[dst][j] = checked(u[dst][j] - q * u[src][j]);
  }
  void col_axpy(int dst, int src, i128 q) {
    for (int i = 0; i < r; ++i) d[i][dst] = checked(d[i][dst] - q * d[i][src]);
    for (int i = 0; i < c; ++i) v[i][dst] = checked(v[i][dst] - q * v[i][src]);
  }
  void neg_row(int i) {
    for (int j = 0; j < c; ++j) d[i][j] = -d[i][j];
    for (int j = 0; j < r; ++j) u[i][j] = -u[i][j];
  }

  // squared norms and dot products of the active parts, in long double; only
  // used to pick candidate reductions, every acceptance is re-checked exactly
  long double rnd(int i, int fc) const {
    long double s = 0;
    for (int j = fc; j < c; ++j) { const long double x = static_cast<long double>(d[i][j]); s += x * x; }
    return s;
  }
  long double rdd(int i, int k, int fc) const {
    long double s = 0;
    for (int j = fc; j < c; ++j)
      s += static_cast<long double>(d[i][j]) * static_cast<long double>(d[k][j]);
    return s;
  }
  long double rnu(int i) const {
    long double s = 0;
    for (int j = 0; j < r; ++j) { const long double x = static_cast<long double>(u[i][j]); s += x * x; }
    return s;
  }
  long double rdu(int i, int k) const {
    long double s = 0;
    for (int j = 0; j < r; ++j)
      s += static_cast<long double>(u[i][j]) * static_cast<long double>(u[k][j]);
    return s;
  }
  long double cnd(int j, int fr) const {
    long double s = 0;
    for (int i = fr; i < r; ++i) { const long double x = static_cast<long double>(d[i][j]); s += x * x; }
    return s;
  }
  long double cdd(int j, int k, int fr) const {
    long double s = 0;
    for (int i = fr; i < r; ++i)
      s += static_cast<long double>(d[i][j]) * static_cast<long double>(d[i][k]);
    return s;
  }
  long double cnv(int j) const {
    long double s = 0;
    for (int i = 0; i < c; ++i) { const long double x = static_cast<long double>(v[i][j]); s += x * x; }
    return s;
  }
  long double cdv(int j, int k) const {
    long double s = 0;
    for (int i = 0; i < c; ++i)
      s += static_cast<long double>(v[i][j]) * static_cast<long double>(v[i][k]);
    return s;
  }

  static i128 round_quotient(long double t) {
    // callers skip the candidate when the ratio is degenerate or huge
    return static_cast<i128>(llroundl(t));
  }
  static bool usable(long double t) { return t > -4.0e18L && t < 4.0e18L && t == t; }

  // pairwise size reduction of rows >= from. Rows past the current step share
  // a zero prefix in d, so integer combinations of them stay legal. The
  // objective weighs the d part and the u part, each normalized by the active
  // set's own scale so neither side dominates.
  void reduce_rows(int from) {
    for (int pass = 0; pass < 200; ++pass) {
      long double sd = 1, su = 1;
      for (int i = from; i < r; ++i) {
        sd = std::max(sd, rnd(i, from));
        su = std::max(su, rnu(i));
      }
      bool any = false;
      for (int i = from; i < r; ++i)
        for (int k = from; k < r; ++k) {
          if (i == k) continue;
          const long double denom = rnd(k, from) / sd + rnu(k) / su;
          if (denom <= 0) continue;
          const long double t = (rdd(i, k, from) / sd + rdu(i, k) / su) / denom;
          if (!usable(t)) continue;
          const i128 q = round_quotient(t);
          if (q == 0) continue;
          const long double before = rnd(i, from) / sd + rnu(i) / su;
          row_axpy(i, k, q);
          if (rnd(i, from) / sd + rnu(i) / su < before * (1.0L - 1e-9L)) any = true;
          else row_axpy(i, k, -q);
        }
      if (!any) break;
    }
  }
  void reduce_cols(int from) {
    for (int pass = 0; pass < 200; ++pass) {
      long double sd = 1, sv = 1;
      for (int j = from; j < c; ++j) {
        sd = std::max(sd, cnd(j, from));
        sv = std::max(sv, cnv(j));
      }
      bool any = false;
      for (int j = from; j < c; ++j)
        for (int k = from; k < c; ++k) {
          if (j == k) continue;
          const long double denom = cnd(k, from) / sd + cnv(k) / sv;
          if (denom <= 0) continue;
          const long double t = (cdd(j, k, from) / sd + cdv(j, k) / sv) / denom;
          if (!usable(t)) continue;
          const i128 q = round_quotient(t);
          if (q == 0) continue;
          const long double before = cnd(j, from) / sd + cnv(j) / sv;
          col_axpy(j, k, q);
          if (cnd(j, from) / sd + cnv(j) / sv < before * (1.0L - 1e-9L)) any = true;
          else col_axpy(j, k, -q);
        }
      if (!any) break;
    }
  }

  // rows/cols past the rank have a zero d part, so folding them into the rank
  // block touches only the multiplier: shrink u's rank rows against the null
  // rows and v's rank cols against the null cols
  void null_reduce(int rank) {
    for (int pass = 0; pass < 200; ++pass) {
      bool any = false;
      for (int i = 0; i < rank; ++i)
        for (int k = rank; k < r; ++k) {
          const long double nk = rnu(k);
          if (nk <= 0) continue;
          const long double t = rdu(i, k) / nk;
          if (!usable(t)) continue;
          const i128 q = round_quotient(t);
          if (q == 0) continue;
          const long double before = rnu(i);
          row_axpy(i, k, q);
          if (rnu(i) < before * (1.0L - 1e-9L)) any = true;
          else row_axpy(i, k, -q);
        }
      for (int j = 0; j < rank; ++j)
        for (int k = rank; k < c; ++k) {
          const long double nk = cnv(k);
          if (nk <= 0) continue;
          const long double t = cdv(j, k) / nk;
          if (!usable(t)) continue;
          const i128 q = round_quotient(t);
          if (q == 0) continue;
          const long double before = cnv(j);
          col_axpy(j, k, q);
          if (cnv(j) < before * (1.0L - 1e-9L)) any = true;
          else col_axpy(j, k, -q);
        }
      if (!any) break;
    }
  }

  int run() {
    const int steps = std::min(r, c);
    int t = 0;
    for (; t < steps; ++t) {
      bool empty = false;
      // once the budget is spent the inner loop falls back to plain clearing
      // sweeps, whose pivots strictly shrink, so termination is guaranteed
      int budget = 4;
      for (bool done = false; !done;) {
        int pi = -1, pj = -1;
        for (int i = t; i < r; ++i)
          for (int j = t; j < c; ++j)
            if (d[i][j] != 0 && (pi < 0 || iabs_i128(d[i][j]) < iabs_i128(d[pi][pj]))) {
              pi = i;
              pj = j;
            }
        if (pi < 0) { empty = true; break; }
        if (pi != t) swap_rows(t, pi);
        if (pj != t) swap_cols(t, pj);
        bool dirty = false;
        for (int i = t + 1; i < r; ++i) {
          if (d[i][t] == 0) continue;
          const i128 q = rounded_div_i128(d[i][t], d[t][t]);
          if (q != 0) row_axpy(i, t, q);
          if (d[i][t] != 0) dirty = true;
        }
        if (dirty) {
          if (budget > 0) { --budget; reduce_rows(t + 1); reduce_cols(t + 1); }
          continue;
        }
        for (int j = t + 1; j < c; ++j) {
          if (d[t][j] == 0) continue;
          const i128 q = rounded_div_i128(d[t][j], d[t][t]);
          if (q != 0) col_axpy(j, t, q);
          if (d[t][j] != 0) dirty = true;
        }
        if (dirty) {
          if (budget > 0) { --budget; reduce_rows(t + 1); reduce_cols(t + 1); }
          continue;
        }
        done = true;
        // divisibility driving: fold a non-dividing trailing row into the
        // pivot row and re-clear; the resulting pivot divides the offender,
        // so the finished diagonal satisfies the chain by construction
        for (int i = t + 1; i < r && done; ++i)
          for (int j = t + 1; j < c && done; ++j)
            if (d[i][j] % d[t][t] != 0) {
              row_axpy(t, i, -1);
              done = false;
            }
      }
      if (empty) break;
      if (d[t][t] < 0) neg_row(t);
      reduce_rows(t + 1);
      reduce_cols(t + 1);
    }
    null_reduce(t);
    return t;
  }
};

}  // namespace detail

inline SmithResult smith_normal_form(const std::vector<std::vector<long long>>& a) {
  const int r = static_cast<int>(a.size());
  const int c = r > 0 ? static_cast<int>(a[0].size()) : 0;
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != c) throw ShapeError("smith_normal_form: ragged input");

  detail::SmithWork w;
  w.r = r;
  w.c = c;
  w.d.assign(r, std::vector<detail::i128>(c, 0));
  w.u.assign(r, std::vector<detail::i128>(r, 0));
  w.v.assign(c, std::vector<detail::i128>(c, 0));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) w.d[i][j] = detail::SmithWork::checked(a[i][j]);
  for (int i = 0; i < r; ++i) w.u[i][i] = 1;
  for (int j = 0; j < c; ++j) w.v[j][j] = 1;

  SmithResult out;
  out.rows = r;
  out.cols = c;
  out.rank = w.run();
  out.u.assign(r, std::vector<long long>(r, 0));
  out.d.assign(r, std::vector<long long>(c, 0));
  out.v.assign(c, std::vector<long long>(c, 0));
  // the in-loop guard already bounds every entry below 2^62
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) out.u[i][j] = static_cast<long long>(w.u[i][j]);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) out.d[i][j] = static_cast<long long>(w.d[i][j]);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) out.v[i][j] = static_cast<long long>(w.v[i][j]);
  return out;
}

// Solve a x = b (mod m) column by column. The congruence lifts to the integer
// system [a | m I] (x; w) = b, whose invariant factors all divide m, so the
// Smith form stays small however large the entries of a scale up. Free
// variables are pinned to zero so the output is deterministic. Returns
// nullopt when any column is unsolvable.
inline std::optional<DenseMatrix<ModDomain>> solve_mod_linear(const DenseMatrix<ModDomain>& a,
                                                              const DenseMatrix<ModDomain>& b) {
  require_same_domain(a.domain(), b.domain(), "solve_mod_linear");
  if (a.rows() != b.rows()) throw ShapeError("solve_mod_linear: row mismatch");
  const long long m = a.domain().modulus;
  const int r = a.rows(), c = a.cols(), w = b.cols();
  const int n = c + r;  // lifted unknowns: x plus one slack per congruence

  std::vector<std::vector<long long>> am(static_cast<std::size_t>(r),
                                         std::vector<long long>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) am[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a.at(i, j);
    am[static_cast<std::size_t>(i)][static_cast<std::size_t>(c + i)] = m;
  }
  const SmithResult s = smith_normal_form(am);  // full row rank: m I is in the span

  auto mod_pos = [&](long long x) { const long long t = x % m; return t < 0 ? t + m : t; };

  DenseMatrix<ModDomain> x(c, w, a.domain());
  std::vector<long long> cvec(static_cast<std::size_t>(r), 0);
  std::vector<long long> y(static_cast<std::size_t>(n), 0);
  for (int col = 0; col < w; ++col) {
    // cvec = u * b reduced mod m; each diagonal divides m, so reducing first
    // changes the quotient only by a multiple of m / d[i][i], which the final
    // mod m absorbs
    for (int i = 0; i < r; ++i) {
      detail::i128 acc = 0;
      for (int j = 0; j < r; ++j) {
        const long long uij = mod_pos(s.u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % m);
        acc = (acc + static_cast<detail::i128>(uij) * b.at(j, col)) % m;
      }
      cvec[static_cast<std::size_t>(i)] = mod_pos(static_cast<long long>(acc));
    }
    std::fill(y.begin(), y.end(), 0LL);
    bool ok = true;
    for (int i = 0; i < r && ok; ++i) {
      const long long di = (i < s.rank) ? s.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] : 0;
      const long long ci = cvec[static_cast<std::size_t>(i)];
      if (di == 0) {
        if (ci != 0) ok = false;
        continue;
      }
      if (ci % di != 0) { ok = false; continue; }
      y[static_cast<std::size_t>(i)] = ci / di;
    }
    if (!ok) return std::nullopt;
    for (int i = 0; i < c; ++i) {
      detail::i128 acc = 0;
      for (int j = 0; j < n; ++j) {
        const long long vij = mod_pos(s.v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] % m);
        acc = (acc + static_cast<detail::i128>(vij) * y[static_cast<std::size_t>(j)]) % m;
      }
      x.at(i, col) = mod_pos(static_cast<long long>(acc));
    }
  }
  return x;
}

}  // namespace tcube
