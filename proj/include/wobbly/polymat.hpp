#pragma once

#include <algorithm>
#include <cstdlib>

#include <vector>

#include "wobbly/linalg.hpp"
#include "wobbly/poly.hpp"

namespace wobbly::alg {

// Matrix of polynomials, row major. Columns are the module generators in all
// lattice computations.
struct PolyMat {
  int rows = 0;
  int cols = 0;
  std::vector<Poly> e;

  PolyMat() = default;
  PolyMat(int r, int c) : rows(r), cols(c), e(static_cast<size_t>(r) * c) {}

  Poly& at(int r, int c) { return e[static_cast<size_t>(r) * cols + c]; }
  const Poly& at(int r, int c) const { return e[static_cast<size_t>(r) * cols + c]; }

  static PolyMat identity(const PolyRing& R, int n) {
    PolyMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = R.one();
    return m;
  }
  int col_degree(int c) const {
    int d = -1;
    for (int r = 0; r < rows; ++r) d = std::max(d, at(r, c).degree());
    return d;
  }
  int max_degree() const {
    int d = -1;
    for (const auto& p : e) d = std::max(d, p.degree());
    return d;
  }
  bool col_is_zero(int c) const {
    for (int r = 0; r < rows; ++r)
      if (!at(r, c).is_zero()) return false;
    return true;
  }
};

inline PolyMat pm_mul(const PolyRing& R, const PolyMat& A, const PolyMat& B) {
  require(A.cols == B.rows, ErrorKind::Internal, "pm_mul shape");
  PolyMat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      if (A.at(i, k).is_zero()) continue;
      for (int j = 0; j < B.cols; ++j)
        if (!B.at(k, j).is_zero())
          C.at(i, j) = R.add(C.at(i, j), R.mul(A.at(i, k), B.at(k, j)));
    }
  return C;
}

inline PolyMat pm_sub(const PolyRing& R, const PolyMat& A, const PolyMat& B) {
  PolyMat C(A.rows, A.cols);
  for (size_t i = 0; i < C.e.size(); ++i) C.e[i] = R.sub(A.e[i], B.e[i]);
  return C;
}

// Determinant by cofactor expansion; fine for the rank <= 4 matrices used
// throughout.
inline Poly pm_det(const PolyRing& R, const PolyMat& M) {
  require(M.rows == M.cols, ErrorKind::Internal, "det of non-square");
  int n = M.rows;
  if (n == 0) return R.one();
  if (n == 1) return M.at(0, 0);
  Poly acc;
  for (int c = 0; c < n; ++c) {
    if (M.at(0, c).is_zero()) continue;
    PolyMat sub(n - 1, n - 1);
    for (int i = 1; i < n; ++i) {
      int jc = 0;
      for (int j = 0; j < n; ++j) {
        if (j == c) continue;
        sub.at(i - 1, jc++) = M.at(i, j);
      }
    }
    Poly term = R.mul(M.at(0, c), pm_det(R, sub));
    acc = (c % 2 == 0) ? R.add(acc, term) : R.sub(acc, term);
  }
  return acc;
}

// Adjugate: adj(M) * M = det(M) * I.
inline PolyMat pm_adj(const PolyRing& R, const PolyMat& M) {
  int n = M.rows;
  PolyMat A(n, n);
  if (n == 1) {
    A.at(0, 0) = R.one();
    return A;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PolyMat sub(n - 1, n - 1);
      int ri = 0;
      for (int r = 0; r < n; ++r) {
        if (r == i) continue;
        int ci = 0;
        for (int c = 0; c < n; ++c) {
          if (c == j) continue;
          sub.at(ri, ci++) = M.at(r, c);
        }
        ++ri;
      }
      Poly cof = pm_det(R, sub);
      if ((i + j) % 2 == 1) cof = R.neg(cof);
      A.at(j, i) = cof;  // transpose of cofactor matrix
    }
  return A;
}

// Pivot row of a column: the largest row index among entries of maximal
// degree (so pivots are well defined for ties).
inline int pivot_row(const PolyMat& M, int c) {
  int d = M.col_degree(c);
  if (d < 0) return -1;
  int pi = -1;
  for (int r = 0; r < M.rows; ++r)
    if (M.at(r, c).degree() == d) pi = r;
  return pi;
}

struct PopovResult {
  PolyMat basis;  // rows x rank, column reduced (weak Popov)
  PolyMat trans;  // cols(G) x rank cofactor matrix: basis = G * trans
};

// Weak Popov form of the column module of G (Mulders-Storjohann simple
// transformations). The output columns generate the same F_p[x]-module; a
// cofactor matrix over F_p[x] with basis = G * trans is returned so callers
// can check the reduction. Throws RankDeficient when the module has rank
// below expected_rank (pass -1 to accept whatever rank shows up).
inline PopovResult weak_popov_reduce(const PolyRing& R, PolyMat G, int expected_rank) {
  const int m = G.cols;
  PolyMat U = PolyMat::identity(R, m);
  bool changed = true;
  while (changed) {
    changed = false;
    // find two columns with the same pivot row; reduce the higher-degree one
    for (int c1 = 0; c1 < m; ++c1) {
      int p1 = pivot_row(G, c1);
      if (p1 < 0) continue;
      for (int c2 = 0; c2 < m; ++c2) {
        if (c2 == c1) continue;
        int p2 = pivot_row(G, c2);
        if (p2 != p1) continue;
        int d1 = G.col_degree(c1), d2 = G.col_degree(c2);
        int hi = (d1 >= d2) ? c1 : c2;
        int lo = (d1 >= d2) ? c2 : c1;
        int shift = std::abs(d1 - d2);
        uint32_t q = R.F.div(G.at(p1, hi).lead(), G.at(p1, lo).lead());
        Poly factor = R.monomial(shift, q);
        for (int r = 0; r < G.rows; ++r)
          G.at(r, hi) = R.sub(G.at(r, hi), R.mul(factor, G.at(r, lo)));
        for (int r = 0; r < m; ++r)
          U.at(r, hi) = R.sub(U.at(r, hi), R.mul(factor, U.at(r, lo)));
        changed = true;
        break;
      }
      if (changed) break;
    }
  }
  std::vector<int> keep;
  for (int c = 0; c < m; ++c)
    if (!G.col_is_zero(c)) keep.push_back(c);
  if (expected_rank >= 0 && static_cast<int>(keep.size()) != expected_rank)
    fail(ErrorKind::RankDeficient, "module rank " + std::to_string(keep.size()) +
                                       " != expected " + std::to_string(expected_rank));
  // stable order: sort surviving columns by pivot row for a canonical-ish basis
  std::sort(keep.begin(), keep.end(),
            [&](int a, int b) { return pivot_row(G, a) < pivot_row(G, b); });
  PopovResult out;
  out.basis = PolyMat(G.rows, static_cast<int>(keep.size()));
  out.trans = PolyMat(m, static_cast<int>(keep.size()));
  for (size_t k = 0; k < keep.size(); ++k) {
    for (int r = 0; r < G.rows; ++r) out.basis.at(r, static_cast<int>(k)) = G.at(r, keep[k]);
    for (int r = 0; r < m; ++r) out.trans.at(r, static_cast<int>(k)) = U.at(r, keep[k]);
  }
  // normalize pivots monic
  for (int c = 0; c < out.basis.cols; ++c) {
    int pr = pivot_row(out.basis, c);
    uint32_t l = out.basis.at(pr, c).lead();
    if (l != 1) {
      uint32_t s = R.F.inv(l);
      for (int r = 0; r < out.basis.rows; ++r)
        out.basis.at(r, c) = R.scale(out.basis.at(r, c), s);
      for (int r = 0; r < out.trans.rows; ++r)
        out.trans.at(r, c) = R.scale(out.trans.at(r, c), s);
    }
  }
  return out;
}

inline FpMat pm_eval(const Fp& F, const PolyRing& R, const PolyMat& M, uint32_t x0) {
  FpMat out(M.rows, M.cols);
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) out.at(i, j) = R.eval(M.at(i, j), x0);
  return out;
}

}  // namespace wobbly::alg
