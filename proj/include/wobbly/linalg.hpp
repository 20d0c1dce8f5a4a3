#pragma once

#include <optional>

#include <vector>

#include "wobbly/fp.hpp"

namespace wobbly::alg {

// Dense matrix over F_p, row major.
struct FpMat {
  int rows = 0;
  int cols = 0;
  std::vector<uint32_t> a;

  FpMat() = default;
  FpMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  uint32_t& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  uint32_t at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

  static FpMat identity(int n) {
    FpMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }
};

inline FpMat mat_mul(const Fp& F, const FpMat& A, const FpMat& B) {
  require(A.cols == B.rows, ErrorKind::Internal, "mat_mul shape");
  FpMat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      uint64_t v = A.at(i, k);
      if (!v) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = F.add(C.at(i, j), static_cast<uint32_t>(v * B.at(k, j) % F.p));
    }
  return C;
}

// In-place reduced row echelon form; returns pivot columns.
inline std::vector<int> rref(const Fp& F, FpMat& M) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < M.cols && r < M.rows; ++c) {
    int sel = -1;
    for (int i = r; i < M.rows; ++i)
      if (M.at(i, c) != 0) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r)
      for (int j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(r, j));
    uint32_t inv = F.inv(M.at(r, c));
    for (int j = c; j < M.cols; ++j) M.at(r, j) = F.mul(M.at(r, j), inv);
    for (int i = 0; i < M.rows; ++i) {
      if (i == r || M.at(i, c) == 0) continue;
      uint32_t t = M.at(i, c);
      for (int j = c; j < M.cols; ++j)
        M.at(i, j) = F.sub(M.at(i, j), F.mul(t, M.at(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline int rank(const Fp& F, FpMat M) { return static_cast<int>(rref(F, M).size()); }

// Basis of the right kernel {v : M v = 0}. Every returned vector is checked
// against M, and dim is checked against rank-nullity.
inline std::vector<std::vector<uint32_t>> kernel_basis(const Fp& F, const FpMat& M0) {
  FpMat M = M0;
  std::vector<int> piv = rref(F, M);
  std::vector<bool> is_piv(M.cols, false);
  for (int c : piv) is_piv[c] = true;
  std::vector<std::vector<uint32_t>> basis;
  for (int fc = 0; fc < M.cols; ++fc) {
    if (is_piv[fc]) continue;
    std::vector<uint32_t> v(M.cols, 0);
    v[fc] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = F.neg(M.at(static_cast<int>(r), fc));
    basis.push_back(std::move(v));
  }
  require(static_cast<int>(basis.size()) == M.cols - static_cast<int>(piv.size()),
          ErrorKind::Internal, "kernel: rank-nullity violated");
  for (const auto& v : basis)
    for (int i = 0; i < M0.rows; ++i) {
      uint64_t s = 0;
      for (int j = 0; j < M0.cols; ++j) s += static_cast<uint64_t>(M0.at(i, j)) * v[j] % F.p;
      require(s % F.p == 0, ErrorKind::Internal, "kernel vector not annihilated");
    }
  return basis;
}

// Solve M x = b; nullopt when inconsistent. Returns one solution.
inline std::optional<std::vector<uint32_t>> solve(const Fp& F, const FpMat& M0,
                                                  const std::vector<uint32_t>& b) {
  FpMat M(M0.rows, M0.cols + 1);
  for (int i = 0; i < M0.rows; ++i) {
    for (int j = 0; j < M0.cols; ++j) M.at(i, j) = M0.at(i, j);
    M.at(i, M0.cols) = b[i] % F.p;
  }
  std::vector<int> piv = rref(F, M);
  for (int c : piv)
    if (c == M0.cols) return std::nullopt;
  std::vector<uint32_t> x(M0.cols, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = M.at(static_cast<int>(r), M0.cols);
  return x;
}

}  // namespace wobbly::alg
