#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "nrgit/polynomial.hpp"

namespace nrgit {

using QVector = std::vector<Rational>;
using QMatrix = std::vector<QVector>;

// Reduced row echelon form in place; returns pivot columns.
inline std::vector<size_t> rref(QMatrix& m, size_t ncols) {
  std::vector<size_t> pivots;
  size_t row = 0;
  for (size_t col = 0; col < ncols && row < m.size(); ++col) {
    size_t piv = row;
    while (piv < m.size() && m[piv][col] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[row], m[piv]);
    Rational inv = 1 / m[row][col];
    for (size_t c = col; c < ncols; ++c) m[row][c] *= inv;
    for (size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      Rational f = m[r][col];
      for (size_t c = col; c < ncols; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

inline size_t rank(QMatrix m, size_t ncols) { return rref(m, ncols).size(); }

// Basis of {v : m v = 0}.
inline std::vector<QVector> nullspace(QMatrix m, size_t ncols) {
  auto piv = rref(m, ncols);
  std::vector<bool> is_piv(ncols, false);
  for (size_t p : piv) is_piv[p] = true;
  std::vector<QVector> out;
  for (size_t f = 0; f < ncols; ++f) {
    if (is_piv[f]) continue;
    QVector v(ncols, 0);
    v[f] = 1;
    for (size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -m[r][f];
    out.push_back(v);
  }
  return out;
}

// Basis of {y : y^T m = 0} for an nrows x ncols matrix.
inline std::vector<QVector> left_nullspace(const QMatrix& m, size_t nrows, size_t ncols) {
  QMatrix t(ncols, QVector(nrows, 0));
  for (size_t i = 0; i < nrows; ++i)
    for (size_t j = 0; j < ncols; ++j) t[j][i] = m[i][j];
  return nullspace(t, nrows);
}

// Particular solution of m x = b with free variables set to zero.
inline std::optional<QVector> solve(const QMatrix& m, const QVector& b, size_t ncols) {
  QMatrix aug = m;
  for (size_t r = 0; r < aug.size(); ++r) aug[r].push_back(b[r]);
  auto piv = rref(aug, ncols + 1);
  if (!piv.empty() && piv.back() == ncols) return std::nullopt;
  QVector x(ncols, 0);
  for (size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug[r][ncols];
  return x;
}

// Determinant by Laplace expansion along rows, memoised on the column set.
inline Polynomial determinant(const std::vector<std::vector<Polynomial>>& m, const RingPtr& ring) {
  const size_t n = m.size();
  if (n == 0) return Polynomial::constant(ring, 1);
  std::map<unsigned long, Polynomial> memo;
  std::function<Polynomial(size_t, unsigned long)> rec = [&](size_t row, unsigned long used) -> Polynomial {
    if (row == n) return Polynomial::constant(ring, 1);
    auto it = memo.find(used);
    if (it != memo.end()) return it->second;
    Polynomial s(ring);
    int sign = 1;
    for (size_t c = 0; c < n; ++c) {
      if (used & (1UL << c)) continue;
      if (!m[row][c].is_zero()) {
        Polynomial sub = rec(row + 1, used | (1UL << c));
        if (!sub.is_zero()) s += (sign > 0 ? m[row][c] : -m[row][c]) * sub;
      }
      sign = -sign;
    }
    memo.emplace(used, s);
    return s;
  };
  return rec(0, 0);
}

inline void for_each_subset(size_t n, size_t k, const std::function<void(const std::vector<size_t>&)>& f) {
  std::vector<size_t> idx(k);
  for (size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// All k x k minors of an r x c matrix, row subsets outermost.
inline std::vector<Polynomial> minors(const std::vector<std::vector<Polynomial>>& m, size_t rows, size_t cols,
                                      size_t k, const RingPtr& ring) {
  std::vector<Polynomial> out;
  if (k == 0) {
    out.push_back(Polynomial::constant(ring, 1));
    return out;
  }
  if (k > rows || k > cols) return out;
  for_each_subset(rows, k, [&](const std::vector<size_t>& rs) {
    for_each_subset(cols, k, [&](const std::vector<size_t>& cs) {
      std::vector<std::vector<Polynomial>> sub(k, std::vector<Polynomial>(k, Polynomial(ring)));
      for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) sub[i][j] = m[rs[i]][cs[j]];
      out.push_back(determinant(sub, ring));
    });
  });
  return out;
}

}  // namespace nrgit
