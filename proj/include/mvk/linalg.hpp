#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "mvk/common.hpp"

namespace mvk {

using Rat = boost::multiprecision::cpp_rational;

using IntVec = std::vector<Int>;
using IntMat = std::vector<IntVec>;
using RatMat = std::vector<std::vector<Rat>>;

inline Int dot(const IntVec& a, const IntVec& b) {
  Int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Int vec_gcd(const IntVec& v) {
  Int g = 0;
  for (const Int& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

/// Divide out the content; the zero vector stays zero.
inline IntVec primitive(IntVec v) {
  Int g = vec_gcd(v);
  if (g > 1)
    for (Int& x : v) x /= g;
  return v;
}

/// Row echelon form over Q, in place. Returns the pivot column of each
/// processed row; the rank is the number of pivots.
inline std::vector<std::size_t> row_echelon(RatMat& m) {
  std::vector<std::size_t> pivots;
  if (m.empty()) return pivots;
  std::size_t rows = m.size(), cols = m[0].size(), r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[r]);
    Rat inv = m[r][c];
    for (std::size_t j = c; j < cols; ++j) m[r][j] /= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      Rat f = m[i][c];
      for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank(const IntMat& rows, std::size_t cols) {
  RatMat m;
  for (const auto& r : rows) {
    m.emplace_back(r.begin(), r.end());
    m.back().resize(cols);
  }
  return row_echelon(m).size();
}

/// Primitive integer basis of the right kernel {v : rows * v = 0}.
inline std::vector<IntVec> kernel_basis(const IntMat& rows, std::size_t cols) {
  RatMat m;
  for (const auto& r : rows) {
    m.emplace_back(r.begin(), r.end());
    m.back().resize(cols);
  }
  auto pivots = row_echelon(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<IntVec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rat> v(cols, 0);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -m[i][free];
    Int lcm = 1;
    for (const Rat& x : v)
      lcm = boost::multiprecision::lcm(lcm, Int(boost::multiprecision::denominator(x)));
    IntVec iv(cols);
    for (std::size_t j = 0; j < cols; ++j) {
      Rat s = v[j] * lcm;
      iv[j] = Int(boost::multiprecision::numerator(s));
    }
    basis.push_back(primitive(std::move(iv)));
  }
  return basis;
}

/// Exact phase-1 simplex: is {x >= 0 : eq * x = rhs} non-empty? Bland's rule,
/// so termination is unconditional. Sizes here are tiny (<= 9 x 16).
inline bool lp_feasible(const RatMat& eq, const std::vector<Rat>& rhs) {
  std::size_t m = eq.size();
  if (m == 0) return true;
  std::size_t n = eq[0].size();

  // tableau over columns [x | artificial | rhs], artificial start basic
  RatMat t(m, std::vector<Rat>(n + m + 1, 0));
  for (std::size_t i = 0; i < m; ++i) {
    bool neg = rhs[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = neg ? -eq[i][j] : eq[i][j];
    t[i][n + i] = 1;
    t[i][n + m] = neg ? -rhs[i] : rhs[i];
  }
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // reduced-cost row for minimizing the sum of artificials
  std::vector<Rat> z(n + m + 1, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j <= n + m; ++j) z[j] += t[i][j];
  for (std::size_t j = n; j < n + m; ++j) z[j] -= 1;

  while (true) {
    std::size_t enter = n + m;
    for (std::size_t j = 0; j < n + m; ++j)
      if (z[j] > 0) {
        enter = j;
        break;
      }
    if (enter == n + m) break;
    std::size_t leave = m;
    Rat best = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= 0) continue;
      Rat ratio = t[i][n + m] / t[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave]))
        leave = i, best = ratio;
    }
    if (leave == m) break;  // unbounded direction; cannot happen in phase 1
    Rat piv = t[leave][enter];
    for (auto& v : t[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || t[i][enter] == 0) continue;
      Rat f = t[i][enter];
      for (std::size_t j = 0; j <= n + m; ++j) t[i][j] -= f * t[leave][j];
    }
    Rat fz = z[enter];
    if (fz != 0)
      for (std::size_t j = 0; j <= n + m; ++j) z[j] -= fz * t[leave][j];
    basis[leave] = enter;
  }
  return z[n + m] == 0;
}

}  // namespace mvk
