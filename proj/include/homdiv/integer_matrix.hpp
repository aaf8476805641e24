#pragma once

// Exact integer linear algebra: rank and a canonical primitive kernel vector
// by fraction-free Gauss-Jordan elimination, plus gcd helpers.

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "homdiv/errors.hpp"

namespace homdiv {

using IntVector = std::vector<std::int64_t>;
/// Row-major integer matrix; the column count is carried separately so that
/// matrices with zero rows are representable.
struct IntMatrix {
  std::size_t columns = 0;
  std::vector<IntVector> rows;
};

namespace detail {

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in elimination");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow in elimination");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflow("integer overflow");
  return r;
}

inline std::int64_t content(const IntVector& v) {
  std::int64_t g = 0;
  for (auto x : v) g = std::gcd(g, x);
  return g;
}

}  // namespace detail

/// (g, u, v) with u*a + v*b = g = gcd(a, b) >= 0.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> extended_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
    std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
    std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

/// Divides by the entry gcd and flips the sign so the first nonzero entry is
/// positive. The zero vector is returned unchanged.
inline IntVector primitive(IntVector v) {
  const std::int64_t g = detail::content(v);
  if (g == 0) return v;
  std::int64_t sign = 1;
  for (auto x : v)
    if (x != 0) {
      sign = x < 0 ? -1 : 1;
      break;
    }
  for (auto& x : v) x = x / g * sign;
  return v;
}

struct RankKernel {
  std::size_t rank = 0;
  /// Present iff rank < columns: the primitive, sign-normalized kernel
  /// vector belonging to the first free column.
  std::optional<IntVector> kernel;
};

/// Fraction-free Gauss-Jordan elimination. After reduction every pivot column
/// is zero outside its pivot row, so the result is a scaled copy of the
/// rational reduced row echelon form and the kernel vector chosen from it
/// depends only on the row space.
inline RankKernel integer_rank_and_kernel(const IntMatrix& m) {
  std::vector<IntVector> a = m.rows;
  for (const auto& row : a)
    if (row.size() != m.columns) throw ParseError("matrix row length does not match column count");
  std::vector<std::size_t> pivot_col;
  std::size_t prow = 0;
  for (std::size_t c = 0; c < m.columns && prow < a.size(); ++c) {
    std::size_t r = prow;
    while (r < a.size() && a[r][c] == 0) ++r;
    if (r == a.size()) continue;
    std::swap(a[r], a[prow]);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == prow || a[i][c] == 0) continue;
      const std::int64_t g = std::gcd(a[prow][c], a[i][c]);
      const std::int64_t keep = a[prow][c] / g, drop = a[i][c] / g;
      for (std::size_t j = 0; j < m.columns; ++j)
        a[i][j] = detail::checked_sub(detail::checked_mul(keep, a[i][j]), detail::checked_mul(drop, a[prow][j]));
      if (const auto content = detail::content(a[i]); content > 1)
        for (auto& x : a[i]) x /= content;
    }
    pivot_col.push_back(c);
    ++prow;
  }
  RankKernel out;
  out.rank = pivot_col.size();
  if (out.rank == m.columns) return out;

  std::size_t free = 0;
  for (std::size_t k = 0; k < pivot_col.size() && pivot_col[k] == free; ++k) ++free;
  std::int64_t scale = 1;
  for (std::size_t k = 0; k < pivot_col.size(); ++k) {
    const std::int64_t p = std::llabs(a[k][pivot_col[k]]);
    scale = detail::checked_mul(scale / std::gcd(scale, p), p);
  }
  IntVector v(m.columns, 0);
  v[free] = scale;
  for (std::size_t k = 0; k < pivot_col.size(); ++k)
    v[pivot_col[k]] = -detail::checked_mul(a[k][free], scale / a[k][pivot_col[k]]);
  out.kernel = primitive(std::move(v));
  return out;
}

}  // namespace homdiv
