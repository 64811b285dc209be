#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "starsolve/errors.hpp"
#include "starsolve/matrix.hpp"

namespace starsolve {

/// Relative pivot threshold for the float backend: a candidate pivot is
/// treated as zero when its magnitude is <= this times the max-abs entry.
inline constexpr double kPivotThreshold = 1e-12;

/// m = F * G with F (rows x rank) of full column rank and G (rank x cols)
/// of full row rank. G is the nonzero part of the reduced row echelon form
/// and F collects the pivot columns of m.
template <Scalar S>
struct RankFactorization {
  Matrix<S> F;
  Matrix<S> G;
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_columns;
};

namespace detail {

/// Gauss-Jordan reduction in place. Returns pivot columns.
template <Scalar S>
std::vector<std::size_t> reduce_to_rref(Matrix<S>& w, double scale) {
  const double threshold = kPivotThreshold * scale;
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < w.cols() && row < w.rows(); ++col) {
    std::optional<std::size_t> best;
    if constexpr (is_exact_v<S>) {
      for (std::size_t i = row; i < w.rows(); ++i)
        if (!w(i, col).is_zero()) {
          best = i;
          break;
        }
    } else {
      double best_mag = threshold;
      for (std::size_t i = row; i < w.rows(); ++i) {
        double mag = w(i, col).magnitude();
        if (mag > best_mag) {
          best_mag = mag;
          best = i;
        }
      }
    }
    if (!best) {
      if constexpr (!is_exact_v<S>)
        for (std::size_t i = row; i < w.rows(); ++i) w(i, col) = S{};
      continue;
    }
    if (*best != row)
      for (std::size_t j = 0; j < w.cols(); ++j) std::swap(w(row, j), w(*best, j));

    S inv = w(row, col).inverse();
    for (std::size_t j = col; j < w.cols(); ++j) w(row, j) = w(row, j) * inv;
    w(row, col) = S(1);
    for (std::size_t i = 0; i < w.rows(); ++i) {
      if (i == row || w(i, col).is_zero()) continue;
      S factor = w(i, col);
      for (std::size_t j = col; j < w.cols(); ++j) w(i, j) -= factor * w(row, j);
      w(i, col) = S{};
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Inverse of a square matrix, or nullopt when singular (pivot-threshold
/// singular on the float backend).
template <Scalar S>
std::optional<Matrix<S>> try_inverse(const Matrix<S>& m) {
  const std::size_t n = m.rows();
  if (n == 0) return m;
  Matrix<S> aug(n, 2 * n, m.involution());
  aug.set_block(0, 0, m);
  for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = S(1);
  auto pivots = reduce_to_rref(aug, m.max_abs());
  if (pivots.size() < n || pivots.back() >= n) return std::nullopt;
  return aug.block(0, n, n, n);
}

}  // namespace detail

template <Scalar S>
RankFactorization<S> rank_factorization(const Matrix<S>& m) {
  Matrix<S> w = m;
  auto pivots = detail::reduce_to_rref(w, m.max_abs());
  const std::size_t r = pivots.size();
  RankFactorization<S> out;
  out.rank = r;
  out.G = w.block(0, 0, r, m.cols());
  out.F = Matrix<S>(m.rows(), r, m.involution());
  for (std::size_t k = 0; k < r; ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) out.F(i, k) = m(i, pivots[k]);
  out.pivot_columns = std::move(pivots);
  return out;
}

/// Ordinary inverse of a nonsingular square matrix.
template <Scalar S>
Matrix<S> inverse(const Matrix<S>& m) {
  if (!m.is_square()) throw DimensionError("inverse: matrix is not square");
  auto inv = detail::try_inverse(m);
  if (!inv) throw std::domain_error("inverse: matrix is singular");
  return *inv;
}

/// Moore-Penrose inverse via a full-rank factorization m = FG:
///   m^+ = G*(GG*)^-1 (F*F)^-1 F*.
/// Throws NotMpInvertible if either Gram matrix fails to invert.
template <Scalar S>
Matrix<S> mp_inverse(const Matrix<S>& m) {
  auto rf = rank_factorization(m);
  if (rf.rank == 0) return Matrix<S>(m.cols(), m.rows(), m.involution());
  Matrix<S> Fs = mat_star(rf.F);
  Matrix<S> Gs = mat_star(rf.G);
  auto gram_g = detail::try_inverse(mat_mul(rf.G, Gs));
  auto gram_f = detail::try_inverse(mat_mul(Fs, rf.F));
  if (!gram_g || !gram_f) throw NotMpInvertible("mp_inverse: Gram matrix is singular");
  return mat_mul(mat_mul(Gs, *gram_g), mat_mul(*gram_f, Fs));
}

}  // namespace starsolve
