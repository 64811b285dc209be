#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "starsolve/errors.hpp"
#include "starsolve/scalar.hpp"

namespace starsolve {

enum class Involution { conjugate_transpose, transpose };

inline std::string_view to_string(Involution inv) {
  return inv == Involution::conjugate_transpose ? "conjugate_transpose" : "transpose";
}

/// Dense row-major matrix with a declared involution.
///
/// Under `Involution::transpose` every entry must be real, which keeps `*`
/// a genuine involution with (ab)* = b*a* and makes the Gram matrices used
/// by the MP-inverse invertible. Constructors enforce this; code that writes
/// through the mutable element accessor is responsible for preserving it.
template <Scalar S>
class Matrix {
public:
  using scalar_type = S;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, Involution inv = Involution::conjugate_transpose)
      : rows_(rows), cols_(cols), inv_(inv), data_(rows * cols) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<S> entries,
         Involution inv = Involution::conjugate_transpose)
      : rows_(rows), cols_(cols), inv_(inv), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionError("Matrix: entry count " + std::to_string(data_.size()) + " != " +
                           std::to_string(rows_) + "x" + std::to_string(cols_));
    validate();
  }

  /// Builds from nested row lists; all rows must have equal length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<S>> rows,
                          Involution inv = Involution::conjugate_transpose) {
    std::size_t r = rows.size();
    std::size_t c = r ? rows.begin()->size() : 0;
    std::vector<S> e;
    e.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("Matrix::from_rows: ragged rows");
      e.insert(e.end(), row.begin(), row.end());
    }
    return Matrix(r, c, std::move(e), inv);
  }

  static Matrix identity(std::size_t n, Involution inv = Involution::conjugate_transpose) {
    Matrix m(n, n, inv);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  static Matrix diagonal(const std::vector<S>& d, Involution inv = Involution::conjugate_transpose) {
    Matrix m(d.size(), d.size(), inv);
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    m.validate();
    return m;
  }

  template <class Rng>
  static Matrix random(std::size_t rows, std::size_t cols, Involution inv, Rng& rng) {
    Matrix m(rows, cols, inv);
    for (auto& e : m.data_) e = ScalarTraits<S>::random(rng, inv == Involution::transpose);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return data_.empty(); }
  Involution involution() const { return inv_; }

  const S& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  S& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const std::vector<S>& entries() const { return data_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const S& s) { return s.is_zero(); });
  }
  bool is_real() const {
    return std::all_of(data_.begin(), data_.end(), [](const S& s) { return s.is_real(); });
  }

  /// Largest entry magnitude, max(|re|, |im|) over all entries.
  double max_abs() const {
    double m = 0.0;
    for (const auto& s : data_) m = std::max(m, static_cast<double>(s.magnitude()));
    return m;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionError("Matrix::block: out of range");
    Matrix b(nr, nc, inv_);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
      throw DimensionError("Matrix::set_block: out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
  }

  /// Re-checks the transpose-involution realness constraint.
  void validate() const {
    if (inv_ == Involution::transpose && !is_real())
      throw InvolutionError("Matrix: transpose involution requires real entries");
  }

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    os << "[";
    for (std::size_t i = 0; i < m.rows_; ++i) {
      os << (i ? ", [" : "[");
      for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? ", " : "") << m(i, j);
      os << "]";
    }
    return os << "]";
  }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Involution inv_ = Involution::conjugate_transpose;
  std::vector<S> data_;
};

namespace detail {

template <Scalar S>
void require_same_involution(const Matrix<S>& a, const Matrix<S>& b, const char* op) {
  if (a.involution() != b.involution())
    throw InvolutionError(std::string(op) + ": involution mismatch");
}

template <Scalar S>
void require_same_shape(const Matrix<S>& a, const Matrix<S>& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

}  // namespace detail

template <Scalar S>
Matrix<S> mat_add(const Matrix<S>& a, const Matrix<S>& b) {
  detail::require_same_shape(a, b, "mat_add");
  detail::require_same_involution(a, b, "mat_add");
  Matrix<S> r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) += b(i, j);
  return r;
}

template <Scalar S>
Matrix<S> mat_neg(const Matrix<S>& a) {
  Matrix<S> r(a.rows(), a.cols(), a.involution());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = -a(i, j);
  return r;
}

template <Scalar S>
Matrix<S> mat_sub(const Matrix<S>& a, const Matrix<S>& b) {
  detail::require_same_shape(a, b, "mat_sub");
  detail::require_same_involution(a, b, "mat_sub");
  Matrix<S> r = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) -= b(i, j);
  return r;
}

template <Scalar S>
Matrix<S> mat_mul(const Matrix<S>& a, const Matrix<S>& b) {
  if (a.cols() != b.rows())
    throw DimensionError("mat_mul: inner dimensions " + std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()));
  detail::require_same_involution(a, b, "mat_mul");
  Matrix<S> r(a.rows(), b.cols(), a.involution());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const S& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b(k, j).is_zero()) continue;
        r(i, j) += aik * b(k, j);
      }
    }
  return r;
}

/// Conjugate transpose or plain transpose, per the involution tag.
template <Scalar S>
Matrix<S> mat_star(const Matrix<S>& a) {
  Matrix<S> r(a.cols(), a.rows(), a.involution());
  bool conj = a.involution() == Involution::conjugate_transpose;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(j, i) = conj ? a(i, j).conj() : a(i, j);
  return r;
}

template <Scalar S>
Matrix<S> mat_scale_half(const Matrix<S>& a) {
  Matrix<S> r(a.rows(), a.cols(), a.involution());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j).half();
  return r;
}

template <Scalar S>
Matrix<S> mat_scale(const Matrix<S>& a, const S& s) {
  Matrix<S> r(a.rows(), a.cols(), a.involution());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) * s;
  return r;
}

/// Largest entrywise magnitude of a - b.
template <Scalar S>
double max_abs_diff(const Matrix<S>& a, const Matrix<S>& b) {
  detail::require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      m = std::max(m, static_cast<double>((a(i, j) - b(i, j)).magnitude()));
  return m;
}

/// Exact equality on the exact backend (tol ignored); max-abs entrywise
/// difference <= tol on the float backend.
template <Scalar S>
bool mat_equals(const Matrix<S>& a, const Matrix<S>& b, double tol) {
  detail::require_same_shape(a, b, "mat_equals");
  if constexpr (is_exact_v<S>) {
    (void)tol;
    return a.entries() == b.entries();
  } else {
    return max_abs_diff(a, b) <= tol;
  }
}

template <Scalar S>
Matrix<S> operator+(const Matrix<S>& a, const Matrix<S>& b) { return mat_add(a, b); }
template <Scalar S>
Matrix<S> operator-(const Matrix<S>& a, const Matrix<S>& b) { return mat_sub(a, b); }
template <Scalar S>
Matrix<S> operator-(const Matrix<S>& a) { return mat_neg(a); }
template <Scalar S>
Matrix<S> operator*(const Matrix<S>& a, const Matrix<S>& b) { return mat_mul(a, b); }

inline Matrix<ComplexFloat> to_float(const Matrix<GaussianRational>& m) {
  std::vector<ComplexFloat> e;
  e.reserve(m.entries().size());
  for (const auto& z : m.entries()) e.push_back(to_float(z));
  return Matrix<ComplexFloat>(m.rows(), m.cols(), std::move(e), m.involution());
}

}  // namespace starsolve
