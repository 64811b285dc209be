#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <random>
#include <string>

#include "starsolve/matrix.hpp"
#include "starsolve/mp_inverse.hpp"
#include "starsolve/star_ring.hpp"

namespace starsolve {

/// Default float-backend equality tolerance, relative to 1 + max-abs of
/// the operands.
inline constexpr double kDefaultRingTol = 1e-10;

namespace detail {

template <class T>
double relative_discrepancy(double diff, double scale_a, double scale_b) {
  return diff / (1.0 + std::max(scale_a, scale_b));
}

/// Exact rings report 0 for equal values and a strictly positive value
/// otherwise, even when the true difference underflows a double.
inline double exact_discrepancy(bool equal, double diff) {
  return equal ? 0.0 : std::max(diff, std::numeric_limits<double>::min());
}

}  // namespace detail

/// The ring of n x n matrices over S with the given involution.
template <Scalar S>
class MatrixRing {
public:
  using element_type = Matrix<S>;
  static constexpr bool is_exact = is_exact_v<S>;

  explicit MatrixRing(std::size_t n, Involution inv = Involution::conjugate_transpose,
                      double tol = kDefaultRingTol)
      : n_(n), inv_(inv), tol_(tol) {}

  std::size_t dimension() const { return n_; }
  Involution involution() const { return inv_; }
  double tolerance() const { return tol_; }

  Matrix<S> add(const Matrix<S>& a, const Matrix<S>& b) const { return mat_add(member(a), member(b)); }
  Matrix<S> negate(const Matrix<S>& a) const { return mat_neg(member(a)); }
  Matrix<S> multiply(const Matrix<S>& a, const Matrix<S>& b) const { return mat_mul(member(a), member(b)); }
  Matrix<S> star(const Matrix<S>& a) const { return mat_star(member(a)); }
  Matrix<S> half_of(const Matrix<S>& a) const { return mat_scale_half(member(a)); }
  Matrix<S> zero() const { return Matrix<S>(n_, n_, inv_); }
  Matrix<S> one() const { return Matrix<S>::identity(n_, inv_); }

  bool equals(const Matrix<S>& a, const Matrix<S>& b) const {
    if constexpr (is_exact)
      return member(a) == member(b);
    else
      return discrepancy(a, b) <= tol_;
  }

  double discrepancy(const Matrix<S>& a, const Matrix<S>& b) const {
    double diff = max_abs_diff(member(a), member(b));
    if constexpr (is_exact)
      return detail::exact_discrepancy(a == b, diff);
    else
      return detail::relative_discrepancy<S>(diff, a.max_abs(), b.max_abs());
  }

  Matrix<S> mp_inverse(const Matrix<S>& a) const { return starsolve::mp_inverse(member(a)); }

  template <class Rng>
  Matrix<S> random_element(Rng& rng) const {
    return Matrix<S>::random(n_, n_, inv_, rng);
  }

private:
  const Matrix<S>& member(const Matrix<S>& a) const {
    if (a.rows() != n_ || a.cols() != n_)
      throw DimensionError("MatrixRing: element is " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + ", ring order is " + std::to_string(n_));
    if (a.involution() != inv_) throw InvolutionError("MatrixRing: involution mismatch");
    return a;
  }

  std::size_t n_;
  Involution inv_;
  double tol_;
};

/// The scalar field itself, with complex conjugation as involution. Every
/// element is MP-invertible: 0^+ = 0 and z^+ = 1/z otherwise.
template <Scalar S>
class ScalarRing {
public:
  using element_type = S;
  static constexpr bool is_exact = is_exact_v<S>;

  explicit ScalarRing(double tol = kDefaultRingTol) : tol_(tol) {}

  S add(const S& a, const S& b) const { return a + b; }
  S negate(const S& a) const { return -a; }
  S multiply(const S& a, const S& b) const { return a * b; }
  S star(const S& a) const { return a.conj(); }
  S half_of(const S& a) const { return a.half(); }
  S zero() const { return S{}; }
  S one() const { return S(1); }

  bool equals(const S& a, const S& b) const {
    if constexpr (is_exact)
      return a == b;
    else
      return discrepancy(a, b) <= tol_;
  }

  double discrepancy(const S& a, const S& b) const {
    double diff = (a - b).magnitude();
    if constexpr (is_exact)
      return detail::exact_discrepancy(a == b, diff);
    else
      return detail::relative_discrepancy<S>(diff, a.magnitude(), b.magnitude());
  }

  S mp_inverse(const S& a) const { return a.is_zero() ? S{} : a.inverse(); }

  template <class Rng>
  S random_element(Rng& rng) const {
    return ScalarTraits<S>::random(rng, false);
  }

private:
  double tol_;
};

}  // namespace starsolve
