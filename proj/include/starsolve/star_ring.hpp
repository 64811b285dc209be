#pragma once

#include <concepts>
#include <limits>
#include <random>

#include "starsolve/errors.hpp"

namespace starsolve {

/// A unital ring with involution in which 2 is invertible.
///
/// A ring object is a context (dimension, involution, tolerance) and its
/// elements are plain values. Every operation is pure. `half_of(a)` is 2^-1 a,
/// which is central, so it equals a 2^-1.
template <class R>
concept StarRing = requires(const R& r, const typename R::element_type& a,
                            const typename R::element_type& b) {
  typename R::element_type;
  { r.add(a, b) } -> std::same_as<typename R::element_type>;
  { r.negate(a) } -> std::same_as<typename R::element_type>;
  { r.multiply(a, b) } -> std::same_as<typename R::element_type>;
  { r.star(a) } -> std::same_as<typename R::element_type>;
  { r.zero() } -> std::same_as<typename R::element_type>;
  { r.one() } -> std::same_as<typename R::element_type>;
  { r.half_of(a) } -> std::same_as<typename R::element_type>;
  { r.equals(a, b) } -> std::same_as<bool>;
};

/// A star ring that can compute MP-inverses itself. Throws NotMpInvertible.
template <class R>
concept MpRing = StarRing<R> && requires(const R& r, const typename R::element_type& a) {
  { r.mp_inverse(a) } -> std::same_as<typename R::element_type>;
};

/// A star ring that can draw pseudorandom elements.
template <class R>
concept SampleableRing = StarRing<R> && requires(const R& r, std::mt19937_64& rng) {
  { r.random_element(rng) } -> std::same_as<typename R::element_type>;
};

/// Rings that can quantify how far apart two elements are. The value is a
/// relative discrepancy: 0 means equal; for inexact rings it is compared
/// against a tolerance.
template <class R>
concept MeasuredRing = StarRing<R> && requires(const R& r, const typename R::element_type& a) {
  { r.discrepancy(a, a) } -> std::convertible_to<double>;
  { R::is_exact } -> std::convertible_to<bool>;
};

template <StarRing R>
using element_t = typename R::element_type;

template <StarRing R>
element_t<R> sub(const R& r, const element_t<R>& a, const element_t<R>& b) {
  return r.add(a, r.negate(b));
}

/// Left-to-right product of any number of factors.
template <StarRing R, class... Rest>
element_t<R> product(const R& r, const element_t<R>& a, const Rest&... rest) {
  if constexpr (sizeof...(rest) == 0) {
    return a;
  } else {
    element_t<R> acc = a;
    ((acc = r.multiply(acc, rest)), ...);
    return acc;
  }
}

/// Discrepancy between a and b: the ring's own measure when it has one,
/// otherwise 0 or +inf from `equals`.
template <StarRing R>
double discrepancy(const R& r, const element_t<R>& a, const element_t<R>& b) {
  if constexpr (MeasuredRing<R>) {
    return static_cast<double>(r.discrepancy(a, b));
  } else {
    return r.equals(a, b) ? 0.0 : std::numeric_limits<double>::infinity();
  }
}

template <StarRing R>
constexpr bool ring_is_exact() {
  if constexpr (MeasuredRing<R>)
    return R::is_exact;
  else
    return true;
}

/// True iff b satisfies the four Penrose equations for a:
/// aba = a, bab = b, (ab)* = ab, (ba)* = ba.
template <StarRing R>
bool is_mp_inverse(const R& r, const element_t<R>& a, const element_t<R>& b) {
  element_t<R> ab = r.multiply(a, b);
  element_t<R> ba = r.multiply(b, a);
  return r.equals(r.multiply(ab, a), a) && r.equals(r.multiply(ba, b), b) &&
         r.equals(r.star(ab), ab) && r.equals(r.star(ba), ba);
}

/// An element together with its MP-inverse.
template <StarRing R>
struct MpPair {
  element_t<R> element;
  element_t<R> mp;
};

/// Computes a^+ with the ring's own routine and checks the Penrose equations.
template <MpRing R>
MpPair<R> make_mp_pair(const R& r, const element_t<R>& a) {
  MpPair<R> p{a, r.mp_inverse(a)};
  if (!is_mp_inverse(r, p.element, p.mp))
    throw NotMpInvertible("make_mp_pair: computed inverse fails the Penrose equations");
  return p;
}

/// E_a = 1 - a a^+.
template <StarRing R>
element_t<R> proj_complement_left(const R& r, const element_t<R>& a, const element_t<R>& a_dagger) {
  return sub(r, r.one(), r.multiply(a, a_dagger));
}

/// F_a = 1 - a^+ a.
template <StarRing R>
element_t<R> proj_complement_right(const R& r, const element_t<R>& a, const element_t<R>& a_dagger) {
  return sub(r, r.one(), r.multiply(a_dagger, a));
}

/// H+(a) = a + a*, always self-adjoint.
template <StarRing R>
element_t<R> herm_part(const R& r, const element_t<R>& a) {
  return r.add(a, r.star(a));
}

/// H-(a) = a - a*, always skew-adjoint.
template <StarRing R>
element_t<R> skew_part(const R& r, const element_t<R>& a) {
  return sub(r, a, r.star(a));
}

}  // namespace starsolve
