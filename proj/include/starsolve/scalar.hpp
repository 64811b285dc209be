#pragma once

#include <concepts>
#include <random>
#include <string_view>

#include "starsolve/complex_float.hpp"
#include "starsolve/rational.hpp"

namespace starsolve {

/// A scalar field with conjugation: the entry type of every shipped matrix ring.
template <class S>
concept Scalar = std::regular<S> && requires(const S a, const S b) {
  { a + b } -> std::same_as<S>;
  { a - b } -> std::same_as<S>;
  { a * b } -> std::same_as<S>;
  { -a } -> std::same_as<S>;
  { a.conj() } -> std::same_as<S>;
  { a.half() } -> std::same_as<S>;
  { a.inverse() } -> std::same_as<S>;
  { a.is_zero() } -> std::same_as<bool>;
  { a.is_real() } -> std::same_as<bool>;
  { a.magnitude() } -> std::convertible_to<double>;
};

template <Scalar S>
struct ScalarTraits;

template <>
struct ScalarTraits<GaussianRational> {
  static constexpr bool is_exact = true;
  static constexpr std::string_view backend_name = "exact";

  /// Entries drawn as small Gaussian rationals; purely real when `real_only`.
  template <class Rng>
  static GaussianRational random(Rng& rng, bool real_only) {
    Rational re = random_small_rational(rng);
    if (real_only) return GaussianRational(re);
    Rational im = random_small_rational(rng);
    return {re, im};
  }
};

template <>
struct ScalarTraits<ComplexFloat> {
  static constexpr bool is_exact = false;
  static constexpr std::string_view backend_name = "float";

  /// Entries drawn uniformly from the unit box.
  template <class Rng>
  static ComplexFloat random(Rng& rng, bool real_only) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double re = u(rng);
    if (real_only) return ComplexFloat(re);
    double im = u(rng);
    return {re, im};
  }
};

template <Scalar S>
inline constexpr bool is_exact_v = ScalarTraits<S>::is_exact;

inline ComplexFloat to_float(const GaussianRational& z) {
  return {z.re().to_double(), z.im().to_double()};
}

}  // namespace starsolve
