#pragma once

#include <random>

#include "starsolve/starsolve.hpp"

namespace testing_support {

using namespace starsolve;

using Q = Rational;
using Z = GaussianRational;
using M = ExactMatrix;
using FM = Matrix<ComplexFloat>;

inline constexpr Involution kConj = Involution::conjugate_transpose;
inline constexpr Involution kTrans = Involution::transpose;

inline Z gz(long re, long im = 0) { return Z(Q(re), Q(im)); }
inline Z gq(long num, long den, long im_num = 0, long im_den = 1) { return Z(Q(num, den), Q(im_num, im_den)); }

inline M mat(std::initializer_list<std::initializer_list<Z>> rows, Involution inv = kConj) {
  return M::from_rows(rows, inv);
}

inline M diag(std::initializer_list<long> d, Involution inv = kConj) {
  std::vector<Z> e;
  for (long x : d) e.push_back(gz(x));
  return M::diagonal(e, inv);
}

inline M scalar(Z z, Involution inv = kConj) { return M::from_rows({{z}}, inv); }

/// MP-inverse by Greville's column recursion. Shares no code with the
/// rank-factorization path in the library.
template <Scalar S>
Matrix<S> greville(const Matrix<S>& A) {
  const std::size_t rows = A.rows(), cols = A.cols();
  const Involution inv = A.involution();
  auto col = [&](std::size_t k) { return A.block(0, k, rows, 1); };
  auto inner = [](const Matrix<S>& u) {
    S s{};
    for (std::size_t i = 0; i < u.rows(); ++i) s = s + u(i, 0).conj() * u(i, 0);
    return s;
  };
  // pinv holds the MP-inverse of the first k columns (k x rows).
  Matrix<S> a1 = col(0);
  Matrix<S> pinv(1, rows, inv);
  if (!a1.is_zero()) pinv = mat_scale(mat_star(a1), inner(a1).inverse());
  for (std::size_t k = 1; k < cols; ++k) {
    Matrix<S> Ak = A.block(0, 0, rows, k);
    Matrix<S> ak = col(k);
    Matrix<S> d = mat_mul(pinv, ak);
    Matrix<S> c = mat_sub(ak, mat_mul(Ak, d));
    Matrix<S> b(1, rows, inv);
    if (!c.is_zero()) {
      b = mat_scale(mat_star(c), inner(c).inverse());
    } else {
      S denom = S(1) + inner(d);
      b = mat_scale(mat_mul(mat_star(d), pinv), denom.inverse());
    }
    Matrix<S> top = mat_sub(pinv, mat_mul(d, b));
    Matrix<S> next(k + 1, rows, inv);
    next.set_block(0, 0, top);
    next.set_block(k, 0, b);
    pinv = next;
  }
  return pinv;
}

/// Random exact matrix whose rank is drawn from [0, min(rows, cols)].
inline M random_matrix(std::size_t rows, std::size_t cols, Involution inv, std::mt19937_64& rng) {
  return random_low_rank(rows, cols, inv, rng);
}

}  // namespace testing_support
