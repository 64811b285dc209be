#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "starsolve/matrix.hpp"
#include "starsolve/matrix_ring.hpp"
#include "starsolve/mp_inverse.hpp"
#include "starsolve/solvers.hpp"

namespace starsolve {

/// Block sizes of the rectangular equation A X B* -+ B X* A* = C with
/// A: m x n, B: m x p, C: m x m, X: n x p.
struct RectDims {
  std::size_t m = 0, n = 0, p = 0;
  std::size_t order() const { return m + n + p; }
  friend bool operator==(const RectDims&, const RectDims&) = default;
};

template <Scalar S>
struct RectProblem {
  Matrix<S> A, B, C;

  RectDims dims() const { return {A.rows(), A.cols(), B.cols()}; }

  /// Throws DimensionError / InvolutionError unless the shapes conform.
  void validate() const {
    const auto d = dims();
    if (B.rows() != d.m)
      throw DimensionError("RectProblem: B must have " + std::to_string(d.m) + " rows (B is m x p)");
    if (C.rows() != d.m || C.cols() != d.m)
      throw DimensionError("RectProblem: C must be " + std::to_string(d.m) + "x" + std::to_string(d.m));
    if (A.involution() != B.involution() || A.involution() != C.involution())
      throw InvolutionError("RectProblem: operands disagree on involution");
  }
};

/// The square k x k triple carrying A in block (1,2), B in block (1,3)
/// and C in block (1,1), k = m + n + p.
template <Scalar S>
struct EmbeddedTriple {
  Matrix<S> a, b, c;
  RectDims dims;
};

template <Scalar S>
EmbeddedTriple<S> embed(const RectProblem<S>& p) {
  p.validate();
  const RectDims d = p.dims();
  const std::size_t k = d.order();
  const Involution inv = p.A.involution();
  EmbeddedTriple<S> t{Matrix<S>(k, k, inv), Matrix<S>(k, k, inv), Matrix<S>(k, k, inv), d};
  t.a.set_block(0, d.m, p.A);
  t.b.set_block(0, d.m + d.n, p.B);
  t.c.set_block(0, 0, p.C);
  return t;
}

/// Block MP-inverses of the embedded a and b: A+ in block (2,1) and B+ in
/// block (3,1).
template <Scalar S>
std::pair<Matrix<S>, Matrix<S>> embed_mp(const Matrix<S>& A_dagger, const Matrix<S>& B_dagger, const RectDims& d) {
  if (A_dagger.rows() != d.n || A_dagger.cols() != d.m)
    throw DimensionError("embed_mp: A+ must be n x m");
  if (B_dagger.rows() != d.p || B_dagger.cols() != d.m)
    throw DimensionError("embed_mp: B+ must be p x m");
  const std::size_t k = d.order();
  Matrix<S> ad(k, k, A_dagger.involution()), bd(k, k, B_dagger.involution());
  ad.set_block(d.m, 0, A_dagger);
  bd.set_block(d.m + d.n, 0, B_dagger);
  return {std::move(ad), std::move(bd)};
}

/// Places an n x p matrix X in block (2,3) of a zero k x k matrix.
template <Scalar S>
Matrix<S> embed_solution(const Matrix<S>& X, const RectDims& d) {
  if (X.rows() != d.n || X.cols() != d.p) throw DimensionError("embed_solution: X must be n x p");
  Matrix<S> x(d.order(), d.order(), X.involution());
  x.set_block(d.m, d.m + d.n, X);
  return x;
}

/// Reads block (2,3) of a k x k solution of the embedded equation.
template <Scalar S>
Matrix<S> extract_solution(const Matrix<S>& x, const RectDims& d) {
  if (x.rows() != d.order() || x.cols() != d.order())
    throw DimensionError("extract_solution: x must be k x k with k = m + n + p");
  return x.block(d.m, d.m + d.n, d.n, d.p);
}

namespace detail {

template <Scalar S>
const Matrix<S>& expect_shape(const Matrix<S>& M, std::size_t rows, std::size_t cols, const char* term) {
  if (M.rows() != rows || M.cols() != cols)
    throw std::logic_error(std::string("rectangular term ") + term + " has shape " + std::to_string(M.rows()) +
                           "x" + std::to_string(M.cols()) + ", expected " + std::to_string(rows) + "x" +
                           std::to_string(cols));
  return M;
}

template <Scalar S>
double matrix_discrepancy(const Matrix<S>& lhs, const Matrix<S>& rhs) {
  double diff = max_abs_diff(lhs, rhs);
  if constexpr (is_exact_v<S>)
    return exact_discrepancy(lhs == rhs, diff);
  else
    return relative_discrepancy<S>(diff, lhs.max_abs(), rhs.max_abs());
}

template <Scalar S>
ConditionResult matrix_condition(std::string name, const Matrix<S>& lhs, const Matrix<S>& rhs,
                                 const SolveOptions& opts) {
  ConditionResult out;
  out.name = std::move(name);
  out.residual = matrix_discrepancy(lhs, rhs);
  if constexpr (is_exact_v<S>) {
    out.holds = out.residual == 0.0;
  } else {
    out.holds = out.residual <= opts.tol;
    out.indeterminate =
        out.residual > opts.tol / kIndeterminateBand && out.residual <= opts.tol * kIndeterminateBand;
  }
  return out;
}

template <Scalar S, class... Rest>
Matrix<S> mprod(const Matrix<S>& a, const Rest&... rest) {
  Matrix<S> acc = a;
  ((acc = mat_mul(acc, rest)), ...);
  return acc;
}

}  // namespace detail

/// A X B* -+ B X* A* for rectangular operands.
template <Scalar S>
Matrix<S> rect_equation_lhs(Sign sign, const Matrix<S>& A, const Matrix<S>& B, const Matrix<S>& X) {
  auto left = detail::mprod(A, X, mat_star(B));
  auto right = detail::mprod(B, mat_star(X), mat_star(A));
  return sign == Sign::minus ? left - right : left + right;
}

/// Solution family of a rectangular equation, evaluated directly on the
/// rectangular operands. Dagger shapes: A+ n x m, B+ p x m, D = E_B A m x n,
/// D+ = A+ E_B n x m.
template <Scalar S>
struct RectFamily {
  Sign sign;
  RectProblem<S> problem;
  Matrix<S> A_dagger, B_dagger, D, D_dagger;
  Matrix<S> X0;
  SolveOptions options;

  RectDims dims() const { return problem.dims(); }

  /// Rectangular phi(V) for V: n x p.
  Matrix<S> homogeneous(const Matrix<S>& V) const {
    const auto d = dims();
    const auto& A = problem.A;
    const auto& B = problem.B;
    detail::expect_shape(V, d.n, d.p, "V");
    const auto Vs = mat_star(V);
    const auto BdB = mat_mul(B_dagger, B);
    auto t1 = detail::expect_shape(detail::mprod(A_dagger, A, V, BdB), d.n, d.p, "A+AVB+B");
    auto t2 = detail::expect_shape(detail::mprod(A_dagger, B, Vs, mat_star(A), mat_star(B_dagger)), d.n, d.p,
                                   "A+BV*A*(B+)*");
    auto inner3 = detail::expect_shape(detail::mprod(B_dagger, A, D_dagger, A), d.p, d.n, "B+AD+A");
    auto t3 = detail::expect_shape(detail::mprod(A_dagger, B, Vs, mat_star(inner3)), d.n, d.p,
                                   "A+BV*(B+AD+A)*");
    auto t4 = detail::expect_shape(detail::mprod(D_dagger, A, V, BdB), d.n, d.p, "D+AVB+B");
    Matrix<S> inner = sign == Sign::minus ? (t2 - t1) - (t3 + t4) : (t3 - t1) - (t2 + t4);
    return V + mat_scale_half(inner);
  }

  Matrix<S> at(const Matrix<S>& V) const { return X0 + homogeneous(V); }

  /// A X B* -+ B X* A*.
  Matrix<S> lhs(const Matrix<S>& X) const { return rect_equation_lhs(sign, problem.A, problem.B, X); }

  ConditionResult check(const Matrix<S>& X) const {
    return detail::matrix_condition("equation", lhs(X), problem.C, options);
  }
  bool satisfies(const Matrix<S>& X) const { return check(X).holds; }

  /// Family member at a V drawn from a generator seeded with `seed`;
  /// re-verified by substitution.
  Matrix<S> sample(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    const auto d = dims();
    Matrix<S> X = at(Matrix<S>::random(d.n, d.p, problem.A.involution(), rng));
    if (!satisfies(X)) throw std::logic_error("RectFamily::sample: sampled element fails the equation");
    return X;
  }
};

template <Scalar S>
struct RectSolveResult {
  SolveStatus status;
  std::vector<ConditionResult> conditions;
  std::optional<RectFamily<S>> family;
  Matrix<S> A_dagger, B_dagger, D, D_dagger;

  std::vector<std::string> failed_conditions() const {
    std::vector<std::string> out;
    for (const auto& c : conditions)
      if (!c.holds) out.push_back(c.name);
    return out;
  }
  bool indeterminate() const {
    for (const auto& c : conditions)
      if (c.indeterminate) return true;
    return false;
  }
};

/// Direct rectangular solver. Hypotheses: A A+ B = B and
/// (A+ B B+ A)* = A+ B B+ A; then solvable iff C* = -+C and
/// H-+((AA+ + DD+) C BB+) = 2C, with X0 = 1/2 A+ C (B+)* -
/// 1/2 A+ B B+ C (B+ A D+)* + 1/2 D+ C (B+)*.
template <Scalar S>
RectSolveResult<S> solve_rect(const RectProblem<S>& prob, Sign sign, const SolveOptions& opts = {}) {
  prob.validate();
  const auto d = prob.dims();
  const auto& A = prob.A;
  const auto& B = prob.B;
  const auto& C = prob.C;
  const Involution inv = A.involution();

  RectSolveResult<S> out{SolveStatus::solved, {}, std::nullopt, mp_inverse(A), mp_inverse(B), {}, {}};
  const auto& Ad = detail::expect_shape(out.A_dagger, d.n, d.m, "A+");
  const auto& Bd = detail::expect_shape(out.B_dagger, d.p, d.m, "B+");
  const auto E_B = Matrix<S>::identity(d.m, inv) - mat_mul(B, Bd);
  out.D = detail::expect_shape(mat_mul(E_B, A), d.m, d.n, "D");
  out.D_dagger = detail::expect_shape(mat_mul(Ad, E_B), d.n, d.m, "D+");

  out.conditions.push_back(detail::matrix_condition("range_condition", detail::mprod(A, Ad, B), B, opts));
  auto herm = detail::expect_shape(detail::mprod(Ad, B, Bd, A), d.n, d.n, "A+BB+A");
  out.conditions.push_back(detail::matrix_condition("hermitian_condition", mat_star(herm), herm, opts));
  if (!out.conditions[0].holds || !out.conditions[1].holds) {
    out.status = SolveStatus::hypotheses_fail;
    return out;
  }

  const auto Cs = mat_star(C);
  if (sign == Sign::minus)
    out.conditions.push_back(detail::matrix_condition("c_star_neq_minus_c", Cs, -C, opts));
  else
    out.conditions.push_back(detail::matrix_condition("c_star_neq_c", Cs, C, opts));
  auto inner = detail::mprod(mat_mul(A, Ad) + mat_mul(out.D, out.D_dagger), C, B, Bd);
  auto h = sign == Sign::minus ? inner - mat_star(inner) : inner + mat_star(inner);
  out.conditions.push_back(detail::matrix_condition("H_condition", h, C + C, opts));
  for (std::size_t i = 2; i < out.conditions.size(); ++i)
    if (!out.conditions[i].holds) out.status = SolveStatus::unsolvable;
  if (out.status != SolveStatus::solved) return out;

  const auto Bds = mat_star(Bd);
  auto t1 = detail::expect_shape(detail::mprod(Ad, C, Bds), d.n, d.p, "A+C(B+)*");
  auto tail = detail::expect_shape(detail::mprod(Bd, A, out.D_dagger), d.p, d.m, "B+AD+");
  auto t2 = detail::expect_shape(detail::mprod(Ad, B, Bd, C, mat_star(tail)), d.n, d.p, "A+BB+C(B+AD+)*");
  auto t3 = detail::expect_shape(detail::mprod(out.D_dagger, C, Bds), d.n, d.p, "D+C(B+)*");
  out.family = RectFamily<S>{sign, prob, Ad, Bd, out.D, out.D_dagger, mat_scale_half(t1 - t2 + t3), opts};
  return out;
}

/// The second route: embed into the k x k matrix ring and run the ring
/// solver there.
template <Scalar S>
SolveResult<MatrixRing<S>> solve_rect_embedded(const RectProblem<S>& prob, Sign sign, const SolveOptions& opts = {}) {
  auto t = embed(prob);
  MatrixRing<S> ring(t.dims.order(), prob.A.involution());
  return solve(ring, sign, t.a, t.b, t.c, opts);
}

}  // namespace starsolve
