#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "starsolve/matrix.hpp"
#include "starsolve/rational.hpp"
#include "starsolve/rect_embedding.hpp"
#include "starsolve/solvers.hpp"

namespace starsolve {

using ExactMatrix = Matrix<GaussianRational>;

/// The additive map X -> A X B* -+ B X* A* written as a rational matrix
/// acting on the real coordinates of X.
///
/// Coordinates are row-major over entries. Under the conjugate-transpose
/// involution each entry contributes (Re, Im); under plain transpose only
/// Re (entries are real).
struct RealLinearSystem {
  std::size_t rows = 0;  // output coordinates
  std::size_t cols = 0;  // input coordinates
  std::vector<Rational> matrix;  // row-major rows x cols
  std::vector<Rational> rhs;     // empty until a right-hand side is attached
  std::size_t x_rows = 0, x_cols = 0;
  std::size_t out_rows = 0, out_cols = 0;
  Involution involution = Involution::conjugate_transpose;

  std::size_t per_entry() const { return involution == Involution::conjugate_transpose ? 2 : 1; }
  Rational& at(std::size_t i, std::size_t j) { return matrix[i * cols + j]; }
  const Rational& at(std::size_t i, std::size_t j) const { return matrix[i * cols + j]; }
};

/// Real coordinates of a matrix, in the layout used by RealLinearSystem.
inline std::vector<Rational> coordinates(const ExactMatrix& X) {
  const bool complex = X.involution() == Involution::conjugate_transpose;
  std::vector<Rational> out;
  out.reserve(X.rows() * X.cols() * (complex ? 2 : 1));
  for (const auto& z : X.entries()) {
    out.push_back(z.re());
    if (complex) out.push_back(z.im());
  }
  return out;
}

inline ExactMatrix from_coordinates(const std::vector<Rational>& coords, std::size_t rows, std::size_t cols,
                                    Involution inv) {
  const std::size_t k = inv == Involution::conjugate_transpose ? 2 : 1;
  if (coords.size() != rows * cols * k) throw DimensionError("from_coordinates: coordinate count mismatch");
  ExactMatrix X(rows, cols, inv);
  for (std::size_t e = 0; e < rows * cols; ++e)
    X(e / cols, e % cols) = k == 2 ? GaussianRational(coords[2 * e], coords[2 * e + 1]) : GaussianRational(coords[e]);
  return X;
}

inline std::vector<Rational> apply_system(const RealLinearSystem& sys, const std::vector<Rational>& x) {
  if (x.size() != sys.cols) throw DimensionError("apply: coordinate count mismatch");
  std::vector<Rational> y(sys.rows);
  for (std::size_t i = 0; i < sys.rows; ++i)
    for (std::size_t j = 0; j < sys.cols; ++j)
      if (!sys.at(i, j).is_zero() && !x[j].is_zero()) y[i] += sys.at(i, j) * x[j];
  return y;
}

/// Builds the system entry by entry from the index formulas
///   (A X B*)_ij  = sum_kl A_ik X_kl conj(B_jl)
///   (B X* A*)_ij = sum_kl B_il conj(X_kl) conj(A_jk)
/// (no conjugation under plain transpose).
inline RealLinearSystem linearize(Sign sign, const ExactMatrix& A, const ExactMatrix& B) {
  if (A.involution() != B.involution()) throw InvolutionError("linearize: involution mismatch");
  if (A.rows() != B.rows()) throw DimensionError("linearize: A and B must have the same number of rows");
  RealLinearSystem sys;
  sys.involution = A.involution();
  sys.x_rows = A.cols();
  sys.x_cols = B.cols();
  sys.out_rows = sys.out_cols = A.rows();
  const std::size_t k = sys.per_entry();
  sys.rows = sys.out_rows * sys.out_cols * k;
  sys.cols = sys.x_rows * sys.x_cols * k;
  sys.matrix.assign(sys.rows * sys.cols, Rational());
  const bool conj = sys.involution == Involution::conjugate_transpose;
  const auto cj = [conj](const GaussianRational& z) { return conj ? z.conj() : z; };
  const Rational sgn = sign == Sign::minus ? Rational(-1) : Rational(1);

  const std::size_t m = sys.out_rows;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t out = (i * m + j) * k;
      for (std::size_t s = 0; s < sys.x_rows; ++s)
        for (std::size_t t = 0; t < sys.x_cols; ++t) {
          const std::size_t in = (s * sys.x_cols + t) * k;
          // alpha * X_st from A X B*
          GaussianRational alpha = A(i, s) * cj(B(j, t));
          // beta * conj(X_st) from B X* A*
          GaussianRational beta = B(i, t) * cj(A(j, s));
          if (!conj) {
            sys.at(out, in) += alpha.re() + sgn * beta.re();
            continue;
          }
          // x + iy: alpha (x + iy) + sgn * beta (x - iy)
          sys.at(out, in) += alpha.re() + sgn * beta.re();
          sys.at(out, in + 1) += -alpha.im() + sgn * beta.im();
          sys.at(out + 1, in) += alpha.im() + sgn * beta.im();
          sys.at(out + 1, in + 1) += alpha.re() - sgn * beta.re();
        }
    }
  return sys;
}

/// The oracle is exact-only.
RealLinearSystem linearize(Sign, const Matrix<ComplexFloat>&, const Matrix<ComplexFloat>&) = delete;

/// Exact verdict for one instance: solvability, a particular solution
/// (free variables set to zero), and a basis of the real solution space of
/// the homogeneous equation.
struct OracleResult {
  bool solvable = false;
  std::optional<ExactMatrix> particular;
  std::vector<ExactMatrix> kernel_basis;
  std::size_t real_dimension = 0;
  std::size_t rank = 0;
  RealLinearSystem system;
};

namespace detail {

/// Rational Gauss-Jordan on a dense rows x cols array; returns pivot columns.
inline std::vector<std::size_t> rational_rref(std::vector<Rational>& w, std::size_t rows, std::size_t cols,
                                              std::size_t pivot_limit) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  auto at = [&](std::size_t i, std::size_t j) -> Rational& { return w[i * cols + j]; };
  for (std::size_t col = 0; col < pivot_limit && row < rows; ++col) {
    std::size_t piv = row;
    while (piv < rows && at(piv, col).is_zero()) ++piv;
    if (piv == rows) continue;
    if (piv != row)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(row, j), at(piv, j));
    Rational inv = at(row, col).inverse();
    for (std::size_t j = col; j < cols; ++j) at(row, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == row || at(i, col).is_zero()) continue;
      Rational f = at(i, col);
      for (std::size_t j = col; j < cols; ++j) at(i, j) -= f * at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

/// Solves A X B* -+ B X* A* = C exactly by elimination on the
/// real-linearized system. A: m x n, B: m x p, C: m x m.
inline OracleResult oracle_solve(Sign sign, const ExactMatrix& A, const ExactMatrix& B, const ExactMatrix& C) {
  if (C.rows() != A.rows() || C.cols() != A.rows()) throw DimensionError("oracle_solve: C must be m x m");
  if (C.involution() != A.involution()) throw InvolutionError("oracle_solve: involution mismatch");
  OracleResult res;
  res.system = linearize(sign, A, B);
  auto& sys = res.system;
  sys.rhs = coordinates(C);

  const std::size_t n = sys.cols;
  const std::size_t width = n + 1;
  std::vector<Rational> aug(sys.rows * width);
  for (std::size_t i = 0; i < sys.rows; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i * width + j] = sys.at(i, j);
    aug[i * width + n] = sys.rhs[i];
  }
  auto pivots = detail::rational_rref(aug, sys.rows, width, n);
  res.rank = pivots.size();
  res.real_dimension = n - res.rank;

  res.solvable = true;
  for (std::size_t i = res.rank; i < sys.rows; ++i)
    if (!aug[i * width + n].is_zero()) res.solvable = false;

  std::vector<bool> is_pivot(n, false);
  for (auto p : pivots) is_pivot[p] = true;

  if (res.solvable) {
    std::vector<Rational> x(n);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug[r * width + n];
    res.particular = from_coordinates(x, sys.x_rows, sys.x_cols, sys.involution);
  }
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rational> h(n);
    h[f] = Rational(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) h[pivots[r]] = -aug[r * width + f];
    res.kernel_basis.push_back(from_coordinates(h, sys.x_rows, sys.x_cols, sys.involution));
  }
  return res;
}

/// The oracle for each equation kind, rewritten in the A X B* -+ B X* A* form:
/// sym_right (x a* + a x* = c) is (plus, 1, a) and sym_left (a* x + x* a = c)
/// is (plus, a*, 1).
inline OracleResult oracle_solve(EquationKind kind, const ExactMatrix& a, const ExactMatrix& b,
                                 const ExactMatrix& c) {
  switch (kind) {
    case EquationKind::minus: return oracle_solve(Sign::minus, a, b, c);
    case EquationKind::plus: return oracle_solve(Sign::plus, a, b, c);
    case EquationKind::sym_right:
      return oracle_solve(Sign::plus, ExactMatrix::identity(a.rows(), a.involution()), a, c);
    case EquationKind::sym_left:
      return oracle_solve(Sign::plus, mat_star(a), ExactMatrix::identity(a.rows(), a.involution()), c);
  }
  throw std::logic_error("oracle_solve: unknown kind");
}

struct OracleCheckReport {
  bool passed = true;
  bool x0_solves = true;
  bool phi_in_kernel = true;
  bool fixed_points = true;
  std::size_t kernel_dimension = 0;
  std::size_t trials = 0;
  std::vector<std::string> failures;  // one entry per failed check, with the witness
};

namespace detail {

inline bool is_zero_vector(const std::vector<Rational>& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

inline OracleCheckReport verify_against_oracle(const OracleResult& oracle, const ExactMatrix& x0,
                                               const std::function<ExactMatrix(const ExactMatrix&)>& homogeneous,
                                               std::size_t trials) {
  OracleCheckReport rep;
  rep.kernel_dimension = oracle.kernel_basis.size();
  rep.trials = trials;
  const auto& sys = oracle.system;

  if (!oracle.solvable || apply_system(sys, coordinates(x0)) != sys.rhs) {
    rep.x0_solves = false;
    std::ostringstream os;
    os << "x0 is not an oracle solution (oracle solvable=" << oracle.solvable << "): x0 = " << x0;
    rep.failures.push_back(os.str());
  }
  for (std::size_t t = 0; t < trials; ++t) {
    std::mt19937_64 rng(t);
    auto v = ExactMatrix::random(sys.x_rows, sys.x_cols, sys.involution, rng);
    auto h = homogeneous(v);
    if (!is_zero_vector(apply_system(sys, coordinates(h)))) {
      rep.phi_in_kernel = false;
      std::ostringstream os;
      os << "phi(v) outside the oracle kernel at seed " << t << ": v = " << v << ", phi(v) = " << h;
      rep.failures.push_back(os.str());
    }
  }
  for (const auto& k : oracle.kernel_basis) {
    auto image = homogeneous(k);
    if (image != k) {
      rep.fixed_points = false;
      std::ostringstream os;
      os << "phi(h) != h for kernel element h = " << k << ", phi(h) = " << image;
      rep.failures.push_back(os.str());
    }
  }
  rep.passed = rep.x0_solves && rep.phi_in_kernel && rep.fixed_points;
  return rep;
}

}  // namespace detail

/// Checks a solution family against the oracle for the same instance:
/// (i) x0 is a solution, (ii) phi(v) is homogeneous for `trials` seeded v,
/// (iii) phi fixes every oracle kernel basis element.
template <class Ring>
OracleCheckReport verify_family_against_oracle(const SolutionFamily<Ring>& fam, const OracleResult& oracle,
                                               std::size_t trials) {
  return detail::verify_against_oracle(oracle, fam.x0, [&fam](const ExactMatrix& v) { return fam.homogeneous(v); },
                                       trials);
}

inline OracleCheckReport verify_family_against_oracle(const RectFamily<GaussianRational>& fam,
                                                      const OracleResult& oracle, std::size_t trials) {
  return detail::verify_against_oracle(oracle, fam.X0, [&fam](const ExactMatrix& v) { return fam.homogeneous(v); },
                                       trials);
}

}  // namespace starsolve
