#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "starsolve/matrix_ring.hpp"
#include "starsolve/oracle.hpp"
#include "starsolve/rect_embedding.hpp"
#include "starsolve/solvers.hpp"

namespace starsolve {

/// Instance families that satisfy the range and hermitian hypotheses by
/// construction (or, for `rejection`, by filtering):
///   unitary   a unitary (orthogonal) with rational entries, b arbitrary
///   b_eq_a    b = a, a arbitrary
///   diagonal  real diagonal a, b with support(b) in support(a); rotated by
///             rational unitaries in the rectangular case
///   rejection random pairs with b in the range of a, kept when the
///             hermitian condition holds
enum class GenFamily { unitary, b_eq_a, diagonal, rejection };

inline std::string_view to_string(GenFamily f) {
  switch (f) {
    case GenFamily::unitary: return "unitary";
    case GenFamily::b_eq_a: return "b_eq_a";
    case GenFamily::diagonal: return "diagonal";
    case GenFamily::rejection: return "rejection";
  }
  return "?";
}

inline GenFamily parse_family(std::string_view s) {
  for (auto f : {GenFamily::unitary, GenFamily::b_eq_a, GenFamily::diagonal, GenFamily::rejection})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown generator family '" + std::string(s) + "'");
}

using GenRng = std::mt19937_64;

/// Rational unitary (orthogonal under plain transpose): Givens rotations by
/// Pythagorean-triple angles, unit phases, and a signed permutation.
inline ExactMatrix random_unitary(std::size_t n, Involution inv, GenRng& rng) {
  static constexpr std::array<std::array<long, 3>, 4> triples{{{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {7, 24, 25}}};
  ExactMatrix u = ExactMatrix::identity(n, inv);
  if (n == 0) return u;
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(triples.size()) - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t step = 0; n > 1 && step < n; ++step) {
    std::size_t i = idx(rng), j = idx(rng);
    if (i == j) continue;
    const auto& t = triples[pick(rng)];
    Rational c(t[0], t[2]), s(t[1], t[2]);
    if (coin(rng)) s = -s;
    ExactMatrix g = ExactMatrix::identity(n, inv);
    g(i, i) = c;
    g(j, j) = c;
    g(i, j) = -s;
    g(j, i) = s;
    u = mat_mul(g, u);
  }
  ExactMatrix phase = ExactMatrix::identity(n, inv);
  for (std::size_t i = 0; i < n; ++i) {
    if (inv == Involution::conjugate_transpose) {
      static const std::array<GaussianRational, 6> units{
          GaussianRational(1), GaussianRational(-1), GaussianRational::i(), -GaussianRational::i(),
          GaussianRational(Rational(3, 5), Rational(4, 5)), GaussianRational(Rational(5, 13), Rational(-12, 13))};
      std::uniform_int_distribution<std::size_t> up(0, units.size() - 1);
      phase(i, i) = units[up(rng)];
    } else {
      phase(i, i) = coin(rng) ? GaussianRational(1) : GaussianRational(-1);
    }
  }
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  ExactMatrix p(n, n, inv);
  for (std::size_t i = 0; i < n; ++i) p(i, perm[i]) = GaussianRational(1);
  return mat_mul(p, mat_mul(phase, u));
}

/// Product of rows x r and r x cols small random factors; r is drawn
/// uniformly from [0, min(rows, cols)] unless given.
inline ExactMatrix random_low_rank(std::size_t rows, std::size_t cols, Involution inv, GenRng& rng,
                                   std::optional<std::size_t> rank = std::nullopt) {
  std::size_t r = rank.value_or(std::uniform_int_distribution<std::size_t>(0, std::min(rows, cols))(rng));
  if (r == 0) return ExactMatrix(rows, cols, inv);
  auto left = ExactMatrix::random(rows, r, inv, rng);
  auto right = ExactMatrix::random(r, cols, inv, rng);
  return mat_mul(left, right);
}

namespace detail {

/// Real "diagonal" rows x cols matrix with nonzeros only at (i, i) for i in
/// `support`.
inline ExactMatrix diag_block(std::size_t rows, std::size_t cols, Involution inv, const std::vector<bool>& support,
                              GenRng& rng) {
  ExactMatrix d(rows, cols, inv);
  std::uniform_int_distribution<long> num(1, 9);
  std::uniform_int_distribution<long> den(1, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t i = 0; i < std::min({rows, cols, support.size()}); ++i) {
    if (!support[i]) continue;
    long nv = num(rng);
    long dv = den(rng);
    d(i, i) = GaussianRational(Rational(coin(rng) ? nv : -nv, dv));
  }
  return d;
}

inline std::vector<bool> random_support(std::size_t n, GenRng& rng) {
  std::uniform_int_distribution<int> coin(0, 3);
  std::vector<bool> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = coin(rng) != 0;
  return s;
}

inline std::vector<bool> sub_support(const std::vector<bool>& of, GenRng& rng) {
  std::uniform_int_distribution<int> coin(0, 2);
  std::vector<bool> s(of.size());
  for (std::size_t i = 0; i < of.size(); ++i) s[i] = of[i] && coin(rng) != 0;
  return s;
}

inline constexpr int kRejectionAttempts = 5000;

}  // namespace detail

/// A hypothesis-satisfying pair (a, b) of n x n exact matrices.
inline std::pair<ExactMatrix, ExactMatrix> generate_pair(GenFamily family, std::size_t n, Involution inv, GenRng& rng) {
  switch (family) {
    case GenFamily::unitary:
      return {random_unitary(n, inv, rng), random_low_rank(n, n, inv, rng)};
    case GenFamily::b_eq_a: {
      auto a = random_low_rank(n, n, inv, rng);
      return {a, a};
    }
    case GenFamily::diagonal: {
      auto sa = detail::random_support(n, rng);
      auto sb = detail::sub_support(sa, rng);
      return {detail::diag_block(n, n, inv, sa, rng), detail::diag_block(n, n, inv, sb, rng)};
    }
    case GenFamily::rejection: {
      MatrixRing<GaussianRational> ring(n, inv);
      for (int attempt = 0; attempt < detail::kRejectionAttempts; ++attempt) {
        auto a = random_low_rank(n, n, inv, rng);
        auto b = mat_mul(a, random_low_rank(n, n, inv, rng));
        if (check_hypotheses(ring, a, b).valid()) return {a, b};
      }
      throw std::runtime_error("generate_pair: rejection sampling exhausted");
    }
  }
  throw std::logic_error("generate_pair: unknown family");
}

/// A hypothesis-satisfying rectangular pair: A m x n, B m x p.
inline std::pair<ExactMatrix, ExactMatrix> generate_rect_pair(GenFamily family, const RectDims& d, Involution inv,
                                                              GenRng& rng) {
  switch (family) {
    case GenFamily::unitary:
      if (d.m != d.n) throw std::invalid_argument("unitary family needs m == n");
      return {random_unitary(d.m, inv, rng), random_low_rank(d.m, d.p, inv, rng)};
    case GenFamily::b_eq_a: {
      if (d.n != d.p) throw std::invalid_argument("b_eq_a family needs n == p");
      auto a = random_low_rank(d.m, d.n, inv, rng);
      return {a, a};
    }
    case GenFamily::diagonal: {
      auto sa = detail::random_support(std::min(d.m, d.n), rng);
      auto sb = detail::sub_support(sa, rng);
      auto u = random_unitary(d.m, inv, rng);
      auto A = mat_mul(u, mat_mul(detail::diag_block(d.m, d.n, inv, sa, rng), random_unitary(d.n, inv, rng)));
      auto B = mat_mul(u, mat_mul(detail::diag_block(d.m, d.p, inv, sb, rng), random_unitary(d.p, inv, rng)));
      return {A, B};
    }
    case GenFamily::rejection: {
      for (int attempt = 0; attempt < detail::kRejectionAttempts; ++attempt) {
        auto A = random_low_rank(d.m, d.n, inv, rng);
        auto B = mat_mul(A, random_low_rank(d.n, d.p, inv, rng));
        RectProblem<GaussianRational> prob{A, B, ExactMatrix(d.m, d.m, inv)};
        if (solve_rect(prob, Sign::minus).status != SolveStatus::hypotheses_fail) return {A, B};
      }
      throw std::runtime_error("generate_rect_pair: rejection sampling exhausted");
    }
  }
  throw std::logic_error("generate_rect_pair: unknown family");
}

/// A coefficient for the symmetric equations: unitary, low-rank, or diagonal.
inline ExactMatrix generate_coefficient(GenFamily family, std::size_t n, Involution inv, GenRng& rng) {
  switch (family) {
    case GenFamily::unitary: return random_unitary(n, inv, rng);
    case GenFamily::diagonal: return detail::diag_block(n, n, inv, detail::random_support(n, rng), rng);
    default: return random_low_rank(n, n, inv, rng);
  }
}

/// Right-hand side for an equation of the given kind. With `force_solvable`
/// it is the image of a random x; otherwise a random c with the required
/// symmetry (c* = -c for minus, c* = c for the other kinds), which is often
/// unsolvable.
inline ExactMatrix generate_rhs(EquationKind kind, const ExactMatrix& a, const ExactMatrix& b, bool force_solvable,
                                GenRng& rng) {
  const std::size_t m = a.rows();
  const Involution inv = a.involution();
  if (!force_solvable) {
    auto r = ExactMatrix::random(m, m, inv, rng);
    return kind == EquationKind::minus ? r - mat_star(r) : r + mat_star(r);
  }
  switch (kind) {
    case EquationKind::sym_right: {
      auto x = ExactMatrix::random(m, m, inv, rng);
      return mat_mul(x, mat_star(a)) + mat_mul(a, mat_star(x));
    }
    case EquationKind::sym_left: {
      auto x = ExactMatrix::random(m, m, inv, rng);
      return mat_mul(mat_star(a), x) + mat_mul(mat_star(x), a);
    }
    default: {
      // a: m x n, b: m x p, x: n x p (square when all three agree).
      auto x = ExactMatrix::random(a.cols(), b.cols(), inv, rng);
      auto left = mat_mul(mat_mul(a, x), mat_star(b));
      auto right = mat_mul(mat_mul(b, mat_star(x)), mat_star(a));
      return kind == EquationKind::minus ? left - right : left + right;
    }
  }
}

}  // namespace starsolve
