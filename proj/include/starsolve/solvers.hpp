#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "starsolve/star_ring.hpp"

namespace starsolve {

/// Which sign joins the two terms: minus is axb* - bx*a* = c, plus is
/// axb* + bx*a* = c.
enum class Sign { minus, plus };

/// The four equation shapes solved here. For the symmetric kinds the single
/// coefficient is called `a` and the right-hand side is stored as `c`:
///   sym_right: x a* + a x* = c,   sym_left: a* x + x* a = c.
enum class EquationKind { minus, plus, sym_right, sym_left };

inline std::string_view to_string(Sign s) { return s == Sign::minus ? "minus" : "plus"; }

inline std::string_view to_string(EquationKind k) {
  switch (k) {
    case EquationKind::minus: return "minus";
    case EquationKind::plus: return "plus";
    case EquationKind::sym_right: return "sym_right";
    case EquationKind::sym_left: return "sym_left";
  }
  return "?";
}

/// Verdict tolerance for conditions on inexact rings, relative to
/// 1 + max-abs of the compared elements. Exact rings ignore it.
inline constexpr double kDefaultConditionTol = 1e-9;

/// Width of the band around the tolerance inside which a float verdict is
/// flagged indeterminate: tol / band < residual <= tol * band.
inline constexpr double kIndeterminateBand = 100.0;

struct SolveOptions {
  double tol = kDefaultConditionTol;
};

/// Outcome of testing one equality condition. `name` is the label used in
/// reports when the condition fails.
struct ConditionResult {
  std::string name;
  bool holds = false;
  double residual = 0.0;
  bool indeterminate = false;
};

template <StarRing R>
ConditionResult evaluate_condition(const R& r, std::string name, const element_t<R>& lhs,
                                   const element_t<R>& rhs, const SolveOptions& opts) {
  ConditionResult out;
  out.name = std::move(name);
  out.residual = discrepancy(r, lhs, rhs);
  if constexpr (ring_is_exact<R>()) {
    out.holds = out.residual == 0.0;
  } else {
    out.holds = out.residual <= opts.tol;
    out.indeterminate =
        out.residual > opts.tol / kIndeterminateBand && out.residual <= opts.tol * kIndeterminateBand;
  }
  return out;
}

/// Standing hypotheses for the pair (a, b): a^+ and b^+ exist, the range
/// condition a a^+ b = b, the hermitian condition (a^+ b b^+ a)* = a^+ b b^+ a,
/// and the derived d = E_b a with its MP-inverse d^+ = a^+ E_b.
template <StarRing R>
struct HypothesisReport {
  element_t<R> a, b;
  element_t<R> a_dagger, b_dagger;
  ConditionResult range;
  ConditionResult hermitian;
  element_t<R> d, d_dagger;

  bool range_ok() const { return range.holds; }
  bool hermitian_ok() const { return hermitian.holds; }
  bool valid() const { return range_ok() && hermitian_ok(); }
};

/// Evaluates the hypotheses using a caller-supplied MP-inverse routine.
/// `mp_oracle(x)` must return x^+ or throw NotMpInvertible.
template <StarRing R, class MpOracle>
HypothesisReport<R> check_hypotheses(const R& r, const element_t<R>& a, const element_t<R>& b,
                                     MpOracle&& mp_oracle, const SolveOptions& opts = {}) {
  HypothesisReport<R> rep{a, b, mp_oracle(a), mp_oracle(b), {}, {}, r.zero(), r.zero()};
  rep.range = evaluate_condition(r, "range_condition", product(r, a, rep.a_dagger, b), b, opts);
  element_t<R> m = product(r, rep.a_dagger, b, rep.b_dagger, a);
  rep.hermitian = evaluate_condition(r, "hermitian_condition", r.star(m), m, opts);
  element_t<R> e_b = proj_complement_left(r, b, rep.b_dagger);
  rep.d = r.multiply(e_b, a);
  rep.d_dagger = r.multiply(rep.a_dagger, e_b);
  return rep;
}

template <MpRing R>
HypothesisReport<R> check_hypotheses(const R& r, const element_t<R>& a, const element_t<R>& b,
                                     const SolveOptions& opts = {}) {
  return check_hypotheses(r, a, b, [&r](const element_t<R>& x) { return r.mp_inverse(x); }, opts);
}

namespace detail {

template <StarRing R>
void require_valid(const HypothesisReport<R>& rep, const char* op) {
  if (!rep.valid())
    throw std::invalid_argument(std::string(op) + ": range or hermitian hypothesis does not hold");
}

}  // namespace detail

/// The homogeneous solution map. For the minus sign
///   phi(v) = v - 1/2 a+ a v b+ b + 1/2 a+ b v* a* (b+)* - 1/2 a+ b v* (b+ a d+ a)* - 1/2 d+ a v b+ b
/// and for the plus sign the middle two terms change sign. Its image is
/// exactly the solution set of the homogeneous equation.
template <StarRing R>
element_t<R> phi(const R& r, Sign sign, const HypothesisReport<R>& rep, const element_t<R>& v) {
  detail::require_valid(rep, "phi");
  const auto& a = rep.a;
  const auto& b = rep.b;
  const auto& ad = rep.a_dagger;
  const auto& bd = rep.b_dagger;
  const auto vs = r.star(v);
  const auto bdb = r.multiply(bd, b);

  auto t1 = product(r, ad, a, v, bdb);
  auto t2 = product(r, ad, b, vs, r.star(a), r.star(bd));
  auto t3 = product(r, ad, b, vs, r.star(product(r, bd, a, rep.d_dagger, a)));
  auto t4 = product(r, rep.d_dagger, a, v, bdb);

  element_t<R> inner = sign == Sign::minus ? r.add(sub(r, t2, t1), r.negate(r.add(t3, t4)))
                                           : sub(r, sub(r, t3, t1), r.add(t2, t4));
  return r.add(v, r.half_of(inner));
}

/// x0 = 1/2 a+ c (b+)* - 1/2 a+ b b+ c (b+ a d+)* + 1/2 d+ c (b+)*.
/// The same expression serves both signs.
template <StarRing R>
element_t<R> particular(const R& r, Sign sign, const HypothesisReport<R>& rep, const element_t<R>& c) {
  (void)sign;
  detail::require_valid(rep, "particular");
  const auto bds = r.star(rep.b_dagger);
  auto t1 = product(r, rep.a_dagger, c, bds);
  auto t2 = product(r, rep.a_dagger, rep.b, rep.b_dagger, c,
                    r.star(product(r, rep.b_dagger, rep.a, rep.d_dagger)));
  auto t3 = product(r, rep.d_dagger, c, bds);
  return r.half_of(r.add(sub(r, t1, t2), t3));
}

/// The two solvability conditions: c* = -c (resp. c* = c) and
/// H-((aa+ + dd+) c bb+) = 2c (resp. H+ for the plus sign).
template <StarRing R>
std::vector<ConditionResult> solvability_conditions(const R& r, Sign sign, const HypothesisReport<R>& rep,
                                                    const element_t<R>& c, const SolveOptions& opts = {}) {
  detail::require_valid(rep, "solvability_conditions");
  std::vector<ConditionResult> out;
  const auto cs = r.star(c);
  if (sign == Sign::minus)
    out.push_back(evaluate_condition(r, "c_star_neq_minus_c", cs, r.negate(c), opts));
  else
    out.push_back(evaluate_condition(r, "c_star_neq_c", cs, c, opts));
  auto proj = r.add(r.multiply(rep.a, rep.a_dagger), r.multiply(rep.d, rep.d_dagger));
  auto inner = product(r, proj, c, rep.b, rep.b_dagger);
  auto h = sign == Sign::minus ? skew_part(r, inner) : herm_part(r, inner);
  out.push_back(evaluate_condition(r, "H_condition", h, r.add(c, c), opts));
  return out;
}

template <StarRing R>
bool is_solvable(const R& r, Sign sign, const HypothesisReport<R>& rep, const element_t<R>& c,
                 const SolveOptions& opts = {}) {
  for (const auto& cond : solvability_conditions(r, sign, rep, c, opts))
    if (!cond.holds) return false;
  return true;
}

/// Left-hand side of the equation of the given kind evaluated at x.
template <StarRing R>
element_t<R> equation_lhs(const R& r, EquationKind kind, const element_t<R>& a, const element_t<R>& b,
                          const element_t<R>& x) {
  const auto xs = r.star(x);
  switch (kind) {
    case EquationKind::minus:
      return sub(r, product(r, a, x, r.star(b)), product(r, b, xs, r.star(a)));
    case EquationKind::plus:
      return r.add(product(r, a, x, r.star(b)), product(r, b, xs, r.star(a)));
    case EquationKind::sym_right:
      return r.add(r.multiply(x, r.star(a)), r.multiply(a, xs));
    case EquationKind::sym_left:
      return r.add(r.multiply(r.star(a), x), r.multiply(xs, a));
  }
  throw std::logic_error("equation_lhs: unknown kind");
}

inline EquationKind kind_of(Sign s) { return s == Sign::minus ? EquationKind::minus : EquationKind::plus; }

/// x = 1/2 (1 + E_a)(c (a+)* - v a+ a) + v - 1/2 a v* (a+)*, solving x a* + a x* = c.
template <StarRing R>
element_t<R> sym_right_solution(const R& r, const element_t<R>& a, const element_t<R>& a_dagger,
                                const element_t<R>& c, const element_t<R>& v) {
  const auto ads = r.star(a_dagger);
  auto left = r.add(r.one(), proj_complement_left(r, a, a_dagger));
  auto inner = sub(r, r.multiply(c, ads), product(r, v, a_dagger, a));
  return sub(r, r.add(r.half_of(r.multiply(left, inner)), v), r.half_of(product(r, a, r.star(v), ads)));
}

/// x = 1/2 ((a+)* c - a a+ w)(1 + F_a) + w - 1/2 (a+)* w* a, solving a* x + x* a = c.
template <StarRing R>
element_t<R> sym_left_solution(const R& r, const element_t<R>& a, const element_t<R>& a_dagger,
                               const element_t<R>& c, const element_t<R>& w) {
  const auto ads = r.star(a_dagger);
  auto right = r.add(r.one(), proj_complement_right(r, a, a_dagger));
  auto inner = sub(r, r.multiply(ads, c), product(r, a, a_dagger, w));
  return sub(r, r.add(r.half_of(r.multiply(inner, right)), w), r.half_of(product(r, ads, r.star(w), a)));
}

/// The full solution set {x0 + phi(v)} of one solvable equation.
///
/// For the symmetric kinds `report` only carries a and a+ (b, b+, d, d+ are
/// zero) and `b` is unused.
template <StarRing R>
struct SolutionFamily {
  EquationKind kind;
  R ring;
  element_t<R> a, b, c;
  element_t<R> x0;
  HypothesisReport<R> report;
  SolveOptions options;

  /// The homogeneous part phi(v); adding it to x0 gives another solution.
  element_t<R> homogeneous(const element_t<R>& v) const {
    switch (kind) {
      case EquationKind::minus: return phi(ring, Sign::minus, report, v);
      case EquationKind::plus: return phi(ring, Sign::plus, report, v);
      case EquationKind::sym_right: return sym_right_solution(ring, a, report.a_dagger, ring.zero(), v);
      case EquationKind::sym_left: return sym_left_solution(ring, a, report.a_dagger, ring.zero(), v);
    }
    throw std::logic_error("SolutionFamily: unknown kind");
  }

  /// The member of the family at parameter v.
  element_t<R> at(const element_t<R>& v) const {
    switch (kind) {
      case EquationKind::sym_right: return sym_right_solution(ring, a, report.a_dagger, c, v);
      case EquationKind::sym_left: return sym_left_solution(ring, a, report.a_dagger, c, v);
      default: return ring.add(x0, homogeneous(v));
    }
  }

  element_t<R> lhs(const element_t<R>& x) const { return equation_lhs(ring, kind, a, b, x); }

  ConditionResult check(const element_t<R>& x) const {
    return evaluate_condition(ring, "equation", lhs(x), c, options);
  }

  bool satisfies(const element_t<R>& x) const { return check(x).holds; }
};

enum class SolveStatus { solved, unsolvable, hypotheses_fail };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solved";
    case SolveStatus::unsolvable: return "unsolvable";
    case SolveStatus::hypotheses_fail: return "hypotheses_fail";
  }
  return "?";
}

template <StarRing R>
struct SolveResult {
  SolveStatus status;
  HypothesisReport<R> report;
  std::vector<ConditionResult> conditions;  // hypotheses first, then solvability
  std::optional<SolutionFamily<R>> family;

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

/// Solves a x b* -+ b x* a* = c. Returns hypotheses_fail when the range or
/// hermitian hypothesis is violated (the formulas are then not applied),
/// unsolvable when a solvability condition fails. NotMpInvertible propagates.
template <MpRing R>
SolveResult<R> solve(const R& r, Sign sign, const element_t<R>& a, const element_t<R>& b,
                     const element_t<R>& c, const SolveOptions& opts = {}) {
  SolveResult<R> out{SolveStatus::solved, check_hypotheses(r, a, b, opts), {}, std::nullopt};
  out.conditions = {out.report.range, out.report.hermitian};
  if (!out.report.valid()) {
    out.status = SolveStatus::hypotheses_fail;
    return out;
  }
  auto conds = solvability_conditions(r, sign, out.report, c, opts);
  out.conditions.insert(out.conditions.end(), conds.begin(), conds.end());
  for (const auto& cond : conds)
    if (!cond.holds) out.status = SolveStatus::unsolvable;
  if (out.status == SolveStatus::solved)
    out.family = SolutionFamily<R>{kind_of(sign), r, a, b, c, particular(r, sign, out.report, c), out.report, opts};
  return out;
}

namespace detail {

template <MpRing R>
SolveResult<R> solve_symmetric(const R& r, EquationKind kind, const element_t<R>& a, const element_t<R>& rhs,
                               const SolveOptions& opts) {
  HypothesisReport<R> rep{a, r.zero(), r.mp_inverse(a), r.zero(), {}, {}, r.zero(), r.zero()};
  rep.range = {"range_condition", true, 0.0, false};
  rep.hermitian = {"hermitian_condition", true, 0.0, false};
  const bool right = kind == EquationKind::sym_right;
  auto proj = right ? proj_complement_left(r, a, rep.a_dagger) : proj_complement_right(r, a, rep.a_dagger);

  SolveResult<R> out{SolveStatus::solved, rep, {}, std::nullopt};
  out.conditions.push_back(evaluate_condition(r, "b_star_neq_b", r.star(rhs), rhs, opts));
  out.conditions.push_back(
      evaluate_condition(r, right ? "E_condition" : "F_condition", product(r, proj, rhs, proj), r.zero(), opts));
  for (const auto& cond : out.conditions)
    if (!cond.holds) out.status = SolveStatus::unsolvable;
  if (out.status == SolveStatus::solved) {
    auto x0 = right ? sym_right_solution(r, a, rep.a_dagger, rhs, r.zero())
                    : sym_left_solution(r, a, rep.a_dagger, rhs, r.zero());
    out.family = SolutionFamily<R>{kind, r, a, r.zero(), rhs, std::move(x0), rep, opts};
  }
  return out;
}

}  // namespace detail

/// Solves x a* + a x* = b: solvable iff b* = b and E_a b E_a = 0.
template <MpRing R>
SolveResult<R> solve_sym_right(const R& r, const element_t<R>& a, const element_t<R>& b,
                               const SolveOptions& opts = {}) {
  return detail::solve_symmetric(r, EquationKind::sym_right, a, b, opts);
}

/// Solves a* x + x* a = b: solvable iff b* = b and F_a b F_a = 0.
template <MpRing R>
SolveResult<R> solve_sym_left(const R& r, const element_t<R>& a, const element_t<R>& b,
                              const SolveOptions& opts = {}) {
  return detail::solve_symmetric(r, EquationKind::sym_left, a, b, opts);
}

/// Draws v from a generator seeded with `seed` and returns the family member
/// at v. Deterministic per seed; the result is re-verified by substitution.
template <SampleableRing R>
element_t<R> family_sample(const SolutionFamily<R>& fam, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  element_t<R> x = fam.at(fam.ring.random_element(rng));
  if (!fam.satisfies(x)) throw std::logic_error("family_sample: sampled element fails the equation");
  return x;
}

}  // namespace starsolve
