#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "starsolve/generators.hpp"
#include "starsolve/io.hpp"
#include "starsolve/matrix_ring.hpp"
#include "starsolve/oracle.hpp"
#include "starsolve/rect_embedding.hpp"
#include "starsolve/solvers.hpp"

namespace starsolve::cli {

using io::json;

/// Process exit codes. Stable contract.
enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kParseError = 2,
  kNotMpInvertible = 3,
  kUnsolvable = 4,
  kHypothesesFail = 5,
  kVerifyFailed = 6,
};

inline constexpr std::size_t kDefaultSamples = 3;
inline constexpr std::size_t kOracleTrials = 5;
inline constexpr const char* kTolEnv = "STAR_SOLVE_TOL";

struct Options {
  std::string input;
  std::string output;
  std::string solution;
  std::size_t samples = kDefaultSamples;
  bool oracle = false;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  // gen
  std::string kind = "minus";
  std::string family = "unitary";
  std::string dims = "2";
  std::string backend = "exact";
  std::string involution = "conjugate_transpose";
  bool force_solvable = false;
};

/// Bad command-line parameters (exit 2).
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Flag, then STAR_SOLVE_TOL, then the default.
inline double resolve_tol(const Options& opts) {
  if (opts.tol) {
    if (!(*opts.tol >= 0.0)) throw UsageError("--tol must be non-negative");
    return *opts.tol;
  }
  if (const char* env = std::getenv(kTolEnv)) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v >= 0.0))
      throw UsageError(std::string(kTolEnv) + " is not a non-negative number: '" + env + "'");
    return v;
  }
  return kDefaultConditionTol;
}

inline std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

inline json report_header(std::string_view command) {
  return {{"version", io::kFormatVersion}, {"command", command}, {"timestamp", utc_timestamp()}};
}

inline json to_json(const ConditionResult& c) {
  return {{"holds", c.holds}, {"residual", c.residual}, {"indeterminate", c.indeterminate}};
}

inline json conditions_json(const std::vector<ConditionResult>& cs) {
  json j = json::object();
  for (const auto& c : cs) j[c.name] = to_json(c);
  return j;
}

inline json to_json(const OracleCheckReport& r) {
  return {{"passed", r.passed},          {"x0_solves", r.x0_solves}, {"phi_in_kernel", r.phi_in_kernel},
          {"fixed_points", r.fixed_points}, {"kernel_dimension", r.kernel_dimension}, {"trials", r.trials},
          {"failures", r.failures}};
}

/// Writes the report to --output when given (text summary to `out`),
/// otherwise the JSON itself to `out`.
inline void emit(const Options& opts, const json& report, const std::string& summary, std::ostream& out) {
  if (opts.output.empty()) {
    out << report.dump(2) << "\n";
  } else {
    io::write_json_file(opts.output, report);
    out << summary;
  }
}

template <Scalar S>
json residual_json(const Matrix<S>& lhs, const Matrix<S>& rhs) {
  double diff = max_abs_diff(lhs, rhs);
  return {{"max_abs", diff}, {"relative", diff / (1.0 + std::max(lhs.max_abs(), rhs.max_abs()))}};
}

namespace detail {

struct Outcome {
  json report;
  std::string summary;
  int code = kOk;
};

inline std::string verdict_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return "solvable";
    case SolveStatus::unsolvable: return "unsolvable";
    case SolveStatus::hypotheses_fail: return "hypotheses_fail";
  }
  return "?";
}

inline int code_for(SolveStatus s) {
  switch (s) {
    case SolveStatus::solved: return kOk;
    case SolveStatus::unsolvable: return kUnsolvable;
    case SolveStatus::hypotheses_fail: return kHypothesesFail;
  }
  return kInternalError;
}

template <class Result>
json solvability_json(const Result& res) {
  return {{"verdict", verdict_string(res.status)},
          {"conditions", conditions_json(res.conditions)},
          {"failed_conditions", res.failed_conditions()},
          {"indeterminate", res.indeterminate()}};
}

inline json oracle_verdict_json(const OracleResult& o) {
  json j = {{"solvable", o.solvable}, {"real_dimension", o.real_dimension}, {"rank", o.rank}};
  if (o.particular) j["particular"] = io::to_json(*o.particular);
  return j;
}

/// Runs one square/symmetric instance on backend S. `solve_samples` false
/// for `check`.
template <Scalar S>
Outcome run_square(const io::InstanceFile& f, const Options& opts, bool solve_mode) {
  const SolveOptions sopts{resolve_tol(opts)};
  const auto& a = f.operand<S>("a");
  const auto& b = f.operand<S>("b");
  MatrixRing<S> ring(a.rows(), f.involution);
  SolveResult<MatrixRing<S>> res = [&] {
    switch (f.kind) {
      case io::InstanceKind::sym_right: return solve_sym_right(ring, a, b, sopts);
      case io::InstanceKind::sym_left: return solve_sym_left(ring, a, b, sopts);
      default: return solve(ring, io::sign_of(f.kind), a, b, f.operand<S>("c"), sopts);
    }
  }();

  Outcome out;
  out.report = report_header(solve_mode ? "solve" : "check");
  out.report["kind"] = io::to_string(f.kind);
  out.report["backend"] = io::to_string(f.backend);
  out.report["involution"] = to_string(f.involution);
  out.report["tolerance"] = is_exact_v<S> ? 0.0 : sopts.tol;
  json hyp = {{"a_dagger", io::to_json(res.report.a_dagger)}};
  if (!io::is_symmetric(f.kind)) {
    hyp["b_dagger"] = io::to_json(res.report.b_dagger);
    hyp["d"] = io::to_json(res.report.d);
    hyp["d_dagger"] = io::to_json(res.report.d_dagger);
    hyp["range_condition"] = to_json(res.report.range);
    hyp["hermitian_condition"] = to_json(res.report.hermitian);
  }
  out.report["hypotheses"] = hyp;
  out.report["solvability"] = solvability_json(res);
  out.code = solve_mode ? code_for(res.status) : kOk;

  std::ostringstream sum;
  sum << (solve_mode ? "solve" : "check") << ": kind=" << io::to_string(f.kind)
      << " backend=" << io::to_string(f.backend) << " verdict=" << verdict_string(res.status);
  if (res.indeterminate()) sum << " (indeterminate)";
  sum << "\n";
  for (const auto& name : res.failed_conditions()) sum << "  failed: " << name << "\n";

  if (solve_mode && res.family) {
    const auto& fam = *res.family;
    auto x0_check = fam.check(fam.x0);
    if (!x0_check.holds) {
      out.code = kInternalError;
      sum << "  x0 failed re-verification (residual " << x0_check.residual << ")\n";
    }
    out.report["x0"] = io::to_json(fam.x0);
    out.report["x0_residual"] = residual_json(fam.lhs(fam.x0), fam.c);
    json samples = json::array();
    const std::uint64_t base = opts.seed.value_or(f.seed.value_or(0));
    for (std::size_t i = 0; i < opts.samples; ++i) {
      auto x = family_sample(fam, base + i);
      samples.push_back({{"seed", base + i}, {"x", io::to_json(x)}, {"residual", residual_json(fam.lhs(x), fam.c)}});
    }
    out.report["samples"] = samples;
    sum << "  x0 = " << fam.x0 << "\n  " << opts.samples << " sample(s) verified\n";
  }

  if (solve_mode && opts.oracle) {
    if constexpr (is_exact_v<S>) {
      const auto& c = io::is_symmetric(f.kind) ? b : f.operand<S>("c");
      auto oracle = oracle_solve(io::equation_kind(f.kind), a, io::is_symmetric(f.kind) ? a : b, c);
      json oj = oracle_verdict_json(oracle);
      bool agrees = oracle.solvable == (res.status == SolveStatus::solved);
      if (res.status != SolveStatus::hypotheses_fail) oj["verdict_agrees"] = agrees;
      if (res.family) {
        auto check = verify_family_against_oracle(*res.family, oracle, kOracleTrials);
        oj["family_check"] = to_json(check);
        if (!check.passed) agrees = false;
      }
      out.report["oracle"] = oj;
      if (res.status != SolveStatus::hypotheses_fail && !agrees) {
        out.code = kInternalError;
        sum << "  oracle cross-check FAILED\n";
      } else {
        sum << "  oracle: solvable=" << (oracle.solvable ? "true" : "false")
            << " kernel dimension=" << oracle.real_dimension << "\n";
      }
    }
  }
  out.summary = sum.str();
  return out;
}

template <Scalar S>
Outcome run_rect(const io::InstanceFile& f, const Options& opts, bool solve_mode) {
  const SolveOptions sopts{resolve_tol(opts)};
  RectProblem<S> prob{f.operand<S>("A"), f.operand<S>("B"), f.operand<S>("C")};
  const Sign sign = io::sign_of(f.kind);
  auto res = solve_rect(prob, sign, sopts);

  Outcome out;
  out.report = report_header(solve_mode ? "solve" : "check");
  out.report["kind"] = io::to_string(f.kind);
  out.report["backend"] = io::to_string(f.backend);
  out.report["involution"] = to_string(f.involution);
  out.report["tolerance"] = is_exact_v<S> ? 0.0 : sopts.tol;
  const auto d = prob.dims();
  out.report["dims"] = json::array({d.m, d.n, d.p});
  json hyp = {{"A_dagger", io::to_json(res.A_dagger)},
              {"B_dagger", io::to_json(res.B_dagger)},
              {"D", io::to_json(res.D)},
              {"D_dagger", io::to_json(res.D_dagger)},
              {"range_condition", to_json(res.conditions.at(0))},
              {"hermitian_condition", to_json(res.conditions.at(1))}};
  out.report["hypotheses"] = hyp;
  out.report["solvability"] = solvability_json(res);
  out.code = solve_mode ? code_for(res.status) : kOk;

  std::ostringstream sum;
  sum << (solve_mode ? "solve" : "check") << ": kind=" << io::to_string(f.kind)
      << " backend=" << io::to_string(f.backend) << " dims=" << d.m << "," << d.n << "," << d.p
      << " verdict=" << verdict_string(res.status);
  if (res.indeterminate()) sum << " (indeterminate)";
  sum << "\n";
  for (const auto& name : res.failed_conditions()) sum << "  failed: " << name << "\n";

  if (solve_mode && res.family) {
    const auto& fam = *res.family;
    if (!fam.satisfies(fam.X0)) {
      out.code = kInternalError;
      sum << "  X0 failed re-verification\n";
    }
    out.report["x0"] = io::to_json(fam.X0);
    out.report["x0_residual"] = residual_json(fam.lhs(fam.X0), prob.C);
    json samples = json::array();
    const std::uint64_t base = opts.seed.value_or(f.seed.value_or(0));
    for (std::size_t i = 0; i < opts.samples; ++i) {
      auto X = fam.sample(base + i);
      samples.push_back({{"seed", base + i}, {"x", io::to_json(X)}, {"residual", residual_json(fam.lhs(X), prob.C)}});
    }
    out.report["samples"] = samples;
    sum << "  X0 = " << fam.X0 << "\n  " << opts.samples << " sample(s) verified\n";
  }

  if (solve_mode && opts.oracle) {
    if constexpr (is_exact_v<S>) {
      auto oracle = oracle_solve(sign, prob.A, prob.B, prob.C);
      json oj = oracle_verdict_json(oracle);
      bool agrees = oracle.solvable == (res.status == SolveStatus::solved);
      if (res.status != SolveStatus::hypotheses_fail) oj["verdict_agrees"] = agrees;
      if (res.family) {
        auto check = verify_family_against_oracle(*res.family, oracle, kOracleTrials);
        oj["family_check"] = to_json(check);
        if (!check.passed) agrees = false;
      }
      out.report["oracle"] = oj;
      if (res.status != SolveStatus::hypotheses_fail && !agrees) {
        out.code = kInternalError;
        sum << "  oracle cross-check FAILED\n";
      } else {
        sum << "  oracle: solvable=" << (oracle.solvable ? "true" : "false")
            << " kernel dimension=" << oracle.real_dimension << "\n";
      }
    }
  }
  out.summary = sum.str();
  return out;
}

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const NotMpInvertible& e) {
    err << "error: " << e.what() << "\n";
    return kNotMpInvertible;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

inline int run_instance_command(const Options& opts, bool solve_mode, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    auto f = io::read_instance(opts.input);
    if (solve_mode && opts.oracle && f.backend != io::Backend::exact)
      throw UsageError("--oracle requires an exact instance");
    Outcome o;
    if (io::is_rect(f.kind))
      o = f.backend == io::Backend::exact ? run_rect<GaussianRational>(f, opts, solve_mode)
                                          : run_rect<ComplexFloat>(f, opts, solve_mode);
    else
      o = f.backend == io::Backend::exact ? run_square<GaussianRational>(f, opts, solve_mode)
                                          : run_square<ComplexFloat>(f, opts, solve_mode);
    emit(opts, o.report, o.summary, out);
    return o.code;
  });
}

template <Scalar S>
Outcome run_mp(const json& j, Involution inv, io::Backend backend, const Options& opts) {
  auto m = io::matrix_from_json<S>(j.at("matrix"), inv);
  auto md = mp_inverse(m);
  const double tol = resolve_tol(opts);
  json residuals = {{"aba_minus_a", max_abs_diff(mat_mul(mat_mul(m, md), m), m)},
                    {"bab_minus_b", max_abs_diff(mat_mul(mat_mul(md, m), md), md)},
                    {"ab_star_minus_ab", max_abs_diff(mat_star(mat_mul(m, md)), mat_mul(m, md))},
                    {"ba_star_minus_ba", max_abs_diff(mat_star(mat_mul(md, m)), mat_mul(md, m))}};
  bool ok = true;
  if constexpr (is_exact_v<S>) {
    ok = mat_mul(mat_mul(m, md), m) == m && mat_mul(mat_mul(md, m), md) == md &&
         mat_star(mat_mul(m, md)) == mat_mul(m, md) && mat_star(mat_mul(md, m)) == mat_mul(md, m);
  } else {
    const double scale = 1.0 + std::max(m.max_abs(), md.max_abs());
    for (const auto& [name, r] : residuals.items()) ok = ok && r.template get<double>() <= tol * scale;
  }
  Outcome out;
  out.report = report_header("mp");
  out.report["backend"] = io::to_string(backend);
  out.report["involution"] = to_string(inv);
  out.report["mp_inverse"] = io::to_json(md);
  out.report["penrose_residuals"] = residuals;
  out.report["penrose_ok"] = ok;
  std::ostringstream sum;
  sum << "mp: " << m.rows() << "x" << m.cols() << " backend=" << io::to_string(backend)
      << " penrose=" << (ok ? "ok" : "FAILED") << "\n  mp_inverse = " << md << "\n";
  out.summary = sum.str();
  out.code = ok ? kOk : kInternalError;
  return out;
}

template <Scalar S>
Outcome run_verify(const io::InstanceFile& f, const json& sol, const Options& opts) {
  const json* mj = nullptr;
  if (sol.contains("solution"))
    mj = &sol.at("solution");
  else if (sol.contains("x0"))
    mj = &sol.at("x0");
  else
    throw io::ParseError("solution file needs a 'solution' or 'x0' matrix");
  auto X = io::matrix_from_json<S>(*mj, f.involution);
  const SolveOptions sopts{resolve_tol(opts)};

  Matrix<S> lhs, rhs;
  if (io::is_rect(f.kind)) {
    const auto& A = f.operand<S>("A");
    const auto& B = f.operand<S>("B");
    if (X.rows() != A.cols() || X.cols() != B.cols()) throw io::ParseError("solution shape does not match n x p");
    lhs = rect_equation_lhs(io::sign_of(f.kind), A, B, X);
    rhs = f.operand<S>("C");
  } else {
    const auto& a = f.operand<S>("a");
    if (X.rows() != a.rows() || X.cols() != a.cols()) throw io::ParseError("solution shape does not match a");
    MatrixRing<S> ring(a.rows(), f.involution);
    lhs = equation_lhs(ring, io::equation_kind(f.kind), a, f.operand<S>("b"), X);
    rhs = io::is_symmetric(f.kind) ? f.operand<S>("b") : f.operand<S>("c");
  }
  auto cond = starsolve::detail::matrix_condition("equation", lhs, rhs, sopts);

  Outcome out;
  out.report = report_header("verify");
  out.report["kind"] = io::to_string(f.kind);
  out.report["backend"] = io::to_string(f.backend);
  out.report["verified"] = cond.holds;
  out.report["residual"] = residual_json(lhs, rhs);
  out.report["tolerance"] = is_exact_v<S> ? 0.0 : sopts.tol;
  std::ostringstream sum;
  sum << "verify: " << (cond.holds ? "ok" : "FAILED") << " (max-abs residual " << max_abs_diff(lhs, rhs) << ")\n";
  out.summary = sum.str();
  out.code = cond.holds ? kOk : kVerifyFailed;
  return out;
}

inline std::vector<std::size_t> parse_dims(const std::string& s) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      long v = std::stol(item, &pos);
      if (pos != item.size() || v < 1 || v > 8) throw UsageError("");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw UsageError("--dims must be 'n' or 'm,n,p' with entries in 1..8");
    }
  }
  if (out.size() != 1 && out.size() != 3) throw UsageError("--dims must be 'n' or 'm,n,p'");
  return out;
}

}  // namespace detail

/// `mp`: MP-inverse of one matrix plus its four Penrose residuals.
inline int cmd_mp(const Options& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    json j = io::read_json_file(opts.input);
    detail::Outcome o;
    try {
      if (j.at("version").get<std::string>() != io::kFormatVersion) throw io::ParseError("unsupported format version");
      auto backend = io::parse_backend(j.at("backend").get<std::string>());
      auto inv = io::parse_involution(j.at("involution").get<std::string>());
      o = backend == io::Backend::exact ? detail::run_mp<GaussianRational>(j, inv, backend, opts)
                                        : detail::run_mp<ComplexFloat>(j, inv, backend, opts);
    } catch (const json::exception& e) {
      throw io::ParseError(std::string("matrix file schema: ") + e.what());
    }
    emit(opts, o.report, o.summary, out);
    return o.code;
  });
}

/// `check`: hypotheses and solvability verdict, without solving.
inline int cmd_check(const Options& opts, std::ostream& out, std::ostream& err) {
  return detail::run_instance_command(opts, false, out, err);
}

/// `solve`: particular solution, seeded samples, optional oracle cross-check.
inline int cmd_solve(const Options& opts, std::ostream& out, std::ostream& err) {
  return detail::run_instance_command(opts, true, out, err);
}

/// `verify`: substitutes a claimed solution into an instance.
inline int cmd_verify(const Options& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto f = io::read_instance(opts.input);
    json sol = io::read_json_file(opts.solution);
    detail::Outcome o = f.backend == io::Backend::exact ? detail::run_verify<GaussianRational>(f, sol, opts)
                                                        : detail::run_verify<ComplexFloat>(f, sol, opts);
    emit(opts, o.report, o.summary, out);
    return o.code;
  });
}

/// Builds a generated instance (deterministic per seed).
inline io::InstanceFile generate_instance(const Options& opts) {
  io::InstanceKind kind;
  GenFamily family;
  io::Backend backend;
  Involution inv;
  try {
    kind = io::parse_kind(opts.kind);
    backend = io::parse_backend(opts.backend);
    inv = io::parse_involution(opts.involution);
    family = parse_family(opts.family);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  auto dims = detail::parse_dims(opts.dims);
  const std::uint64_t seed = opts.seed.value_or(0);
  GenRng rng(seed);

  io::InstanceFile f;
  f.kind = kind;
  f.backend = backend;
  f.involution = inv;
  f.seed = seed;
  std::map<std::string, ExactMatrix> ops;
  const EquationKind ek = io::equation_kind(kind);
  if (io::is_rect(kind)) {
    RectDims d = dims.size() == 3 ? RectDims{dims[0], dims[1], dims[2]} : RectDims{dims[0], dims[0], dims[0]};
    std::pair<ExactMatrix, ExactMatrix> ab;
    try {
      ab = generate_rect_pair(family, d, inv, rng);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    ops = {{"A", ab.first}, {"B", ab.second}, {"C", generate_rhs(ek, ab.first, ab.second, opts.force_solvable, rng)}};
    f.dims = d;
    RectProblem<GaussianRational> prob{ops["A"], ops["B"], ops["C"]};
    auto res = solve_rect(prob, io::sign_of(kind));
    if (res.status == SolveStatus::hypotheses_fail) throw std::logic_error("generated instance fails hypotheses");
    if (opts.force_solvable && res.status != SolveStatus::solved)
      throw std::logic_error("force-solvable instance is not solvable");
  } else {
    if (dims.size() != 1) throw UsageError("--dims must be a single order for square kinds");
    const std::size_t n = dims[0];
    MatrixRing<GaussianRational> ring(n, inv);
    if (io::is_symmetric(kind)) {
      auto a = generate_coefficient(family, n, inv, rng);
      auto b = generate_rhs(ek, a, a, opts.force_solvable, rng);
      ops = {{"a", a}, {"b", b}};
      auto res = kind == io::InstanceKind::sym_right ? solve_sym_right(ring, a, b) : solve_sym_left(ring, a, b);
      if (opts.force_solvable && res.status != SolveStatus::solved)
        throw std::logic_error("force-solvable instance is not solvable");
    } else {
      auto [a, b] = generate_pair(family, n, inv, rng);
      auto c = generate_rhs(ek, a, b, opts.force_solvable, rng);
      auto res = solve(ring, io::sign_of(kind), a, b, c);
      if (res.status == SolveStatus::hypotheses_fail) throw std::logic_error("generated instance fails hypotheses");
      if (opts.force_solvable && res.status != SolveStatus::solved)
        throw std::logic_error("force-solvable instance is not solvable");
      ops = {{"a", a}, {"b", b}, {"c", c}};
    }
  }
  for (auto& [name, m] : ops) {
    if (backend == io::Backend::exact)
      f.exact_operands.emplace(name, m);
    else
      f.float_operands.emplace(name, to_float(m));
  }
  return f;
}

/// `gen`: writes a hypothesis-satisfying random instance.
inline int cmd_gen(const Options& opts, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    auto f = generate_instance(opts);
    json j = io::to_json(f);
    if (opts.output.empty()) {
      out << j.dump(2) << "\n";
    } else {
      io::write_json_file(opts.output, j);
      out << "gen: kind=" << io::to_string(f.kind) << " family=" << opts.family << " seed=" << *f.seed << " -> "
          << opts.output << "\n";
    }
    return static_cast<int>(kOk);
  });
}

}  // namespace starsolve::cli
