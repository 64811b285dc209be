// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "starsolve/cli.hpp"
#include "support.hpp"

using namespace testing_support;
namespace fs = std::filesystem;

namespace {

struct Tally {
  long checks = 0;
  long failures = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failures;
      if (notes.size() < 5) notes.push_back(what);
    }
  }
};

struct Criterion {
  int id;
  std::string name;
  std::function<std::string(Tally&)> run;  // returns a one-line detail
};

constexpr std::array<GenFamily, 4> kFamilies{GenFamily::unitary, GenFamily::b_eq_a, GenFamily::diagonal,
                                             GenFamily::rejection};

Involution inv_of(int t) { return t % 2 ? kTrans : kConj; }

std::string format_seconds(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << "s";
  return os.str();
}

// ---- 1 ----

std::string penrose_suite(Tally& tally) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  for (auto inv : {kConj, kTrans}) {
    for (int t = 0; t < 500; ++t) {
      std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 4;
      M m = t % 5 == 0 ? M::random(r, c, inv, rng) : random_low_rank(r, c, inv, rng);
      M md = mp_inverse(m);
      bool ok = mat_mul(mat_mul(m, md), m) == m && mat_mul(mat_mul(md, m), md) == md &&
                mat_star(mat_mul(m, md)) == mat_mul(m, md) && mat_star(mat_mul(md, m)) == mat_mul(md, m);
      tally.expect(ok, "exact Penrose failure");
    }
    for (int t = 0; t < 500; ++t) {
      std::size_t r = 1 + t % 4, c = 1 + (t / 4) % 4;
      FM m = t % 2 ? FM::random(r, c, inv, rng) : to_float(random_low_rank(r, c, inv, rng));
      FM md = mp_inverse(m);
      const double tol = 1e-9 * (1.0 + std::max(m.max_abs(), md.max_abs()));
      bool ok = max_abs_diff(mat_mul(mat_mul(m, md), m), m) <= tol &&
                max_abs_diff(mat_mul(mat_mul(md, m), md), md) <= tol &&
                max_abs_diff(mat_star(mat_mul(m, md)), mat_mul(m, md)) <= tol &&
                max_abs_diff(mat_star(mat_mul(md, m)), mat_mul(md, m)) <= tol;
      tally.expect(ok, "float Penrose residual above 1e-9*(1+max-abs)");
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  tally.expect(secs < 30.0, "runtime above 30 s");
  return "2000 matrices in " + format_seconds(secs);
}

// ---- 2 ----

std::string projection_suite(Tally& tally) {
  GenRng rng(2002);
  for (int t = 0; t < 200; ++t) {
    const auto family = kFamilies[t % 4];
    const auto inv = inv_of(t / 4);
    const std::size_t n = 1 + (t / 8) % 3;
    MatrixRing<Z> r(n, inv);
    auto [a, b] = generate_pair(family, n, inv, rng);
    auto rep = check_hypotheses(r, a, b);
    tally.expect(rep.valid(), "generated pair fails hypotheses");
    M d = mat_mul(proj_complement_left(r, b, rep.b_dagger), a);
    M dd = mat_mul(rep.a_dagger, proj_complement_left(r, b, rep.b_dagger));
    tally.expect(is_mp_inverse(r, d, dd), "a+ E_b is not the MP-inverse of E_b a");
    tally.expect(mat_mul(dd, b).is_zero(), "d+ b != 0");
    tally.expect(product(r, mat_star(b), d, dd).is_zero(), "b* d d+ != 0");
    tally.expect(product(r, d, dd, a) == d, "d d+ a != d");
    tally.expect(mat_mul(dd, a) == mat_mul(dd, d), "d+ a != d+ d");
  }
  return "200 pairs";
}

// ---- 3 and 4 share instances ----

struct SquareInstance {
  Sign sign;
  M a, b, c;
};

std::vector<SquareInstance> iff_instances() {
  std::vector<SquareInstance> out;
  GenRng rng(3003);
  for (Sign sign : {Sign::minus, Sign::plus})
    for (int t = 0; t < 300; ++t) {
      const auto family = kFamilies[t % 4];
      const auto inv = inv_of(t / 4);
      const std::size_t n = 1 + (t / 8) % 3;
      auto [a, b] = generate_pair(family, n, inv, rng);
      M c = generate_rhs(kind_of(sign), a, b, t % 2 == 0, rng);
      out.push_back({sign, a, b, c});
    }
  return out;
}

const std::vector<SquareInstance>& shared_instances() {
  static const auto inst = iff_instances();
  return inst;
}

std::string iff_suite(Tally& tally) {
  int solvable = 0, forced = 0;
  for (std::size_t i = 0; i < shared_instances().size(); ++i) {
    const auto& in = shared_instances()[i];
    MatrixRing<Z> r(in.a.rows(), in.a.involution());
    auto res = solve(r, in.sign, in.a, in.b, in.c);
    auto oracle = oracle_solve(in.sign, in.a, in.b, in.c);
    tally.expect(res.status != SolveStatus::hypotheses_fail, "hypotheses fail on generated instance");
    tally.expect((res.status == SolveStatus::solved) == oracle.solvable, "verdict disagrees with oracle");
    if (i % 300 % 2 == 0) {
      ++forced;
      tally.expect(res.status == SolveStatus::solved, "force-solvable instance reported unsolvable");
    }
    if (res.family) {
      ++solvable;
      tally.expect(res.family->lhs(res.family->x0) == in.c, "x0 substitution does not reproduce c");
    }
  }
  return std::to_string(shared_instances().size()) + " instances, " + std::to_string(forced) + " forced, " +
         std::to_string(solvable) + " solvable";
}

std::string completeness_suite(Tally& tally) {
  long kernel_elems = 0, trials = 0;
  for (const auto& in : shared_instances()) {
    MatrixRing<Z> r(in.a.rows(), in.a.involution());
    auto res = solve(r, in.sign, in.a, in.b, in.c);
    if (!res.family) continue;
    auto oracle = oracle_solve(in.sign, in.a, in.b, in.c);
    for (const auto& h : oracle.kernel_basis) {
      ++kernel_elems;
      tally.expect(phi(r, in.sign, res.report, h) == h, "phi(h) != h on oracle kernel element");
    }
    for (std::uint64_t s = 0; s < 5; ++s) {
      ++trials;
      std::mt19937_64 vr(s);
      M v = r.random_element(vr);
      auto image = apply_system(oracle.system, coordinates(phi(r, in.sign, res.report, v)));
      bool zero = std::all_of(image.begin(), image.end(), [](const Q& q) { return q.is_zero(); });
      tally.expect(zero, "phi(v) outside the oracle kernel");
    }
  }
  return std::to_string(kernel_elems) + " kernel elements fixed, " + std::to_string(trials) + " phi(v) in kernel";
}

// ---- 5 ----

std::string symmetric_suite(Tally& tally) {
  GenRng rng(5005);
  int solvable = 0;
  for (EquationKind kind : {EquationKind::sym_right, EquationKind::sym_left})
    for (int t = 0; t < 200; ++t) {
      const auto family = kFamilies[t % 4];
      const auto inv = inv_of(t / 4);
      const std::size_t n = 1 + (t / 8) % 3;
      MatrixRing<Z> r(n, inv);
      M a = generate_coefficient(family, n, inv, rng);
      M b = generate_rhs(kind, a, a, t % 2 == 0, rng);
      auto res = kind == EquationKind::sym_right ? solve_sym_right(r, a, b) : solve_sym_left(r, a, b);
      auto oracle = oracle_solve(kind, a, a, b);
      tally.expect((res.status == SolveStatus::solved) == oracle.solvable, "condition pair disagrees with oracle");
      if (!res.family) continue;
      ++solvable;
      for (std::uint64_t s = 0; s < 5; ++s) {
        std::mt19937_64 vr(s);
        M x = res.family->at(r.random_element(vr));
        tally.expect(equation_lhs(r, kind, a, a, x) == b, "solution formula fails substitution");
      }
    }
  return "400 instances, " + std::to_string(solvable) + " solvable";
}

// ---- 6 ----

std::string embedding_suite(Tally& tally) {
  GenRng rng(6006);
  int solvable = 0;
  for (int t = 0; t < 150; ++t) {
    const auto u = static_cast<std::size_t>(t);
    RectDims d{1 + u % 2, 1 + (u / 2) % 2, 1 + (u / 4) % 2};
    const auto inv = inv_of(t / 8);
    const Sign sign = (t / 16) % 2 ? Sign::plus : Sign::minus;
    const auto family = (t / 32) % 2 ? GenFamily::diagonal : GenFamily::rejection;
    auto [A, B] = generate_rect_pair(family, d, inv, rng);
    M C = generate_rhs(kind_of(sign), A, B, t % 3 != 0, rng);
    RectProblem<Z> prob{A, B, C};
    auto direct = solve_rect(prob, sign);
    auto square = solve_rect_embedded(prob, sign);
    tally.expect(direct.status != SolveStatus::hypotheses_fail, "rect hypotheses fail on generated instance");

    auto emb = embed(prob);
    auto [ad, bd] = embed_mp(direct.A_dagger, direct.B_dagger, d);
    MatrixRing<Z> r(d.order(), inv);
    tally.expect(is_mp_inverse(r, emb.a, ad) && is_mp_inverse(r, emb.b, bd), "embed_mp fails Penrose");
    tally.expect(direct.status == square.status, "routes disagree on solvability");
    tally.expect((direct.status == SolveStatus::solved) == oracle_solve(sign, A, B, C).solvable,
                 "rect verdict disagrees with oracle");
    if (!direct.family || !square.family) continue;
    ++solvable;
    tally.expect(rect_equation_lhs(sign, A, B, direct.family->X0) == C, "direct X0 fails substitution");
    tally.expect(square.family->satisfies(square.family->x0), "embedded x0 fails substitution");
    M extracted = extract_solution(square.family->x0, d);
    tally.expect(rect_equation_lhs(sign, A, B, extracted) == C, "extracted X0 fails substitution");
    tally.expect(extracted == direct.family->X0, "extracted and direct X0 differ");
  }
  return "150 instances, " + std::to_string(solvable) + " solvable";
}

// ---- 7 ----

std::string float_suite(Tally& tally) {
  GenRng rng(7007);
  int matches = 0, indeterminate_mismatch = 0, solved = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto family = kFamilies[t % 4];
    const auto inv = inv_of(t / 4);
    const std::size_t n = 1 + (t / 8) % 3;
    const Sign sign = (t / 24) % 2 ? Sign::plus : Sign::minus;
    auto [a, b] = generate_pair(family, n, inv, rng);
    M c = generate_rhs(kind_of(sign), a, b, t % 2 == 0, rng);
    MatrixRing<Z> er(n, inv);
    MatrixRing<ComplexFloat> fr(n, inv);
    auto exact = solve(er, sign, a, b, c);
    FM fc = to_float(c);
    auto approx = solve(fr, sign, to_float(a), to_float(b), fc);
    if (exact.status == approx.status) {
      ++matches;
    } else if (approx.indeterminate()) {
      ++indeterminate_mismatch;
    } else {
      tally.expect(false, "float verdict differs from exact without indeterminate flag");
    }
    if (approx.family) {
      ++solved;
      const auto& fam = *approx.family;
      double res = max_abs_diff(fam.lhs(fam.x0), fc);
      double bound = 1e-8 * (1.0 + fc.max_abs());
      worst = std::max(worst, res / bound);
      tally.expect(res <= bound, "float residual above 1e-8*(1+|C|)");
    }
  }
  tally.expect(matches >= 99, "fewer than 99 verdict matches");
  std::ostringstream os;
  os << matches << "/100 verdicts match, " << indeterminate_mismatch << " indeterminate, " << solved
     << " solved, worst residual/bound " << worst;
  return os.str();
}

// ---- 8 ----

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(const std::string& s) {
  static const std::regex ts(R"re("timestamp": "[^"]*")re");
  return std::regex_replace(s, ts, R"("timestamp": "<timestamp>")");
}

int run_cli(const std::string& args, const fs::path& stdout_file) {
  std::string cmd = std::string(STARSOLVE_CLI) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string cli_suite(Tally& tally) {
  const fs::path golden = STARSOLVE_GOLDEN_DIR;
  const fs::path work = fs::temp_directory_path() / "starsolve_acceptance";
  fs::create_directories(work);
  const bool update = std::getenv("STARSOLVE_UPDATE_GOLDEN") != nullptr;
  auto g = [&](const std::string& f) { return (golden / f).string(); };
  auto w = [&](const std::string& f) { return (work / f).string(); };

  struct Case {
    std::string name, args, report;  // report: file written via -o, empty for stdout
    int code;
  };
  const std::vector<Case> cases{
      {"mp_rank_one", "mp -i " + g("mp_rank_one.json") + " -o " + w("mp_rank_one.out"), "mp_rank_one.out", 0},
      {"check_scalar", "check -i " + g("scalar_minus.json"), "", 0},
      {"check_diag", "check -i " + g("diag_check.json"), "", 0},
      {"solve_scalar", "solve -i " + g("scalar_minus.json") + " --samples 2 --oracle -o " + w("solve_scalar.out"),
       "solve_scalar.out", 0},
      {"solve_rect", "solve -i " + g("rect_minus.json") + " --oracle -o " + w("solve_rect.out"), "solve_rect.out",
       0},
      {"gen_unitary", "gen --family unitary --dims 2 --seed 7", "", 0},
      {"verify_rect", "verify -i " + g("rect_minus.json") + " -s " + g("rect_x0.json"), "", 0},
  };
  int compared = 0;
  for (const auto& c : cases) {
    const fs::path out = work / (c.name + ".stdout");
    int rc = run_cli(c.args, out);
    tally.expect(rc == c.code, c.name + ": exit " + std::to_string(rc));
    const std::string produced = strip_timestamp(read_file(c.report.empty() ? out : work / c.report));
    const fs::path expected = golden / (c.name + ".expected.json");
    if (update) std::ofstream(expected) << produced;
    tally.expect(fs::exists(expected) && read_file(expected) == produced, c.name + ": report differs from golden");
    ++compared;
  }
  run_cli("gen --family unitary --dims 2 --seed 7 -o " + w("gen_a.json"), work / "gen_a.stdout");
  run_cli("gen --family unitary --dims 2 --seed 7 -o " + w("gen_b.json"), work / "gen_b.stdout");
  tally.expect(read_file(w("gen_a.json")) == read_file(w("gen_b.json")), "gen output not byte-identical");

  std::ofstream(w("malformed.json")) << "{ \"version\": ";
  std::ofstream(w("perturbed.json")) << R"({"solution": [[["0", "1", "1", "1"]]]})";
  const std::vector<Case> negatives{
      {"malformed", "mp -i " + w("malformed.json"), "", 2},
      {"unsolvable", "solve -i " + g("scalar_unsolvable.json"), "", 4},
      {"hypotheses", "solve -i " + g("diag_check.json"), "", 5},
      {"perturbed", "verify -i " + g("rect_minus.json") + " -s " + w("perturbed.json"), "", 6},
      {"float_oracle", "solve -i " + g("scalar_float.json") + " --oracle", "", 2},
      {"bad_family", "gen --family nonesuch", "", 2},
      {"bad_flag", "solve --frobnicate", "", 2},
  };
  for (const auto& c : negatives) {
    int rc = run_cli(c.args, work / (c.name + ".stdout"));
    tally.expect(rc == c.code, c.name + ": exit " + std::to_string(rc) + ", expected " + std::to_string(c.code));
  }
  const std::string unsolvable = read_file(work / "unsolvable.stdout");
  tally.expect(unsolvable.find("c_star_neq_minus_c") != std::string::npos, "unsolvable report lacks condition name");
  fs::remove_all(work);
  return std::to_string(compared) + " golden reports, " + std::to_string(negatives.size()) + " negative controls";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Penrose suite", penrose_suite},
      {2, "d = E_b a identities", projection_suite},
      {3, "solvability iff oracle", iff_suite},
      {4, "completeness of phi", completeness_suite},
      {5, "symmetric equations", symmetric_suite},
      {6, "rectangular embedding", embedding_suite},
      {7, "float path sanity", float_suite},
      {8, "CLI contract", cli_suite},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Tally tally;
    std::string detail;
    try {
      detail = c.run(tally);
    } catch (const std::exception& e) {
      tally.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = tally.failures == 0;
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << detail << " ("
              << tally.checks - tally.failures << "/" << tally.checks << " checks)\n";
    for (const auto& n : tally.notes) std::cout << "      " << n << "\n";
  }
  return failed == 0 ? 0 : 1;
}
