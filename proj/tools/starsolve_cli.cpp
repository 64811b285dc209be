#include <CLI11.hpp>

#include <iostream>

#include "starsolve/cli.hpp"

namespace cli = starsolve::cli;

namespace {

void add_common(CLI::App* sub, cli::Options& o) {
  sub->add_option("-i,--input", o.input, "input JSON file")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--output", o.output, "report file (JSON goes to stdout when omitted)");
  sub->add_option("--tol", o.tol, "relative tolerance for the float backend (default 1e-9, env STAR_SOLVE_TOL)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solve a x b* -+ b x* a* = c and its symmetric and rectangular variants"};
  app.require_subcommand(1);
  cli::Options o;

  auto* mp = app.add_subcommand("mp", "Moore-Penrose inverse of one matrix with Penrose residuals");
  add_common(mp, o);

  auto* check = app.add_subcommand("check", "hypotheses and solvability verdict");
  add_common(check, o);

  auto* solve = app.add_subcommand("solve", "particular solution and seeded samples of the general solution");
  add_common(solve, o);
  solve->add_option("--samples", o.samples, "number of sampled solutions")->capture_default_str();
  solve->add_flag("--oracle", o.oracle, "cross-check against the linear-algebra oracle (exact only)");
  solve->add_option("--seed", o.seed, "base seed for samples");

  auto* gen = app.add_subcommand("gen", "random instance satisfying the hypotheses");
  gen->add_option("--kind", o.kind, "minus|plus|sym_right|sym_left|rect_minus|rect_plus")->capture_default_str();
  gen->add_option("--family", o.family, "unitary|b_eq_a|diagonal|rejection")->capture_default_str();
  gen->add_option("--dims", o.dims, "n, or m,n,p for rect kinds (A is m x n, B is m x p, X is n x p)")->capture_default_str();
  gen->add_option("--seed", o.seed, "generator seed (default 0)");
  gen->add_option("--backend", o.backend, "exact|float")->capture_default_str();
  gen->add_option("--involution", o.involution, "conjugate_transpose|transpose")->capture_default_str();
  gen->add_flag("--force-solvable", o.force_solvable, "right-hand side in the image of the map");
  gen->add_option("-o,--output", o.output, "instance file (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "substitute a claimed solution into an instance");
  add_common(verify, o);
  verify->add_option("-s,--solution", o.solution, "file with a 'solution' or 'x0' matrix")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? cli::kOk : cli::kParseError;
  }

  if (*mp) return cli::cmd_mp(o, std::cout, std::cerr);
  if (*check) return cli::cmd_check(o, std::cout, std::cerr);
  if (*solve) return cli::cmd_solve(o, std::cout, std::cerr);
  if (*gen) return cli::cmd_gen(o, std::cout, std::cerr);
  if (*verify) return cli::cmd_verify(o, std::cout, std::cerr);
  return cli::kParseError;
}
