#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "starsolve/cli.hpp"
#include "support.hpp"

using namespace testing_support;
namespace fs = std::filesystem;
namespace cli = starsolve::cli;
using starsolve::io::json;

namespace {

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("starsolve_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
    unsetenv(cli::kTolEnv);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  std::string write_instance(const std::string& name, const io::InstanceFile& f) const {
    io::write_json_file(path(name), io::to_json(f));
    return path(name);
  }

  json read(const std::string& name) const { return io::read_json_file(path(name)); }

  int run(int (*cmd)(const cli::Options&, std::ostream&, std::ostream&), const cli::Options& o) {
    out_.str("");
    err_.str("");
    return cmd(o, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

io::InstanceFile exact_instance(io::InstanceKind kind, std::map<std::string, M> ops) {
  io::InstanceFile f;
  f.kind = kind;
  f.involution = ops.begin()->second.involution();
  f.exact_operands = std::move(ops);
  return f;
}

io::InstanceFile scalar_minus(Z c) {
  return exact_instance(io::InstanceKind::minus, {{"a", scalar(gz(1))}, {"b", scalar(gz(1))}, {"c", scalar(c)}});
}

}  // namespace

TEST(InstanceFile, RoundTrip) {
  auto f = scalar_minus(gq(1, 3, -2, 7));
  f.seed = 12345678901234ULL;
  EXPECT_EQ(io::instance_from_json(io::to_json(f)), f);

  io::InstanceFile r = exact_instance(io::InstanceKind::rect_plus,
                                      {{"A", mat({{gz(1), gz(2)}})}, {"B", scalar(gz(3))}, {"C", scalar(gz(0))}});
  r.dims = RectDims{1, 2, 1};
  EXPECT_EQ(io::instance_from_json(io::to_json(r)), r);

  io::InstanceFile fl;
  fl.kind = io::InstanceKind::sym_left;
  fl.backend = io::Backend::floating;
  fl.involution = kTrans;
  fl.float_operands = {{"a", FM::from_rows({{ComplexFloat(0.1, 0.0)}}, kTrans)},
                       {"b", FM::from_rows({{ComplexFloat(-2.5e-7, 0.0)}}, kTrans)}};
  EXPECT_EQ(io::instance_from_json(io::to_json(fl)), fl);
}

TEST(InstanceFile, RandomRoundTrip) {
  GenRng rng(1);
  for (int t = 0; t < 50; ++t) {
    auto [a, b] = generate_pair(GenFamily::rejection, 1 + t % 3, t % 2 ? kTrans : kConj, rng);
    auto f = exact_instance(io::InstanceKind::plus, {{"a", a}, {"b", b}, {"c", mat_add(a, mat_star(a))}});
    EXPECT_EQ(io::instance_from_json(json::parse(io::to_json(f).dump())), f);
  }
}

TEST(InstanceFile, ExactEntriesAreDecimalStrings) {
  json j = io::to_json(scalar(gq(-3, 4, 5, 1)));
  EXPECT_EQ(j, json::parse(R"([[["-3","4","5","1"]]])"));
}

TEST(InstanceFile, SchemaErrors) {
  json good = io::to_json(scalar_minus(gz(0, 2)));
  auto bad = [&](auto mutate) {
    json j = good;
    mutate(j);
    EXPECT_THROW(io::instance_from_json(j), io::ParseError) << j.dump();
  };
  bad([](json& j) { j["version"] = "2"; });
  bad([](json& j) { j["kind"] = "sideways"; });
  bad([](json& j) { j["backend"] = "quantum"; });
  bad([](json& j) { j["operands"].erase("c"); });
  bad([](json& j) { j["operands"]["c"] = json::parse(R"([[["1","1","0","1"],["1","1","0","1"]]])"); });
  bad([](json& j) { j["operands"]["c"] = json::parse(R"([[["1","0","0","1"]]])"); });
  bad([](json& j) { j["operands"]["c"] = json::parse(R"([[["x","1","0","1"]]])"); });
  bad([](json& j) { j["operands"]["c"] = json::parse(R"([[[1.5, 0]]])"); });
  bad([](json& j) { j["dims"] = json::array({1, 1, 1}); });
  bad([](json& j) {
    j["involution"] = "transpose";
    j["operands"]["c"] = json::parse(R"([[["0","1","2","1"]]])");
  });
  bad([](json& j) { j.erase("backend"); });
}

TEST_F(CliTest, MpExampleAndZero) {
  json m = {{"version", "1"},
            {"backend", "exact"},
            {"involution", "transpose"},
            {"matrix", io::to_json(mat({{gz(1), gz(2)}, {gz(2), gz(4)}}, kTrans))}};
  io::write_json_file(path("m.json"), m);
  cli::Options o;
  o.input = path("m.json");
  o.output = path("r.json");
  ASSERT_EQ(run(cli::cmd_mp, o), cli::kOk) << err_.str();
  json r = read("r.json");
  EXPECT_EQ(r["mp_inverse"], io::to_json(mat({{gq(1, 25), gq(2, 25)}, {gq(2, 25), gq(4, 25)}}, kTrans)));
  EXPECT_TRUE(r["penrose_ok"].get<bool>());
  for (auto& [k, v] : r["penrose_residuals"].items()) EXPECT_EQ(v.get<double>(), 0.0) << k;

  m["matrix"] = io::to_json(M(2, 3, kTrans));
  io::write_json_file(path("z.json"), m);
  o.input = path("z.json");
  ASSERT_EQ(run(cli::cmd_mp, o), cli::kOk);
  EXPECT_EQ(read("r.json")["mp_inverse"], io::to_json(M(3, 2, kTrans)));
}

TEST_F(CliTest, MpFloat) {
  json m = {{"version", "1"},
            {"backend", "float"},
            {"involution", "conjugate_transpose"},
            {"matrix", json::parse("[[[1,1],[0,2]],[[3,0],[0.5,-1]]]")}};
  io::write_json_file(path("m.json"), m);
  cli::Options o;
  o.input = path("m.json");
  EXPECT_EQ(run(cli::cmd_mp, o), cli::kOk);
  EXPECT_TRUE(json::parse(out_.str())["penrose_ok"].get<bool>());
}

TEST_F(CliTest, MalformedInputExitsTwo) {
  cli::Options o;
  o.input = write("bad.json", "{ not json");
  EXPECT_EQ(run(cli::cmd_mp, o), cli::kParseError);
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kParseError);
  EXPECT_EQ(run(cli::cmd_check, o), cli::kParseError);
  o.input = write("schema.json", R"({"version":"1","backend":"exact"})");
  EXPECT_EQ(run(cli::cmd_mp, o), cli::kParseError);
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kParseError);
  o.input = path("missing.json");
  EXPECT_EQ(run(cli::cmd_check, o), cli::kParseError);
}

TEST_F(CliTest, ErrorMappingForNotMpInvertible) {
  EXPECT_EQ(cli::detail::guarded(err_, []() -> int { throw NotMpInvertible("x"); }), cli::kNotMpInvertible);
  EXPECT_EQ(cli::detail::guarded(err_, []() -> int { throw std::logic_error("x"); }), cli::kInternalError);
}

TEST_F(CliTest, CheckVerdicts) {
  cli::Options o;
  o.input = write_instance("s.json", scalar_minus(gz(0, 2)));
  ASSERT_EQ(run(cli::cmd_check, o), cli::kOk);
  json r = json::parse(out_.str());
  EXPECT_EQ(r["solvability"]["verdict"], "solvable");

  o.input = write_instance("d.json", exact_instance(io::InstanceKind::minus,
                                                    {{"a", diag({1, 0})}, {"b", diag({0, 1})}, {"c", M(2, 2)}}));
  ASSERT_EQ(run(cli::cmd_check, o), cli::kOk);
  r = json::parse(out_.str());
  EXPECT_FALSE(r["hypotheses"]["range_condition"]["holds"].get<bool>());
  EXPECT_EQ(r["solvability"]["failed_conditions"], json::array({"range_condition"}));
}

TEST_F(CliTest, CheckFlagsIndeterminateFloat) {
  io::InstanceFile f;
  f.backend = io::Backend::floating;
  FM one = FM::from_rows({{ComplexFloat(1.0, 0.0)}});
  f.float_operands = {{"a", one}, {"b", one}, {"c", FM::from_rows({{ComplexFloat(1e-10, 2.0)}})}};
  cli::Options o;
  o.input = write_instance("f.json", f);
  ASSERT_EQ(run(cli::cmd_check, o), cli::kOk);
  json r = json::parse(out_.str());
  EXPECT_TRUE(r["solvability"]["indeterminate"].get<bool>());
  EXPECT_TRUE(r["solvability"]["conditions"]["c_star_neq_minus_c"]["indeterminate"].get<bool>());
}

TEST_F(CliTest, SolveScalarWithSamplesAndOracle) {
  cli::Options o;
  o.input = write_instance("s.json", scalar_minus(gz(0, 2)));
  o.output = path("r.json");
  o.samples = 2;
  o.oracle = true;
  ASSERT_EQ(run(cli::cmd_solve, o), cli::kOk) << err_.str();
  json r = read("r.json");
  EXPECT_EQ(r["x0"], io::to_json(scalar(gz(0, 1))));
  ASSERT_EQ(r["samples"].size(), 2u);
  for (const auto& s : r["samples"]) {
    M x = io::matrix_from_json<Z>(s["x"], kConj);
    EXPECT_EQ(mat_sub(x, mat_star(x)), scalar(gz(0, 2)));
  }
  EXPECT_TRUE(r["oracle"]["family_check"]["passed"].get<bool>());
  EXPECT_TRUE(r["oracle"]["verdict_agrees"].get<bool>());
  EXPECT_NE(out_.str().find("solvable"), std::string::npos);
}

TEST_F(CliTest, SolveRect) {
  auto f = exact_instance(io::InstanceKind::rect_minus,
                          {{"A", scalar(gz(2))}, {"B", scalar(gz(2))}, {"C", scalar(gz(0, 4))}});
  cli::Options o;
  o.input = write_instance("r.json", f);
  o.oracle = true;
  ASSERT_EQ(run(cli::cmd_solve, o), cli::kOk) << err_.str();
  json r = json::parse(out_.str());
  EXPECT_EQ(r["x0"], io::to_json(scalar(gq(0, 1, 1, 2))));
  EXPECT_EQ(r["samples"].size(), cli::kDefaultSamples);
}

TEST_F(CliTest, SolveFailureExitCodes) {
  cli::Options o;
  o.input = write_instance("u.json", scalar_minus(gz(1)));
  o.output = path("r.json");
  o.oracle = true;
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kUnsolvable);
  json r = read("r.json");
  EXPECT_EQ(r["solvability"]["failed_conditions"], json::array({"c_star_neq_minus_c", "H_condition"}));
  EXPECT_FALSE(r.contains("x0"));
  EXPECT_FALSE(r["oracle"]["solvable"].get<bool>());

  o.input = write_instance("h.json", exact_instance(io::InstanceKind::minus,
                                                    {{"a", diag({1, 0})}, {"b", diag({0, 1})}, {"c", M(2, 2)}}));
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kHypothesesFail);
  EXPECT_TRUE(read("r.json")["oracle"]["solvable"].get<bool>());
}

TEST_F(CliTest, FloatOracleRejected) {
  io::InstanceFile f;
  f.backend = io::Backend::floating;
  FM one = FM::from_rows({{ComplexFloat(1.0, 0.0)}});
  f.float_operands = {{"a", one}, {"b", one}, {"c", FM::from_rows({{ComplexFloat(0.0, 2.0)}})}};
  cli::Options o;
  o.input = write_instance("f.json", f);
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kOk);
  o.oracle = true;
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kParseError);
}

TEST_F(CliTest, ToleranceFlagAndEnvironment) {
  io::InstanceFile f;
  f.backend = io::Backend::floating;
  FM one = FM::from_rows({{ComplexFloat(1.0, 0.0)}});
  f.float_operands = {{"a", one}, {"b", one}, {"c", FM::from_rows({{ComplexFloat(1e-6, 2.0)}})}};
  cli::Options o;
  o.input = write_instance("f.json", f);
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kUnsolvable);
  setenv(cli::kTolEnv, "1e-5", 1);
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kOk);
  o.tol = 1e-9;
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kUnsolvable);
  o.tol.reset();
  setenv(cli::kTolEnv, "lots", 1);
  EXPECT_EQ(run(cli::cmd_solve, o), cli::kParseError);
  unsetenv(cli::kTolEnv);
}

TEST_F(CliTest, GenIsDeterministic) {
  cli::Options o;
  o.family = "unitary";
  o.dims = "2";
  o.seed = 7;
  o.output = path("g1.json");
  ASSERT_EQ(run(cli::cmd_gen, o), cli::kOk) << err_.str();
  o.output = path("g2.json");
  ASSERT_EQ(run(cli::cmd_gen, o), cli::kOk);
  std::ifstream a(path("g1.json")), b(path("g2.json"));
  std::stringstream sa, sb;
  sa << a.rdbuf();
  sb << b.rdbuf();
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_FALSE(sa.str().empty());
}

TEST_F(CliTest, GenForceSolvableSolves) {
  for (std::string kind : {"minus", "plus", "sym_right", "sym_left", "rect_minus", "rect_plus"})
    for (std::string family : {"unitary", "b_eq_a", "diagonal", "rejection"})
      for (std::uint64_t seed : {1u, 2u}) {
        cli::Options g;
        g.kind = kind;
        g.family = family;
        g.dims = kind.starts_with("rect") ? (family == "unitary" ? "2,2,1" : "2,1,1") : "2";
        if (kind.starts_with("rect") && family == "b_eq_a") g.dims = "2,1,1";
        g.seed = seed;
        g.force_solvable = true;
        g.output = path("g.json");
        ASSERT_EQ(run(cli::cmd_gen, g), cli::kOk) << kind << " " << family << ": " << err_.str();
        cli::Options s;
        s.input = path("g.json");
        s.oracle = true;
        EXPECT_EQ(run(cli::cmd_solve, s), cli::kOk) << kind << " " << family << ": " << err_.str();
      }
}

TEST_F(CliTest, GenDiagonalSatisfiesHypotheses) {
  cli::Options g;
  g.family = "diagonal";
  g.dims = "3";
  g.seed = 3;
  g.output = path("g.json");
  ASSERT_EQ(run(cli::cmd_gen, g), cli::kOk);
  auto f = io::read_instance(path("g.json"));
  auto rep = check_hypotheses(MatrixRing<Z>(3), f.operand<Z>("a"), f.operand<Z>("b"));
  EXPECT_TRUE(rep.range_ok());
  EXPECT_TRUE(rep.hermitian_ok());
}

TEST_F(CliTest, GenProducesUnsolvableVariants) {
  int unsolvable = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    cli::Options g;
    g.family = "rejection";
    g.dims = "2";
    g.seed = seed;
    g.output = path("g.json");
    ASSERT_EQ(run(cli::cmd_gen, g), cli::kOk);
    cli::Options s;
    s.input = path("g.json");
    int rc = run(cli::cmd_solve, s);
    EXPECT_TRUE(rc == cli::kOk || rc == cli::kUnsolvable);
    unsolvable += rc == cli::kUnsolvable;
  }
  EXPECT_GT(unsolvable, 0);
}

TEST_F(CliTest, GenFloatBackend) {
  cli::Options g;
  g.backend = "float";
  g.force_solvable = true;
  g.seed = 4;
  g.output = path("g.json");
  ASSERT_EQ(run(cli::cmd_gen, g), cli::kOk);
  cli::Options s;
  s.input = path("g.json");
  EXPECT_EQ(run(cli::cmd_solve, s), cli::kOk) << err_.str();
}

TEST_F(CliTest, GenBadParameters) {
  for (auto mutate : std::vector<std::function<void(cli::Options&)>>{
           [](cli::Options& o) { o.kind = "diagonal"; },
           [](cli::Options& o) { o.family = "orthogonalish"; },
           [](cli::Options& o) { o.dims = "0"; },
           [](cli::Options& o) { o.dims = "2,x"; },
           [](cli::Options& o) { o.dims = "1,2,3"; },
           [](cli::Options& o) {
             o.kind = "rect_minus";
             o.family = "unitary";
             o.dims = "1,2,1";
           },
           [](cli::Options& o) { o.backend = "analog"; },
       }) {
    cli::Options g;
    mutate(g);
    EXPECT_EQ(run(cli::cmd_gen, g), cli::kParseError);
  }
}

TEST_F(CliTest, VerifyRoundTrip) {
  cli::Options o;
  o.input = write_instance("s.json", scalar_minus(gz(0, 2)));
  o.output = path("sol.json");
  ASSERT_EQ(run(cli::cmd_solve, o), cli::kOk);

  cli::Options v;
  v.input = path("s.json");
  v.solution = path("sol.json");
  EXPECT_EQ(run(cli::cmd_verify, v), cli::kOk);

  write("bad.json", json{{"solution", io::to_json(scalar(gz(1, 2)))}}.dump());
  v.solution = path("bad.json");
  EXPECT_EQ(run(cli::cmd_verify, v), cli::kVerifyFailed);
  EXPECT_GT(json::parse(out_.str())["residual"]["max_abs"].get<double>(), 0.0);

  write("shape.json", json{{"solution", io::to_json(M(2, 2))}}.dump());
  v.solution = path("shape.json");
  EXPECT_EQ(run(cli::cmd_verify, v), cli::kParseError);

  write("nokey.json", "{}");
  v.solution = path("nokey.json");
  EXPECT_EQ(run(cli::cmd_verify, v), cli::kParseError);
}

TEST_F(CliTest, VerifyRectAndSymmetric) {
  cli::Options v;
  v.input = write_instance("r.json", exact_instance(io::InstanceKind::rect_minus,
                                                    {{"A", scalar(gz(2))}, {"B", scalar(gz(2))}, {"C", scalar(gz(0, 4))}}));
  v.solution = write("x.json", json{{"solution", io::to_json(scalar(gq(0, 1, 1, 2)))}}.dump());
  EXPECT_EQ(run(cli::cmd_verify, v), cli::kOk);

  v.input = write_instance("s.json", exact_instance(io::InstanceKind::sym_right,
                                                    {{"a", diag({1, 0}, kTrans)},
                                                     {"b", mat({{gz(2), gz(1)}, {gz(1), gz(0)}}, kTrans)}}));
  v.solution = write("y.json", json{{"x0", io::to_json(mat({{gz(1), gz(0)}, {gz(1), gz(0)}}, kTrans))}}.dump());
  EXPECT_EQ(run(cli::cmd_verify, v), cli::kOk);
}
