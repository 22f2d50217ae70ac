#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "support/fixtures.hpp"
#include "support/gen.hpp"

using namespace lenard;
using namespace lenard::testing;
namespace fx = lenard::testing::fixtures;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the built CLI through the shell; stderr is folded into out.
Run cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" LENARD_CLI_PATH "' " + args + " 2>&1";
  Run r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

// Random strings in the expression grammar that denote valid functions.
class ExprGen {
public:
  explicit ExprGen(Gen& g) : g_(g) {}

  std::string expr(int depth) {
    std::string s = g_.coin(0.2) ? "-" : "";
    s += term(depth);
    const int k = g_.range(0, 2);
    for (int i = 0; i < k; ++i) s += (g_.coin() ? " + " : " - ") + term(depth);
    return s;
  }

private:
  std::string term(int depth) {
    std::string s = factor(depth);
    const int k = g_.range(0, 2);
    for (int i = 0; i < k; ++i) {
      if (g_.coin(0.2)) s += "/" + (g_.coin() ? std::to_string(g_.range(1, 9)) : "v^" + std::to_string(g_.range(1, 3)));
      else s += "*" + factor(depth);
    }
    return s;
  }

  std::string factor(int depth) {
    std::string a = atom(depth);
    if (g_.coin(0.2)) a += "^" + std::to_string(g_.range(0, 3));
    return a;
  }

  std::string atom(int depth) {
    const int pick = g_.range(0, depth > 0 ? 8 : 5);
    switch (pick) {
      case 0: return std::to_string(g_.range(0, 20));
      case 1: return "log(v)";
      case 2: return "v^-" + std::to_string(g_.range(1, 4));
      case 3: return std::string(g_.coin() ? "u" : "v") + "^(" + std::to_string(g_.range(0, 6)) + ")";
      case 4:
      case 5: return std::string(g_.coin() ? "u" : "v") + std::string(g_.range(0, 3), '\'');
      case 6: return "D(" + expr(depth - 1) + ")";
      default: return "(" + expr(depth - 1) + ")";
    }
  }

  Gen& g_;
};

MonoShape text_shape() {
  MonoShape s;
  s.laurent = true;
  s.log = true;
  s.max_order = 5;
  return s;
}

}  // namespace

TEST_CASE("parse examples") {
  CHECK(P("u'' + 4*u^2") == DiffFunction::u(2) + Rational(4) * DiffFunction::u().pow(2));
  CHECK(P("D(u*v)") == DiffFunction::u(1) * DiffFunction::v() + DiffFunction::u() * DiffFunction::v(1));
  CHECK(P("1/v^2") == DiffFunction::v(0, -2));
  CHECK(P("v^-2") == DiffFunction::v(0, -2));
  CHECK(P("v^(-2)") == DiffFunction::v(0, -2));
  CHECK(P("u^(3)") == P("u'''"));
  CHECK(P("u^(0)") == P("u"));
  CHECK(P("u^3") == P("u*u*u"));
  CHECK(P("3/4*u") == Rational(3, 4) * DiffFunction::u());
  CHECK(P("2*-u") == P("-2*u"));
  CHECK(P("(u+v)^2") == P("u^2 + 2*u*v + v^2"));
  CHECK(P("log(v)*v'") == DiffFunction::log_v() * DiffFunction::v(1));
  CHECK(P("D(log(v))") == P("v'/v"));
  CHECK(P("0").is_zero());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_WITH_AS(P("u^-1"), doctest::Contains("EXPONENT_ERROR"), Error);
  CHECK_THROWS_WITH_AS(P("1/u"), doctest::Contains("EXPONENT_ERROR"), Error);
  CHECK_THROWS_WITH_AS(P("(u+v)^-1"), doctest::Contains("EXPONENT_ERROR"), Error);
  CHECK_THROWS_WITH_AS(P("1/0"), doctest::Contains("EXPONENT_ERROR"), Error);
  CHECK_THROWS_WITH_AS(P("u +* v"), doctest::Contains("line 1, column 4"), Error);
  CHECK_THROWS_WITH_AS(P("u +\n  * v"), doctest::Contains("line 2, column 3"), Error);
  for (const char* bad : {"", "w", "u +", "log(u)", "D(u", "u^", "u^(x)", ")", "u v", "2..3", "d"}) {
    CAPTURE(bad);
    try {
      P(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
    }
  }
  CHECK_THROWS_WITH_AS(P("u^5000"), doctest::Contains("too large"), Error);
  CHECK_THROWS_WITH_AS(P("(u+v)^40"), doctest::Contains("SYNTAX_ERROR"), Error);
  CHECK_THROWS_WITH_AS(P(std::string(500, '(') + "u" + std::string(500, ')')), doctest::Contains("too deep"),
                       Error);
  CHECK_THROWS_WITH_AS(P("u^(5000)"), doctest::Contains("SYNTAX_ERROR"), Error);
}

TEST_CASE("operator parsing") {
  CHECK(Op("d*u") == ScalarDiffOp({P("u'"), P("u")}));
  CHECK(Op("d^2") == ScalarDiffOp::d(2));
  CHECK(Op("d*(1/v^2)") == ScalarDiffOp({P("-2*v'*v^-3"), P("v^-2")}));
  CHECK(Op("u*d/2") == ScalarDiffOp({0, P("u/2")}));
  CHECK(Op("d*D(u)") == ScalarDiffOp({P("u''"), P("u'")}));
  CHECK_THROWS_WITH_AS(Op("d^-1"), doctest::Contains("EXPONENT_ERROR"), Error);
  CHECK_THROWS_WITH_AS(Op("u/d"), doctest::Contains("SYNTAX_ERROR"), Error);
  CHECK_THROWS_WITH_AS(Op("D(d)"), doctest::Contains("SYNTAX_ERROR"), Error);
}

TEST_CASE("JSON emission") {
  CHECK(to_json(DiffFunction{}).dump() == "[]");
  CHECK(to_json(P("u''")).dump() == R"([{"c":"1","m":[[1,2,1]]}])");
  CHECK(to_json(P("3/4*u*log(v)^2/v^2")).dump() ==
        R"([{"c":"3/4","m":[[1,0,1],[2,0,-2],["log",0,2]]}])");
  CHECK(to_json(Op("d*u")).dump() ==
        R"([{"c":[{"c":"1","m":[[1,1,1]]}],"k":0},{"c":[{"c":"1","m":[[1,0,1]]}],"k":1}])");
  CHECK(function_from_json(to_json(P("u'"))) == P("u'"));

  const auto run = run_hierarchy(1, 0, 1);
  const Json j = to_json(run);
  CHECK(j["epsilon"] == 1);
  CHECK(j["alpha"] == 0);
  REQUIRE(j["steps"].size() == 2);
  CHECK(vector_from_json(j["steps"][1]["flow"]) == fx::flow10_1());
  CHECK(function_from_json(j["steps"][1]["density"]) == run.densities[1].density);
  CHECK(j["orders"][1] == Json::array({4, 0, 7}));
  CHECK(j["orders"][0] == Json::array({nullptr, nullptr, 1}));
}

TEST_CASE("JSON input validation") {
  const char* syntax[] = {R"({})", R"([{"c":"x","m":[]}])", R"([{"c":"1/0","m":[]}])",
                          R"([{"c":"1","m":[[0,0,1]]}])", R"([{"c":"1","m":[[1,-1,1]]}])",
                          R"([{"c":"1"}])", R"([{"c":"1","m":[["exp",0,1]]}])", R"([{"c":"1","m":[[1,0]]}])"};
  for (const char* s : syntax) {
    CAPTURE(s);
    try {
      function_from_json(Json::parse(s));
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
    }
  }
  CHECK_THROWS_WITH_AS(function_from_json(Json::parse(R"([{"c":"1","m":[[1,0,-1]]}])")),
                       doctest::Contains("EXPONENT_ERROR"), Error);
  CHECK(function_from_json(Json::parse(R"([{"c":"2/4","m":[[1,0,1]]},{"c":"1/2","m":[[1,0,1]]}])")) == P("u"));
}

TEST_CASE("text and LaTeX") {
  CHECK(to_text(DiffFunction{}) == "0");
  CHECK(to_text(P("u'''*u^(5) - u''/2")) == "-1/2*u'' + u^(3)*u^(5)");
  const auto xi01 = fx::xi(0, 1);
  const std::string tex = to_latex(xi01[1]);
  CHECK(tex.find("\\frac{v''}{v^3}") != std::string::npos);
  CHECK(tex.find("\\frac{3 v'^2}{2 v^4}") != std::string::npos);
  CHECK(to_latex(xi01[0]) == "\\frac{1}{v}");
  CHECK(to_latex(DiffFunction{}) == "0");
  const std::string run_tex = to_latex(run_hierarchy(1, 0, 1));
  CHECK(run_tex.find("\\begin{align*}") != std::string::npos);
  CHECK(run_tex.find("u^{(4)}") != std::string::npos);
}

TEST_CASE("property: JSON roundtrip and injectivity") {
  Gen g(51);
  MonoShape s = text_shape();
  s.n_vars = 3;
  std::set<std::string> seen;
  std::vector<DiffFunction> values;
  for (int i = 0; i < 300; ++i) {
    const auto f = g.function(5, s);
    const std::string bytes = to_json(f).dump();
    CHECK(function_from_json(Json::parse(bytes)) == f);
    CHECK(to_json(function_from_json(Json::parse(bytes))).dump() == bytes);
    bool dup = false;
    for (const auto& v : values) dup = dup || v == f;
    if (!dup) {
      CHECK(seen.insert(bytes).second);
      values.push_back(f);
    }
  }
  for (int i = 0; i < 50; ++i) {
    const auto op = g.scalar_op(3, 3, text_shape());
    CHECK(operator_from_json(to_json(op)) == op);
    const auto m = g.matrix_op(2, 2, 2, text_shape());
    CHECK(matrix_from_json(to_json(m)) == m);
    const auto vec = g.vector(2, 3, text_shape());
    CHECK(vector_from_json(to_json(vec)) == vec);
  }
}

TEST_CASE("property: text output reparses") {
  Gen g(52);
  for (int i = 0; i < 300; ++i) {
    const auto f = g.function(5, text_shape());
    CHECK(P(to_text(f)) == f);
  }
  for (int i = 0; i < 60; ++i) {
    const auto op = g.scalar_op(3, 3, text_shape());
    CHECK(Op(to_text(op)) == op);
  }
}

TEST_CASE("property: grammar fuzzing") {
  Gen g(53);
  ExprGen eg(g);
  // well-formed input parses, or is refused as too large to expand
  int parsed = 0;
  for (int i = 0; i < 400; ++i) {
    const std::string src = eg.expr(3);
    CAPTURE(src);
    try {
      P(src);
      ++parsed;
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SyntaxError);
      CHECK(std::string(e.what()).find("too large") != std::string::npos);
    }
  }
  CHECK(parsed >= 380);
  CHECK_THROWS_WITH_AS(P("(u+v+u'+v'+u''+v'')^12*(u+v+u'+v'+u''+v'')^12"), doctest::Contains("too large"),
                       Error);
  const std::string alphabet = "uvdDlog()^*/+-'0123456789 \n\t{}[]\"\\x";
  for (int i = 0; i < 3000; ++i) {
    std::string src;
    const int len = g.range(0, 24);
    for (int k = 0; k < len; ++k) {
      src += g.coin(0.8) ? alphabet[g.range(0, static_cast<int>(alphabet.size()) - 1)]
                         : static_cast<char>(g.range(0, 255));
    }
    try {
      P(src);
    } catch (const Error& e) {
      const bool expected = e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::ExponentError;
      CHECK(expected);
    }
  }
  // truncations and single-byte mutations of valid input
  for (int i = 0; i < 300; ++i) {
    std::string src = eg.expr(2);
    if (g.coin()) src.resize(g.range(0, static_cast<int>(src.size())));
    else if (!src.empty()) src[g.range(0, static_cast<int>(src.size()) - 1)] = static_cast<char>(g.range(32, 126));
    try {
      P(src);
    } catch (const Error& e) {
      const bool expected = e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::ExponentError;
      CHECK(expected);
    }
  }
}

TEST_CASE("command line") {
  CHECK(cli("verify-compatible --builtin").code == 0);
  CHECK(cli("verify-poisson --builtin h0").code == 0);
  CHECK(cli("verify-poisson --builtin h1").code == 0);

  const auto bad = cli("verify-poisson --op " + quote(R"([["d^3 + 2*u^2*d + 2*u*u'"]])"));
  CHECK(bad.code == 2);
  CHECK(bad.out.find("residual") != std::string::npos);
  CHECK(cli("verify-compatible --first " + quote(R"([["d^3"]])") + " --second " +
            quote(R"([["2*u^2*d + 2*u*u'"]])"))
            .code == 2);
  CHECK(cli("verify-compatible --first " + quote(R"([["d^3"]])") + " --second " +
            quote(R"([["2*u*d + u'"]])"))
            .code == 0);

  const auto red = cli("reduce " + quote("D(u*u')"));
  CHECK(red.code == 0);
  CHECK(Json::parse(red.out)["zero"] == true);
  const auto red2 = cli("reduce " + quote("u*u''"));
  CHECK(function_from_json(Json::parse(red2.out)["remainder"]) == P("-u'^2"));

  const auto hy = cli("hierarchy --eps 1 --alpha 0 --steps 1");
  REQUIRE(hy.code == 0);
  CHECK(vector_from_json(Json::parse(hy.out)["steps"][1]["flow"]) == fx::flow10_1());

  const std::string file = "cli_test_out.json";
  std::remove(file.c_str());
  CHECK(cli("hierarchy --eps 0 --alpha 0 --steps 0 --out " + file).code == 0);
  std::ifstream in(file);
  REQUIRE(in.good());
  CHECK(Json::parse(in)["epsilon"] == 0);

  CHECK(cli("casimir-check").code == 0);
  CHECK(cli("casimir-check --op " + quote(R"([["d^3 + d*u + u*d", "v*d"], ["d*v", "0"]])") + " --xi " +
            quote(R"(["1/v", "-u/v^2 - 3/2*v'^2/v^4 + v''/v^3"])") + " --density " +
            quote("u/v - v'^2/(2*v^3)"))
            .code == 0);
  CHECK(cli("casimir-check --op " + quote(R"([["d^3 + d*u + u*d", "v*d"], ["d*v", "0"]])") + " --xi " +
            quote(R"(["1", "0"])"))
            .code == 2);

  const auto fl = cli("flow u --builtin h0");
  CHECK(fl.code == 0);
  CHECK(vector_from_json(Json::parse(fl.out)["value"]) == fx::flow10());
  CHECK(cli("bracket u 'u^2*v' --builtin h0").code == 0);
  CHECK(vector_from_json(Json::parse(cli("varder " + quote("v^3/6 + u*u''/2")).out)["value"]) ==
        V("u''", "v^2/2"));
  CHECK(cli("frechet \"u''\" \"v'\"").code == 0);
  CHECK(cli("fmt --latex -- '-1/v'").out.find("\\frac{1}{v}") != std::string::npos);

  // failures by class
  const auto exp = cli("fmt 'u^-1'");
  CHECK(exp.code == 4);
  CHECK(exp.out.find("EXPONENT_ERROR") != std::string::npos);
  const auto syn = cli("fmt 'u +* v'");
  CHECK(syn.code == 4);
  CHECK(syn.out.find("line 1, column 4") != std::string::npos);
  CHECK(cli("hierarchy --eps 2 --alpha 0 --steps 1").code == 4);
  CHECK(cli("nonsense").code == 4);
  CHECK(cli("fmt @/nonexistent/file").code == 4);
  CHECK(cli("verify-poisson --op '[[1,2]'").code == 4);
  CHECK(cli("hierarchy --eps 1 --alpha 0 --steps 1", "LENARD_WIDEN_CAP=abc").code == 4);
  const auto nosol =
      cli("hierarchy --eps 1 --alpha 0 --steps 1 --method ansatz --order-bound 0", "LENARD_WIDEN_CAP=0");
  CHECK(nosol.code == 3);
  CHECK(nosol.out.find("step 1") != std::string::npos);
  CHECK(cli("hierarchy --eps 1 --alpha 0 --steps 1 --method ansatz --order-bound 0", "LENARD_WIDEN_CAP=2")
            .code == 0);
}
