#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include "support/random_formula.hpp"
#include "sylo/fol/latex.hpp"
#include "sylo/fol/prover9.hpp"

using namespace sylo;
using namespace sylo::fol;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::Io;
}

}  // namespace

TEST_CASE("latex parser builds the expected trees", "[fol][parse]") {
  auto s = parse_latex_formula("\\forall x (bird(x) \\rightarrow animal(x))");
  CHECK(s.formula() == forall("x", implies(atom("bird", "x"), atom("animal", "x"))));

  auto n = parse_latex_formula("\\neg \\exists x (rose(x) \\land plant(x))");
  CHECK(n.formula() == neg(exists("x", conj(atom("rose", "x"), atom("plant", "x")))));
}

TEST_CASE("latex parser rejects open and malformed input", "[fol][parse]") {
  CHECK(code_of([] { parse_latex_formula("p(x)"); }) == Errc::UnboundVariable);
  CHECK(code_of([] { parse_latex_formula("   "); }) == Errc::EmptyInput);
  CHECK(code_of([] { parse_latex_formula("\\forall x (p(x) \\land"); }) == Errc::SyntaxError);
  CHECK(code_of([] { parse_latex_formula("\\forall x p(x) \\rightarrow q(x)"); }) == Errc::AmbiguousScope);
  CHECK(code_of([] { parse_latex_formula("\\forall x (f(g(x)))"); }) == Errc::UnsupportedFeature);
  CHECK(code_of([] { parse_latex_formula("\\forall x (x = x)"); }) == Errc::UnsupportedFeature);
}

TEST_CASE("syntax errors report a position and expected tokens", "[fol][parse]") {
  try {
    parse_latex_formula("\\forall x (p(x) \\land )");
    FAIL("should not parse");
  } catch (const ParseError& e) {
    CHECK(e.position() > 0);
    CHECK_FALSE(e.expected().empty());
  }
}

TEST_CASE("precedence: not, and, or, implies (right), iff", "[fol][parse]") {
  auto s = parse_latex_formula("\\forall x (a(x) \\lor b(x) \\land \\neg c(x) \\rightarrow d(x) \\rightarrow e(x))");
  auto expected = forall(
      "x", implies(disj(atom("a", "x"), conj(atom("b", "x"), neg(atom("c", "x")))),
                   implies(atom("d", "x"), atom("e", "x"))));
  CHECK(s.formula() == expected);

  auto t = parse_latex_formula("\\forall x (a(x) \\leftrightarrow b(x) \\leftrightarrow c(x))");
  CHECK(t.formula() == forall("x", iff(iff(atom("a", "x"), atom("b", "x")), atom("c", "x"))));
}

TEST_CASE("latex aliases, wrappers and unicode are accepted", "[fol][parse]") {
  auto canonical = parse_latex_formula("\\forall x (bird(x) \\rightarrow \\neg fish(x))");
  for (const char* variant : {
           "\\boxed{\\forall x (bird(x) \\to \\lnot fish(x))}",
           "$\\forall x \\left( bird(x) \\Rightarrow \\neg fish(x) \\right)$",
           "∀x (bird(x) → ¬fish(x))",
           "\\forall x (\\text{bird}(x) \\rightarrow \\neg \\mathrm{fish}(x))",
           "first \\boxed{\\exists x (p(x))} then \\boxed{\\forall x (bird(x) \\implies \\neg fish(x))}",
       }) {
    INFO(variant);
    CHECK(parse_latex_formula(variant) == canonical);
  }
  CHECK(parse_latex_formula("\\forall x (a(x) \\wedge b(x) \\vee c(x))") ==
        parse_latex_formula("\\forall x (a(x) \\land b(x) \\lor c(x))"));
}

TEST_CASE("canonical latex rendering", "[fol][render]") {
  CHECK(render_latex(Sentence(forall("x", implies(atom("bird", "x"), atom("animal", "x"))))) ==
        "\\forall x (bird(x) \\rightarrow animal(x))");
  CHECK(render_latex(Sentence(exists("x", neg(atom("p", "x"))))) == "\\exists x (\\neg p(x))");
}

TEST_CASE("1000 random sentences round-trip through latex", "[fol][property]") {
  std::mt19937_64 rng(20240611);
  testing::FormulaShape shape;
  shape.max_depth = 6;
  shape.max_arity = 2;
  for (int i = 0; i < 1000; ++i) {
    auto s = testing::random_sentence(rng, shape);
    auto text = render_latex(s);
    INFO(text);
    REQUIRE(parse_latex_formula(text) == s);
  }
}

TEST_CASE("collect_predicates keeps first-occurrence order", "[fol]") {
  auto s = parse_latex_formula("\\forall x (bird(x) \\rightarrow animal(x) \\land bird(x))");
  CHECK(collect_predicates(s) == std::vector<std::string>{"bird", "animal"});
  auto t = parse_latex_formula("\\forall x (a(x) \\rightarrow \\exists y (b(y) \\land c(x)))");
  CHECK(collect_predicates(t) == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("predicates may not reuse bound variable names", "[fol]") {
  CHECK(code_of([] { Sentence(forall("x", atom("x", "x"))); }) == Errc::NameClash);
}

TEST_CASE("prover9 renderings match golden fixtures", "[fol][prover9][golden]") {
  std::ifstream in(std::string(SYLO_TEST_DATA) + "/golden/prover9_renderings.tsv");
  REQUIRE(in);
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    INFO(line);
    CHECK(render_prover9(parse_latex_formula(line.substr(0, tab))) == line.substr(tab + 1));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("prover9 output uses only the prover9 token set", "[fol][prover9][property]") {
  std::regex clause(R"(^(all|exists|[A-Za-z][A-Za-z0-9_]*|->|<->|[-&|(),. ])+\.$)");
  std::regex reserved(R"((^|[^A-Za-z0-9_])[pqr]\()");
  std::mt19937_64 rng(7);
  testing::FormulaShape shape;
  shape.predicates = {"p", "q", "bird", "r"};
  shape.max_depth = 5;
  for (int i = 0; i < 500; ++i) {
    auto s = testing::random_sentence(rng, shape);
    auto out = render_prover9(s);
    INFO(out);
    CHECK(std::regex_match(out, clause));
    CHECK_FALSE(std::regex_search(out, reserved));
    // Renaming is invertible here, so parsing the output back gives the
    // renamed tree with the same shape.
    auto back = parse_prover9_formula(out);
    CHECK(render_prover9(back) == out);
  }
}

TEST_CASE("prover9 parser and cleanup", "[fol][prover9]") {
  auto expected = forall("x", implies(atom("S", "x"), atom("P", "x")));
  CHECK(parse_prover9_formula("all x (S(x) -> P(x)).").formula() == expected);
  CHECK(parse_prover9_formula(cleanup_prover9("all x (S(x) \\rightarrow P(x));")).formula() == expected);
  CHECK(parse_prover9_formula(cleanup_prover9("\\boxed{all x (S(x) -> P(x)).}")).formula() == expected);
  CHECK(code_of([] { parse_prover9_formula("exists x P(x) & Q(x)"); }) == Errc::AmbiguousScope);
  CHECK(parse_prover9_formula("exists x (P(x) & Q(x))").formula() ==
        exists("x", conj(atom("P", "x"), atom("Q", "x"))));
}

TEST_CASE("prover9 cleanup is idempotent", "[fol][prover9][property]") {
  for (const char* raw : {"all x (S(x) -> P(x));", "$\\forall x (S(x) \\rightarrow P(x))$.",
                          "\\boxed{exists x (\\text{Cat}(x) \\land -Dog(x))}", "  -(exists x (Q(x)))  ..",
                          "all x (A(x) \\leftrightarrow \\neg B(x)) ;;"}) {
    INFO(raw);
    auto once = cleanup_prover9(raw);
    CHECK(cleanup_prover9(once) == once);
    CHECK(parse_prover9_formula(once) == parse_prover9_formula(cleanup_prover9(once)));
  }
}

TEST_CASE("renaming is consistent across a problem", "[fol][prover9]") {
  std::vector<Sentence> problem = {parse_latex_formula("\\forall x (p(x) \\rightarrow p_pred(x))"),
                                   parse_latex_formula("\\exists x (p(x))")};
  Prover9Names names(problem);
  auto a = render_prover9(problem[0], names);
  auto b = render_prover9(problem[1], names);
  CHECK(a == "all x (p_pred_pred(x) -> p_pred(x)).");
  CHECK(b == "exists x (p_pred_pred(x)).");
}
