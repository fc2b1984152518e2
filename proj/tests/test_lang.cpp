#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "spartan/lang.hpp"

using namespace spartan;

namespace {

std::string roundtrip(const std::string& src) { return print(*parse(src)); }

}  // namespace

TEST_CASE("parse and print") {
  CHECK(roundtrip("1+2") == "1 + 2");
  CHECK(roundtrip("1 + 2 + 3") == "1 + 2 + 3");
  CHECK(roundtrip("1 + (2 + 3)") == "1 + (2 + 3)");
  CHECK(roundtrip("f x y") == "f x y");
  CHECK(roundtrip("f (x y)") == "f (x y)");
  CHECK(roundtrip("!x + 1") == "!x + 1");
  CHECK(roundtrip("!!x") == "!!x");
  CHECK(roundtrip("x := y := 1") == "x := y := 1");
  CHECK(roundtrip("a = b = c") == "a = b = c");
  CHECK(roundtrip("neg 3 - 4") == "neg 3 - 4");
  CHECK(roundtrip("f (-3)") == "f (-3)");
  CHECK(roundtrip("-3 + 1") == "-3 + 1");
  CHECK(roundtrip("tt") == "tt");
  CHECK(roundtrip("()") == "()");
  CHECK(roundtrip("lambda x. x + 1") == "lambda x. x + 1");
  CHECK(roundtrip("λx. x") == "lambda x. x");
  CHECK(roundtrip("bind x = 1 in x") == "bind x = 1 in x");
  CHECK(roundtrip("new a <= 0 in !a") == "new a <= 0 in !a");
  CHECK(roundtrip("(lambda x. x) 1") == "(lambda x. x) 1");
  CHECK(roundtrip("ref (lambda x. x)") == "ref (lambda x. x)");
  CHECK(roundtrip("1 + (bind x = 2 in x)") == "1 + (bind x = 2 in x)");
}

TEST_CASE("sugar expands to application") {
  CHECK(roundtrip("let x = 1 in x") == "(lambda x. x) 1");
  CHECK(roundtrip("nu z. z") == "(lambda z. z) (ref ())");
  TermPtr seq = parse("1; 2");
  REQUIRE(seq->kind == TermKind::Op);
  CHECK(seq->sig.name == opname::kApp);
  CHECK(seq->children[0]->sig.name == opname::kLambda);
  CHECK(free_vars(*seq).empty());
}

TEST_CASE("generic operation syntax") {
  CHECK(roundtrip("add(1, 2;)") == "1 + 2");
  CHECK(roundtrip("lambda(; [x] x)") == "lambda x. x");
  CHECK_THROWS_AS(parse("add(1;)"), ParseError);
}

TEST_CASE("atoms and variables are resolved by scope") {
  TermPtr t = parse("new a <= 0 in a = b");
  const Term& eq = t->body();
  CHECK(eq.children[0]->kind == TermKind::Atom);
  CHECK(eq.children[1]->kind == TermKind::Var);
  ParseOptions po;
  po.free_atoms = {"b"};
  TermPtr u = parse("new a <= 0 in a = b", po);
  CHECK(u->body().children[1]->kind == TermKind::Atom);
  CHECK(free_atoms(*u) == std::set<std::string>{"b"});
}

TEST_CASE("parse errors carry a position") {
  try {
    parse("1 +\n  )");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 3);
  }
  CHECK_THROWS_AS(parse("bind x = 1"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("1 2 )"), ParseError);
}

TEST_CASE("typing follows the environment discipline") {
  CHECK(typecheck({}, *parse("1 + 2")) == VertexLabel::star());
  CHECK(typecheck({{"x"}, {}}, *parse("x")) == VertexLabel::star());
  CHECK_THROWS_AS(typecheck({}, *parse("x")), TypeError);
  ParseOptions po;
  po.free_atoms = {"a"};
  CHECK(typecheck({{}, {"a"}}, *parse("a", po)) == VertexLabel::star());
  CHECK_THROWS_AS(typecheck({}, *parse("a", po)), TypeError);

  // A binder may not shadow a name of the environment.
  CHECK_THROWS_AS(typecheck({}, *parse("bind x = 1 in bind x = 2 in x")), TypeError);
  CHECK_THROWS_AS(typecheck({}, *parse("new a <= 1 in new a <= 2 in a")), TypeError);

  // The hole's annotation must equal the environment at the hole.
  ParseOptions hole;
  hole.hole_env = {{"x"}, {}};
  CHECK_NOTHROW(typecheck({}, *parse("bind x = 1 in [ ]", hole)));
  CHECK_THROWS_AS(typecheck({}, *parse("[ ]", hole)), TypeError);
  hole.hole_env = {{"y", "x"}, {}};
  CHECK_NOTHROW(typecheck({}, *parse("bind x = 1 in lambda y. [ ]", hole)));
  hole.hole_env = {{"x", "y"}, {}};
  CHECK_THROWS_AS(typecheck({}, *parse("bind x = 1 in lambda y. [ ]", hole)), TypeError);
  hole.hole_env = {{}, {"b", "a"}};
  CHECK_NOTHROW(typecheck({}, *parse("new a <= 1 in new b <= 2 in [ ]", hole)));

  CHECK(is_program(*parse("lambda x. x")));
  CHECK_FALSE(is_program(*parse("lambda x. y")));
}

TEST_CASE("free names") {
  TermPtr t = parse("bind x = y in lambda z. x + z + w");
  CHECK(free_vars(*t) == std::set<std::string>{"w", "y"});
  CHECK(free_atoms(*t).empty());
}

TEST_CASE("generativity and values") {
  CHECK(is_non_generative(*parse("lambda x. new a <= 0 in a")));
  CHECK_FALSE(is_non_generative(*parse("new a <= 0 in a")));
  CHECK(is_non_generative(*parse("ref 0")));
  CHECK(is_value(*parse("3")));
  CHECK(is_value(*parse("lambda x. x x")));
  CHECK_FALSE(is_value(*parse("1 + 2")));
  ParseOptions po;
  po.free_atoms = {"a"};
  CHECK(is_value(*parse("a", po)));
}

TEST_CASE("capture-avoiding substitution") {
  TermPtr body = parse("lambda y. x + y");
  TermPtr out = substitute(body, "x", parse("y"));
  // The bound y is renamed so the substituted y stays free.
  CHECK(free_vars(*out) == std::set<std::string>{"y"});
  CHECK(print(*out) != "lambda y. y + y");

  CHECK(print(*substitute(parse("bind x = x in x"), "x", parse("1"))) == "bind x = 1 in x");
  CHECK(print(*substitute(parse("x + x"), "x", parse("2"))) == "2 + 2");
  CHECK(print(*substitute(parse("lambda x. x"), "x", parse("2"))) == "lambda x. x");
}

TEST_CASE("term size counts AST nodes but not thunk wrappers") {
  CHECK(term_size(*parse("1")) == 1);
  CHECK(term_size(*parse("1 + 2")) == 3);
  CHECK(term_size(*parse("lambda x. x")) == 2);
  CHECK(term_size(*parse("bind x = 0 in x")) == 3);
}

TEST_CASE("plugging a term-context") {
  ParseOptions po;
  po.hole_env = {{"x"}, {}};
  TermPtr ctx = parse("bind x = 1 in [ ] + 1", po);
  TermPtr out = plug_term(ctx, "h", parse("x"));
  CHECK(print(*out) == "bind x = 1 in x + 1");
  CHECK(is_program(*out));
}

TEST_CASE("corpus files parse and print back to an equal term") {
  for (const auto& e : std::filesystem::directory_iterator(SPARTAN_CORPUS_DIR)) {
    if (e.path().extension() != ".sp") continue;
    CAPTURE(e.path().filename().string());
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    TermPtr t = parse(ss.str());
    CHECK(is_program(*t));
    TermPtr again = parse(print(*t));
    CHECK(*again == *t);
  }
}
