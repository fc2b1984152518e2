#include <cctype>
#include <vector>

#include "spartan/lang.hpp"

namespace spartan {

ParseError::ParseError(const std::string& msg, int line_, int column_)
    : std::runtime_error(std::to_string(line_) + ":" + std::to_string(column_) + ": " + msg),
      line(line_),
      column(column_) {}

namespace {

enum class Tok { Int, Ident, Sym, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
  bool adjacent = false;  // no whitespace before this token
};

const char* const kSymbols[] = {":=", "<=", "⟨⟩", "λ", "(", ")", "[", "]", ",", ";", ".", "=", "+", "-", "!", "|"};

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  bool adjacent = false;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      adjacent = false;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      adjacent = false;
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    t.adjacent = adjacent;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Tok::Int;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else {
      bool matched = false;
      for (const char* sym : kSymbols) {
        std::string_view s(sym);
        if (src.substr(i, s.size()) == s) {
          t.kind = Tok::Sym;
          t.text = std::string(s);
          advance(s.size());
          matched = true;
          break;
        }
      }
      if (!matched) throw ParseError("unexpected character '" + std::string(1, c) + "'", line, col);
    }
    out.push_back(std::move(t));
    adjacent = true;
  }
  Token end;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

bool is_keyword(const std::string& s) {
  static const char* const kw[] = {"bind", "in", "new", "lambda", "let", "nu", "ref", "neg", "tt", "ff"};
  for (auto k : kw)
    if (s == k) return true;
  return false;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, const ParseOptions& opts, std::set<std::string> used)
      : toks_(std::move(toks)), opts_(opts), used_(std::move(used)) {
    reg_ = opts.registry ? opts.registry : &builtin_ops();
  }

  TermPtr parse_all() {
    auto t = parse_seq();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return t;
  }

 private:
  struct Scope {
    std::string name;
    bool is_atom;
  };

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool at_sym(std::string_view s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at_word(std::string_view s) const { return peek().kind == Tok::Ident && peek().text == s; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().line, peek().col); }
  void expect_sym(std::string_view s) {
    if (!at_sym(s)) fail("expected '" + std::string(s) + "'");
    next();
  }
  void expect_word(std::string_view s) {
    if (!at_word(s)) fail("expected '" + std::string(s) + "'");
    next();
  }
  std::string expect_ident() {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected identifier");
    return next().text;
  }

  OpSignature sig(std::string_view name) const {
    auto s = reg_->lookup(name);
    if (!s) fail("unknown operation " + std::string(name));
    return *s;
  }

  std::string fresh() {
    for (;;) {
      std::string candidate = "_" + std::to_string(fresh_counter_++);
      if (!used_.count(candidate)) {
        used_.insert(candidate);
        return candidate;
      }
    }
  }

  TermPtr lambda(std::string x, TermPtr body) const {
    return mk::op(sig(opname::kLambda), {}, {mk::thunk({std::move(x)}, std::move(body))});
  }
  TermPtr app(TermPtr f, TermPtr a) const { return mk::op(sig(opname::kApp), {std::move(f), std::move(a)}, {}); }

  TermPtr resolve(const std::string& name) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->name == name) return it->is_atom ? mk::atom(name) : mk::var(name);
    return opts_.free_atoms.count(name) ? mk::atom(name) : mk::var(name);
  }

  template <class F>
  TermPtr scoped(std::vector<Scope> names, F&& f) {
    for (auto& n : names) scope_.push_back(n);
    auto t = f();
    scope_.resize(scope_.size() - names.size());
    return t;
  }

  TermPtr parse_seq() {
    auto lhs = parse_assign();
    if (at_sym(";")) {
      next();
      std::string x = fresh();
      auto rhs = scoped({{x, false}}, [&] { return parse_seq(); });
      return app(lambda(x, rhs), lhs);
    }
    return lhs;
  }

  TermPtr parse_assign() {
    auto lhs = parse_eq();
    if (at_sym(":=")) {
      next();
      auto rhs = parse_assign();
      return mk::op(sig(opname::kAssign), {lhs, rhs}, {});
    }
    return lhs;
  }

  TermPtr parse_eq() {
    auto lhs = parse_add();
    while (at_sym("=")) {
      next();
      auto rhs = parse_add();
      lhs = mk::op(sig(opname::kEq), {lhs, rhs}, {});
    }
    return lhs;
  }

  TermPtr parse_add() {
    auto lhs = parse_app();
    while (at_sym("+") || at_sym("-")) {
      bool plus = next().text == "+";
      auto rhs = parse_app();
      lhs = mk::op(sig(plus ? opname::kAdd : opname::kSub), {lhs, rhs}, {});
    }
    return lhs;
  }

  bool starts_argument() const {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: return true;
      case Tok::Ident: return t.text != "in";
      case Tok::Sym: return t.text == "(" || t.text == "!" || t.text == "λ" || t.text == "⟨⟩";
      case Tok::End: return false;
    }
    return false;
  }

  TermPtr parse_app() {
    auto f = parse_prefix();
    while (starts_argument()) {
      auto a = parse_prefix();
      f = app(f, a);
    }
    return f;
  }

  TermPtr parse_prefix() {
    if (at_sym("!")) {
      next();
      return mk::op(sig(opname::kDeref), {parse_prefix()}, {});
    }
    if ((at_word("neg") || at_word("ref")) && !generic_ahead()) {
      std::string w = next().text;
      return mk::op(sig(w == "neg" ? opname::kNeg : opname::kRef), {parse_prefix()}, {});
    }
    return parse_atom();
  }

  bool generic_ahead() const {
    return peek().kind == Tok::Ident && reg_->lookup(peek().text) && peek(1).kind == Tok::Sym &&
           peek(1).text == "(" && peek(1).adjacent;
  }

  TermPtr parse_generic() {
    Token name = next();
    OpSignature s = sig(name.text);
    expect_sym("(");
    std::vector<TermPtr> eager, deferred;
    if (!at_sym(";")) {
      for (;;) {
        eager.push_back(parse_assign());
        if (!at_sym(",")) break;
        next();
      }
    }
    expect_sym(";");
    if (!at_sym(")")) {
      for (;;) {
        expect_sym("[");
        std::vector<std::string> ys;
        while (!at_sym("]")) ys.push_back(expect_ident());
        next();
        std::vector<Scope> sc;
        for (auto& y : ys) sc.push_back({y, false});
        auto body = scoped(sc, [&] { return parse_assign(); });
        deferred.push_back(mk::thunk(ys, body));
        if (!at_sym(",")) break;
        next();
      }
    }
    expect_sym(")");
    if (eager.size() != s.eager || deferred.size() != s.deferred.size())
      throw ParseError("arity mismatch for " + name.text, name.line, name.col);
    for (std::size_t j = 0; j < deferred.size(); ++j)
      if (deferred[j]->params.size() != s.deferred[j])
        throw ParseError("thunk arity mismatch for " + name.text, name.line, name.col);
    return mk::op(s, eager, deferred);
  }

  TermPtr parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::Int) {
      auto n = numeral_value(next().text);
      if (!n) fail("integer literal out of range");
      return mk::op(numeral_sig(*n), {}, {});
    }
    if (at_sym("-") && peek(1).kind == Tok::Int && peek(1).adjacent) {
      next();
      auto n = numeral_value("-" + next().text);
      if (!n) fail("integer literal out of range");
      return mk::op(numeral_sig(*n), {}, {});
    }
    if (at_sym("⟨⟩")) {
      next();
      return mk::op(sig(opname::kUnit), {}, {});
    }
    if (at_sym("(")) {
      next();
      if (at_sym(")")) {
        next();
        return mk::op(sig(opname::kUnit), {}, {});
      }
      auto inner = parse_seq();
      expect_sym(")");
      return inner;
    }
    if (at_sym("[")) {
      next();
      expect_sym("]");
      return mk::hole("h", opts_.hole_env);
    }
    if (at_sym("λ")) {
      next();
      return parse_lambda_rest();
    }
    if (t.kind != Tok::Ident) fail(t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
    if (generic_ahead()) return parse_generic();
    const std::string w = t.text;
    if (w == "tt" || w == "ff") {
      next();
      return mk::op(sig(w), {}, {});
    }
    if (w == "lambda") {
      next();
      return parse_lambda_rest();
    }
    if (w == "nu") {
      next();
      std::string x = expect_ident();
      expect_sym(".");
      auto body = scoped({{x, false}}, [&] { return parse_seq(); });
      auto unit = mk::op(sig(opname::kUnit), {}, {});
      return app(lambda(x, body), mk::op(sig(opname::kRef), {unit}, {}));
    }
    if (w == "bind" || w == "let") {
      next();
      std::string x = expect_ident();
      expect_sym("=");
      auto bound = parse_seq();
      expect_word("in");
      auto body = scoped({{x, false}}, [&] { return parse_seq(); });
      return w == "bind" ? mk::bind(x, bound, body) : app(lambda(x, body), bound);
    }
    if (w == "new") {
      next();
      std::string a = expect_ident();
      expect_sym("<=");
      auto bound = parse_seq();
      expect_word("in");
      auto body = scoped({{a, true}}, [&] { return parse_seq(); });
      return mk::new_(a, bound, body);
    }
    if (is_keyword(w)) fail("unexpected keyword '" + w + "'");
    next();
    return resolve(w);
  }

  TermPtr parse_lambda_rest() {
    std::string x = expect_ident();
    expect_sym(".");
    auto body = scoped({{x, false}}, [&] { return parse_seq(); });
    return lambda(x, body);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const ParseOptions& opts_;
  const OpRegistry* reg_;
  std::vector<Scope> scope_;
  std::set<std::string> used_;
  int fresh_counter_ = 0;
};

}  // namespace

TermPtr parse(std::string_view text, const ParseOptions& opts) {
  auto toks = tokenize(text);
  std::set<std::string> used;
  for (auto& t : toks)
    if (t.kind == Tok::Ident) used.insert(t.text);
  Parser p(std::move(toks), opts, std::move(used));
  return p.parse_all();
}

}  // namespace spartan
